import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.polys.polyfuncs import symmetrize

from hk import chow
from hk.errors import ParseError, RankMismatch, RankTooSmall


def _to_class(R, poly_expr, assignment):
    """Evaluate a sympy polynomial in the Chow ring, substituting classes for symbols."""
    syms = list(assignment)
    P = sympy.Poly(sympy.expand(poly_expr), *syms)
    out = R.zero()
    for mono, coeff in P.terms():
        term = R.one() * int(coeff)
        for s, e in zip(syms, mono):
            term = term * assignment[s] ** e
        out = out + term
    return out


def _elementary(F, xs, names):
    """Rewrite a polynomial symmetric in ``xs`` through elementary symmetric symbols ``names``."""
    sym, rem, defs = symmetrize(F, *xs, formal=True)
    assert rem == 0
    return sym.subs({d[0]: n for d, n in zip(defs, names)}, simultaneous=True)


def test_tangent_g24_by_splitting_principle():
    # T_G = U^vee (x) Q: roots b_j - a_i
    a1, a2, b1, b2 = sympy.symbols("a1 a2 b1 b2")
    ea1, ea2, eb1, eb2 = sympy.symbols("ea1 ea2 eb1 eb2")
    F = sympy.expand(sympy.prod([1 + b - a for a in (a1, a2) for b in (b1, b2)]))
    G = _elementary(F, (a1, a2), (ea1, ea2))
    G = _elementary(sympy.expand(G), (b1, b2), (eb1, eb2))
    R = chow.ring_G24()
    s1, s2, s11 = R.gen("s1"), R.gen("s2"), R.gen("s11")
    # c(U) = 1 - s1 + s11, c(Q) = 1 + s1 + s2
    oracle = _to_class(R, G, {ea1: -s1, ea2: s11, eb1: s1, eb2: s2})
    assert chow.tangent_G24().total == oracle
    assert chow.integrate(chow.tangent_G24().c(4)) == 6


def test_tangent_pn():
    for n in (1, 2, 3, 4):
        R = chow.ring_Pn(n)
        h = R.gen("h")
        assert chow.tangent_Pn(R).total == (R.one() + h) ** (n + 1)
        assert chow.integrate(chow.tangent_Pn(R).c(n)) == n + 1


def test_schubert_integrals():
    R = chow.ring_G24()
    s1, s2, s11 = R.gen("s1"), R.gen("s2"), R.gen("s11")
    assert chow.integrate(s1 ** 4) == 2
    assert chow.integrate(s2 * s2) == 1
    assert chow.integrate(s11 * s11) == 1
    assert chow.integrate(s2 * s11) == 0
    U, Q = chow.tautological_G24()
    assert (U.total * Q.total) == R.one()


def test_product_ring():
    R = chow.ring_P1xG24()
    h1, h2 = R.gen("h1"), R.gen("h2")
    assert h2 * h2 == 0
    assert chow.integrate(h2 * h1 ** 4) == 2
    assert chow.integrate(h1 ** 5) == 0


line_coeffs = st.lists(st.integers(-3, 3), min_size=3, max_size=3)


@settings(max_examples=40, deadline=None)
@given(line_coeffs)
def test_lambda2_by_splitting(cs):
    R = chow.ring_Pn(3)
    h = R.gen("h")
    Ls = [chow.line_bundle(R, c * h) for c in cs]
    E = Ls[0] + Ls[1] + Ls[2]
    want = (
        chow.line_bundle(R, (cs[0] + cs[1]) * h)
        + chow.line_bundle(R, (cs[0] + cs[2]) * h)
        + chow.line_bundle(R, (cs[1] + cs[2]) * h)
    )
    assert chow.chern_lambda2_rank3(E).total == want.total


def _random_bundle(R, gens, cs):
    E = chow.trivial(R, 0)
    for c in cs:
        l = sum((k * g for k, g in zip(c, gens)), R.zero())
        E = E + chow.line_bundle(R, l)
    return E


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2)), min_size=1, max_size=4),
       st.tuples(st.integers(-2, 2), st.integers(-2, 2)),
       st.tuples(st.integers(-2, 2), st.integers(-2, 2)))
def test_dual_involution_and_twist_associativity(cs, l1, l2):
    R = chow.ring_P1xG24()
    gens = (R.gen("h2"), R.gen("h1"))
    E = _random_bundle(R, gens, cs) + chow.pullback_bundle(R, chow.tangent_G24(), 1)
    assert chow.chern_dual(chow.chern_dual(E)).total == E.total
    L1 = l1[0] * gens[0] + l1[1] * gens[1]
    L2 = l2[0] * gens[0] + l2[1] * gens[1]
    lhs = chow.chern_twist(chow.chern_twist(E, L1), L2)
    rhs = chow.chern_twist(E, L1 + L2)
    assert lhs.total == rhs.total
    # dual commutes with twisting by the opposite class
    assert chow.chern_dual(chow.chern_twist(E, L1)).total == chow.chern_twist(chow.chern_dual(E), -L1).total


def test_inverse():
    R = chow.ring_G24()
    x = R.one() + 2 * R.gen("s1") - R.gen("s2")
    assert x * x.inverse() == R.one()
    with pytest.raises(ValueError):
        (R.scalar(2)).inverse()


def test_t1_plus_number():
    E = chow.t1_plus()
    assert E.rank == 6
    assert chow.integrate(chow.lagrangian_d2(E)) == 16


def test_wedge2_twisted_tangent_is_omega3():
    # wedge^2 T_P3 twisted by -1 has c1 = 5h
    R = chow.ring_Pn(3)
    E = chow.chern_twist(chow.chern_lambda2_rank3(chow.tangent_Pn(R)), -R.gen("h"))
    assert E.c1 == 5 * R.gen("h")


def test_t3_minus_sign_convention():
    rep = chow.lagrangian_d2_report(chow.t3_minus())
    R = chow.ring_P1xG24()
    assert rep.raw == -4 * R.gen("s21")
    assert rep.dual == 4 * R.gen("s21") == 2 * R.gen("h1") ** 3
    assert rep.used_dual


def test_t3_plus_readings():
    proj = chow.lagrangian_d2_report(chow.segre_tangent_class("projective"))
    seq = chow.lagrangian_d2_report(chow.segre_tangent_class("sequence"))
    assert proj.effective == chow.paper_class_t3_plus()
    assert chow.p1_times_p2_pairing(proj.effective) == 12
    # the rank-7 reading loses the h2 terms; kept as a recorded residual
    assert chow.p1_times_p2_pairing(seq.raw) == 0
    with pytest.raises(ValueError):
        chow.segre_tangent_class("bogus")


def test_rank_errors():
    R = chow.ring_Pn(3)
    with pytest.raises(RankMismatch):
        chow.chern_lambda2_rank3(chow.trivial(R, 2))
    with pytest.raises(RankTooSmall):
        chow.lagrangian_d2(chow.trivial(R, 2))


@pytest.mark.parametrize(
    "expr, ring, want",
    [
        ("integrate(d2(2*lambda2(twist(T, -h))))", "P3", 16),
        ("integrate(c4(T))", "G24", 6),
        ("integrate(s1**4)", "G24", 2),
        ("integrate(d2dual(T3minus) * h2 * s1)", "P1xG24", 4),
    ],
)
def test_evaluate(expr, ring, want):
    assert chow.evaluate(expr, ring) == want


@pytest.mark.parametrize("bad", ["T +", "foo(T)", "-T", "T ** 2", "T / 2", "zz"])
def test_evaluate_errors(bad):
    with pytest.raises(ParseError):
        chow.evaluate(bad, "P3")


def test_whitney_and_trivial_summand():
    R = chow.ring_P1xG24()
    E = chow.t3_minus()
    L = chow.line_bundle(R, R.gen("h2"))
    assert chow.chern_sum(E, L).total == chow.chern_from_sequence(E, L).total
    assert chow.lagrangian_d2(chow.trivial(R, 1) + E) == chow.lagrangian_d2(E)
