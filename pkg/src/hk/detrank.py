"""Truncated determinants of polynomial matrices and the transversal D4 jet test.

Polynomials are exact (``Fraction`` coefficients) and truncated above a
total-degree cutoff; every product drops the overflow terms immediately, so
a 9x9 determinant never materialises high-degree junk.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import sympy

from . import _intmat as im
from .errors import HasLinearPart, NonSquare, NotHomogeneousQuadratic, OutOfRange, ParseError

DEFAULT_VARS = ("x", "y", "z", "t", "u")


@dataclass(frozen=True)
class TruncatedPoly:
    n_vars: int
    cutoff: int
    terms: tuple  # sorted ((exponents, Fraction), ...) with nonzero coefficients

    @classmethod
    def from_dict(cls, n_vars, cutoff, d):
        items = []
        for e, c in d.items():
            c = Fraction(c)
            if c and sum(e) <= cutoff:
                if len(e) != n_vars:
                    raise OutOfRange("exponent length does not match n_vars")
                items.append((tuple(e), c))
        return cls(n_vars, cutoff, tuple(sorted(items)))

    @classmethod
    def const(cls, n_vars, cutoff, c):
        return cls.from_dict(n_vars, cutoff, {(0,) * n_vars: c})

    @classmethod
    def var(cls, n_vars, cutoff, i, c=1):
        e = [0] * n_vars
        e[i] = 1
        return cls.from_dict(n_vars, cutoff, {tuple(e): c})

    def as_dict(self):
        return dict(self.terms)

    def is_zero(self):
        return not self.terms

    def _other(self, other):
        if isinstance(other, TruncatedPoly):
            if other.n_vars != self.n_vars:
                raise OutOfRange("polynomials in different numbers of variables")
            return other
        return TruncatedPoly.const(self.n_vars, self.cutoff, other)

    def __add__(self, other):
        o = self._other(other)
        d = self.as_dict()
        for e, c in o.terms:
            d[e] = d.get(e, 0) + c
        return TruncatedPoly.from_dict(self.n_vars, min(self.cutoff, o.cutoff), d)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedPoly(self.n_vars, self.cutoff, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        o = self._other(other)
        cut = min(self.cutoff, o.cutoff)
        d = {}
        for e1, c1 in self.terms:
            s1 = sum(e1)
            for e2, c2 in o.terms:
                if s1 + sum(e2) > cut:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                d[e] = d.get(e, 0) + c1 * c2
        return TruncatedPoly.from_dict(self.n_vars, cut, d)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TruncatedPoly):
            other = self._other(other)
        return self.n_vars == other.n_vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.n_vars, self.terms))

    def degree_part(self, k):
        return TruncatedPoly(self.n_vars, self.cutoff, tuple((e, c) for e, c in self.terms if sum(e) == k))

    def truncate(self, k):
        return TruncatedPoly.from_dict(self.n_vars, min(k, self.cutoff), self.as_dict())

    def drop_above(self, k):
        """Discard terms of degree > k but keep the cutoff."""
        return TruncatedPoly(self.n_vars, self.cutoff, tuple((e, c) for e, c in self.terms if sum(e) <= k))

    def to_sympy(self, names=DEFAULT_VARS):
        syms = sympy.symbols(names[: self.n_vars])
        out = sympy.Integer(0)
        for e, c in self.terms:
            mono = sympy.Rational(c.numerator, c.denominator)
            for s, k in zip(syms, e):
                mono *= s ** k
            out += mono
        return out

    def __str__(self):
        return str(sympy.expand(self.to_sympy())) if self.n_vars <= len(DEFAULT_VARS) else repr(self.terms)


def parse_poly(text, cutoff, names=DEFAULT_VARS):
    syms = sympy.symbols(names)
    local = dict(zip(names, syms))
    try:
        expr = sympy.sympify(text.strip() or "0", locals=local, rational=True)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ParseError(f"cannot parse polynomial {text!r}: {exc}") from None
    extra = expr.free_symbols - set(syms)
    if extra:
        raise ParseError(f"unknown variables {sorted(map(str, extra))} in {text!r}")
    poly = sympy.Poly(sympy.expand(expr), *syms, domain="QQ")
    d = {}
    for e, c in poly.terms():
        d[tuple(e)] = Fraction(int(c.numerator), int(c.denominator))
    return TruncatedPoly.from_dict(len(names), cutoff, d)


def read_matrix(text, cutoff, names=DEFAULT_VARS):
    """Rows on separate lines, cells separated by ``;``; ``#`` starts a comment."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([parse_poly(cell, cutoff, names) for cell in line.split(";")])
        except ParseError as exc:
            raise ParseError(str(exc), lineno) from None
    if not rows:
        raise ParseError("empty matrix file")
    if any(len(r) != len(rows) for r in rows):
        raise NonSquare(f"matrix is not square ({len(rows)} rows, row lengths {sorted({len(r) for r in rows})})")
    return rows


def _check_square(M):
    n = len(M)
    if n == 0 or any(len(r) != n for r in M):
        raise NonSquare("matrix must be square and nonempty")
    return n


def truncated_det(M, cutoff):
    """Determinant modulo terms of total degree above ``cutoff``.

    Laplace expansion along rows from the bottom up, memoised on the set of
    columns still available: ``2^n`` minors instead of ``n!`` products.
    """
    n = _check_square(M)
    if cutoff < 0:
        raise OutOfRange("cutoff must be nonnegative")
    nv = M[0][0].n_vars
    M = [[e.truncate(cutoff) for e in row] for row in M]
    one = TruncatedPoly.const(nv, cutoff, 1)
    # minors[mask] = det of the last popcount(mask) rows restricted to columns in mask
    minors = {0: one}
    for size in range(1, n + 1):
        row = n - size
        nxt = {}
        for mask, sub in minors.items():
            if sub.is_zero():
                continue
            for j in range(n):
                if mask >> j & 1:
                    continue
                entry = M[row][j]
                if entry.is_zero():
                    continue
                # sign: position of column j among the columns of mask | j
                pos = bin(mask & ((1 << j) - 1)).count("1")
                term = entry * sub
                if pos % 2:
                    term = -term
                key = mask | (1 << j)
                nxt[key] = nxt[key] + term if key in nxt else term
        minors = nxt
    return minors.get((1 << n) - 1, TruncatedPoly.const(nv, cutoff, 0))


def homogeneous_part(f, k):
    if k < 0 or k > f.cutoff:
        raise OutOfRange(f"degree {k} outside 0..{f.cutoff}")
    return f.degree_part(k)


def linear_truncation(M):
    _check_square(M)
    return [[e.drop_above(1) for e in row] for row in M]


def quadratic_matrix(phi2):
    if any(sum(e) != 2 for e, _ in phi2.terms):
        raise NotHomogeneousQuadratic("not a homogeneous quadratic form")
    n = phi2.n_vars
    A = [[Fraction(0)] * n for _ in range(n)]
    for e, c in phi2.terms:
        idx = [i for i, k in enumerate(e) for _ in range(k)]
        i, j = idx
        if i == j:
            A[i][i] += c
        else:
            A[i][j] += c / 2
            A[j][i] += c / 2
    return A


def quadratic_rank(phi2):
    if phi2.is_zero():
        return 0
    return im.rank_q(quadratic_matrix(phi2))


def _binary_cubic(f3, k1, k2):
    """Coefficients (a, b, c, d) of ``f3(s k1 + t k2) = a s^3 + b s^2 t + c s t^2 + d t^3``."""
    out = [Fraction(0)] * 4
    for e, coef in f3.terms:
        # product of (k1_i s + k2_i t)^e_i as a list indexed by power of t
        poly = [Fraction(1)]
        for i, k in enumerate(e):
            for _ in range(k):
                new = [Fraction(0)] * (len(poly) + 1)
                for p, v in enumerate(poly):
                    new[p] += v * k1[i]
                    new[p + 1] += v * k2[i]
                poly = new
        for p, v in enumerate(poly):
            out[p] += coef * v
    return tuple(out)


def binary_cubic_discriminant(a, b, c, d):
    return b * b * c * c - 4 * a * c ** 3 - 4 * b ** 3 * d - 27 * a * a * d * d + 18 * a * b * c * d


def d4_type_check(f, n_vars=None):
    """Transversal D4 test on the 3-jet.

    After the splitting lemma ``f ~ Q(nondegenerate) + g(s, t)`` and the
    3-jet of ``g`` is the cubic part of ``f`` restricted to the kernel of the
    quadratic part; D4 means this binary cubic has three distinct roots.
    Equivalent to the normal form ``F^2 + G H (G + H) + (order 4)`` in the
    transversal variables.
    """
    n = f.n_vars if n_vars is None else n_vars
    if f.cutoff < 3:
        raise OutOfRange("need the 3-jet (cutoff >= 3)")
    if not f.degree_part(0).is_zero():
        raise HasLinearPart("f does not vanish at the origin")
    if not f.degree_part(1).is_zero():
        raise HasLinearPart("f has a nonzero linear part")
    phi2 = f.degree_part(2)
    A = quadratic_matrix(phi2) if not phi2.is_zero() else [[Fraction(0)] * f.n_vars for _ in range(f.n_vars)]
    # only the first n variables are transversal coordinates
    A = [row[:n] for row in A[:n]]
    if any(e[i] for e, _ in f.terms for i in range(n, f.n_vars)):
        raise OutOfRange("f involves variables beyond n_vars")
    if im.rank_q(A) != n - 2:
        return False
    ker = im.nullspace_q(A, n)
    k1 = list(ker[0]) + [Fraction(0)] * (f.n_vars - n)
    k2 = list(ker[1]) + [Fraction(0)] * (f.n_vars - n)
    a, b, c, d = _binary_cubic(f.degree_part(3), k1, k2)
    return binary_cubic_discriminant(a, b, c, d) != 0


def change_variables(f, P):
    """``f(P x)`` for a square rational matrix ``P`` (truncation preserved)."""
    n = f.n_vars
    lin = [TruncatedPoly.from_dict(n, f.cutoff, {tuple(int(k == j) for k in range(n)): P[i][j] for j in range(n)}) for i in range(n)]
    out = TruncatedPoly.const(n, f.cutoff, 0)
    for e, c in f.terms:
        term = TruncatedPoly.const(n, f.cutoff, c)
        for i, k in enumerate(e):
            for _ in range(k):
                term = term * lin[i]
        out = out + term
    return out


# ---------------------------------------------------------------------------
# the local model


_PAPER_ROWS = (
    "0;0;0;0;x;t+x*t;0;y+y*x;0",
    "0;0;0;-x;0;u+x*u;-y-y*x;0;0",
    "0;0;0;-t-x*t;-u-x*u;0;0;0;0",
    "0;-x;-t-x*t;0;0;0;0;z+z*x;0",
    "x;0;-u-u*x;0;0;0;-z-z*x;0;0",
    # the (6,1) entry is taken as t+x*t to keep the matrix symmetric
    "t+x*t;u+u*x;0;0;0;0;0;0;0",
    "0;-y-y*x;0;0;-z-z*x;0;0;0;0",
    "y+y*x;0;0;z+z*x;0;0;0;0;0",
    "0;0;0;0;0;0;0;0;0",
)


def local_model_matrix(cutoff=2, zero_at=0):
    """``diag(0, 1, ..., 1)`` (zero in position ``zero_at``) plus the linear-in-coordinates matrix."""
    text = "\n".join(_PAPER_ROWS)
    M = read_matrix(text, cutoff)
    n = len(M)
    for i in range(n):
        if i != zero_at:
            M[i][i] = M[i][i] + 1
    return M


def random_corank1_instance(n, n_vars, cutoff, rng, kernel_isotropic=True, density=0.5):
    """``M = M0 + L + N`` with ``M0`` of corank one and kernel ``w``.

    ``kernel_isotropic`` forces ``w^T (M - M0) w = 0`` to all orders; without
    it Phi_1 and the higher part of Phi_2 pick up ``w^T (M - M0) w``.
    """
    def rnd():
        return Fraction(rng.randint(-3, 3), rng.randint(1, 3))

    while True:
        P = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        if im.rank_q(P) == n:
            break
    D = [[Fraction(0)] * n for _ in range(n)]
    for i in range(1, n):
        D[i][i] = Fraction(rng.choice([1, 2, -1]))
    M0 = im.matmul(im.matmul(im.transpose(P), D), P)
    Pinv = im.inverse_q(P)
    w = [Pinv[i][0] for i in range(n)]
    ww = sum(x * x for x in w)

    monos = [e for e in _monomials(n_vars, cutoff) if sum(e) >= 1]
    M = [[{(0,) * n_vars: M0[i][j]} for j in range(n)] for i in range(n)]
    for e in monos:
        if rng.random() > density:
            continue
        X = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                if rng.random() < 0.4:
                    X[i][j] = X[j][i] = rnd()
        if kernel_isotropic:
            q = sum(w[i] * X[i][j] * w[j] for i in range(n) for j in range(n))
            alpha = q / (ww * ww)
            for i in range(n):
                for j in range(n):
                    X[i][j] -= alpha * w[i] * w[j]
        for i in range(n):
            for j in range(n):
                if X[i][j]:
                    M[i][j][e] = M[i][j].get(e, 0) + X[i][j]
    out = [[TruncatedPoly.from_dict(n_vars, cutoff, M[i][j]) for j in range(n)] for i in range(n)]
    return out, w


def _monomials(n_vars, cutoff):
    def rec(i, left):
        if i == n_vars:
            yield ()
            return
        for k in range(left + 1):
            for rest in rec(i + 1, left - k):
                yield (k,) + rest

    return [e for e in rec(0, cutoff)]


def kernel_form(M, w):
    """``w^T M w`` as a truncated polynomial."""
    n = len(M)
    out = TruncatedPoly.const(M[0][0].n_vars, M[0][0].cutoff, 0)
    for i in range(n):
        for j in range(n):
            if w[i] and w[j] and not M[i][j].is_zero():
                out = out + M[i][j] * (w[i] * w[j])
    return out


def phi2_invariance_trials(count=25, n=6, n_vars=3, cutoff=2, seed=0, kernel_isotropic=True):
    """Compare Phi_2 before and after linear truncation on random instances."""
    rng = random.Random(seed)
    results = []
    for _ in range(count):
        M, _w = random_corank1_instance(n, n_vars, cutoff, rng, kernel_isotropic)
        full = homogeneous_part(truncated_det(M, cutoff), 2)
        lin = homogeneous_part(truncated_det(linear_truncation(M), cutoff), 2)
        results.append(full == lin)
    return results
