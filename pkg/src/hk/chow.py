"""Integral Chow rings of P^n, G(2,4) and their products, with Chern class calculus.

Rings are presented by a graded basis and integer structure constants.
Classes are immutable coefficient vectors; bundles are (rank, total Chern
class) pairs, so every operation here works on the level of the splitting
principle without choosing roots.
"""

from __future__ import annotations

import ast
import operator
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .errors import ParseError, RankMismatch, RankTooSmall


class ChowRing:
    def __init__(self, name, labels, degrees, table, point):
        self.name = name
        self.labels = tuple(labels)
        self.degrees = tuple(degrees)
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        # table[i][j] = {k: coeff}
        self.table = table
        self.dim = max(self.degrees)
        self.point = point
        self.generators = {}

    def __repr__(self):
        return f"ChowRing({self.name})"

    def zero(self):
        return ChowClass(self, (0,) * len(self.labels))

    def one(self):
        return self.basis(self.labels[self.degrees.index(0)])

    def basis(self, label):
        v = [0] * len(self.labels)
        v[self.index[label]] = 1
        return ChowClass(self, tuple(v))

    def scalar(self, n):
        return self.one() * n

    def gen(self, name):
        return self.generators[name]

    def mul(self, a, b):
        out = [0] * len(self.labels)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                for k, c in self.table[i][j].items():
                    out[k] += x * y * c
        return tuple(out)


@dataclass(frozen=True, eq=False)
class ChowClass:
    ring: ChowRing
    coeffs: tuple

    def _lift(self, other):
        if isinstance(other, ChowClass):
            if other.ring is not self.ring:
                raise RankMismatch("classes live in different rings")
            return other
        return self.ring.scalar(int(other))

    def __add__(self, other):
        o = self._lift(other)
        return ChowClass(self.ring, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return ChowClass(self.ring, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, ChowClass):
            return ChowClass(self.ring, self.ring.mul(self.coeffs, self._lift(other).coeffs))
        return ChowClass(self.ring, tuple(a * int(other) for a in self.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.scalar(other)
        return isinstance(other, ChowClass) and other.ring is self.ring and other.coeffs == self.coeffs

    def __hash__(self):
        return hash((id(self.ring), self.coeffs))

    def part(self, d):
        return ChowClass(self.ring, tuple(c if deg == d else 0 for c, deg in zip(self.coeffs, self.ring.degrees)))

    def is_zero(self):
        return not any(self.coeffs)

    def is_effective(self):
        return all(c >= 0 for c in self.coeffs)

    def terms(self):
        return {lab: c for lab, c in zip(self.ring.labels, self.coeffs) if c}

    def __str__(self):
        items = [(lab, c) for lab, c in zip(self.ring.labels, self.coeffs) if c]
        if not items:
            return "0"
        parts = []
        for lab, c in items:
            mono = "" if lab == "1" else lab
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__

    def inverse(self):
        """Inverse of a class with constant term +-1 (nilpotent tail)."""
        u = sum(self.part(0).coeffs)
        if u not in (1, -1):
            raise ValueError("only classes with unit constant term are invertible")
        tail = self * u - 1
        out, term = self.ring.one(), self.ring.one()
        for _ in range(self.ring.dim):
            term = term * (-tail)
            out = out + term
        return out * u


def integrate(x):
    """Coefficient of the point class."""
    return x.coeffs[x.ring.index[x.ring.point]]


# ---------------------------------------------------------------------------
# rings


@lru_cache(maxsize=None)
def ring_Pn(n):
    if n < 1:
        raise ValueError("n must be positive")
    labels = ["1"] + [f"h^{k}" if k > 1 else "h" for k in range(1, n + 1)]
    table = [[({i + j: 1} if i + j <= n else {}) for j in range(n + 1)] for i in range(n + 1)]
    R = ChowRing(f"P{n}", labels, range(n + 1), table, labels[n])
    R.generators["h"] = R.basis("h")
    return R


_G24_LABELS = ("1", "s1", "s2", "s11", "s21", "s22")
_G24_DEG = (0, 1, 2, 2, 3, 4)
_G24_RULES = {
    ("s1", "s1"): {"s2": 1, "s11": 1},
    ("s1", "s2"): {"s21": 1},
    ("s1", "s11"): {"s21": 1},
    ("s1", "s21"): {"s22": 1},
    ("s2", "s2"): {"s22": 1},
    ("s11", "s11"): {"s22": 1},
    ("s2", "s11"): {},
}


@lru_cache(maxsize=None)
def ring_G24():
    idx = {lab: i for i, lab in enumerate(_G24_LABELS)}
    n = len(_G24_LABELS)
    table = [[{} for _ in range(n)] for _ in range(n)]
    for i, a in enumerate(_G24_LABELS):
        for j, b in enumerate(_G24_LABELS):
            if a == "1":
                table[i][j] = {j: 1}
            elif b == "1":
                table[i][j] = {i: 1}
            elif _G24_DEG[i] + _G24_DEG[j] > 4:
                table[i][j] = {}
            else:
                rule = _G24_RULES.get((a, b), _G24_RULES.get((b, a)))
                table[i][j] = {idx[k]: v for k, v in rule.items()}
    R = ChowRing("G24", _G24_LABELS, _G24_DEG, table, "s22")
    for lab in _G24_LABELS[1:]:
        R.generators[lab] = R.basis(lab)
    return R


def ring_product(R1, R2, names=None):
    """Kunneth product; basis labels are ``a*b`` with the trivial factor dropped.

    ``names`` optionally renames the degree-1 generators of each factor.
    """
    names = names or {}
    labels, degrees, pairs = [], [], []
    for i, a in enumerate(R1.labels):
        a = names.get((0, a), a)
        for j, b in enumerate(R2.labels):
            b = names.get((1, b), b)
            pairs.append((i, j))
            lab = "*".join(x for x in (a, b) if x != "1") or "1"
            labels.append(lab)
            degrees.append(R1.degrees[i] + R2.degrees[j])
    pidx = {p: k for k, p in enumerate(pairs)}
    table = []
    for i1, j1 in pairs:
        row = []
        for i2, j2 in pairs:
            out = {}
            for k1, c1 in R1.table[i1][i2].items():
                for k2, c2 in R2.table[j1][j2].items():
                    k = pidx[(k1, k2)]
                    out[k] = out.get(k, 0) + c1 * c2
            row.append(out)
        table.append(row)
    point = labels[pidx[(R1.index[R1.point], R2.index[R2.point])]]
    R = ChowRing(f"{R1.name}x{R2.name}", labels, degrees, table, point)
    R.factors = (R1, R2)
    R.pair_index = pidx
    for name, g in R1.generators.items():
        R.generators[names.get((0, name), name)] = pullback(R, g, 0)
    for name, g in R2.generators.items():
        R.generators[names.get((1, name), name)] = pullback(R, g, 1)
    return R


def pullback(R, x, factor):
    """Pull a class back along the projection of the product ``R`` to a factor."""
    R1, R2 = R.factors
    out = [0] * len(R.labels)
    for k, c in enumerate(x.coeffs):
        if not c:
            continue
        pair = (k, R2.index[R2.labels[R2.degrees.index(0)]]) if factor == 0 else (R1.degrees.index(0), k)
        out[R.pair_index[pair]] += c
    return ChowClass(R, tuple(out))


@lru_cache(maxsize=None)
def ring_P1xG24():
    """``P^1 x G(2,4)``; ``h2`` is the point class of ``P^1``, ``h1 = s1``."""
    R = ring_product(ring_Pn(1), ring_G24(), names={(0, "h"): "h2"})
    R.generators["h1"] = R.generators["s1"]
    return R


RINGS = {"P1": lambda: ring_Pn(1), "P2": lambda: ring_Pn(2), "P3": lambda: ring_Pn(3), "G24": ring_G24, "P1xG24": ring_P1xG24}


def get_ring(name):
    if name not in RINGS:
        raise ParseError(f"unknown ring {name!r}; choose from {', '.join(RINGS)}")
    return RINGS[name]()


# ---------------------------------------------------------------------------
# bundles


@dataclass(frozen=True)
class ChernClass:
    ring: ChowRing
    rank: int
    total: ChowClass

    def c(self, k):
        return self.total.part(k)

    @cached_property
    def c1(self):
        return self.c(1)

    def __add__(self, other):
        return chern_sum(self, other)

    def __rmul__(self, k):
        out = trivial(self.ring, 0)
        for _ in range(int(k)):
            out = chern_sum(out, self)
        return out

    def __str__(self):
        return f"rank {self.rank}: c = {self.total}"


def trivial(R, rank):
    return ChernClass(R, rank, R.one())


def line_bundle(R, l):
    return ChernClass(R, 1, R.one() + l)


def chern_sum(E, F):
    return ChernClass(E.ring, E.rank + F.rank, E.total * F.total)


def chern_from_sequence(sub, quot):
    return chern_sum(sub, quot)


def chern_dual(E):
    R = E.ring
    out = R.zero()
    for d in range(R.dim + 1):
        out = out + E.c(d) * (-1) ** d
    return ChernClass(R, E.rank, out)


def chern_twist(E, l):
    """``c(E (x) L)`` with ``c1(L) = l``: ``sum_k c_k(E) (1 + l)^(r - k)``."""
    R = E.ring
    out = R.zero()
    for k in range(min(E.rank, R.dim) + 1):
        out = out + E.c(k) * (R.one() + l) ** (E.rank - k)
    return ChernClass(R, E.rank, out)


def chern_lambda2_rank3(E):
    """``wedge^2 E`` for rank 3 via ``wedge^2 E = E^vee (x) det E``."""
    if E.rank != 3:
        raise RankMismatch(f"lambda2 formula needs rank 3, got {E.rank}")
    return chern_twist(chern_dual(E), E.c1)


def tangent_Pn(R):
    n = R.dim
    h = R.gen("h")
    return ChernClass(R, n, (R.one() + h) ** (n + 1))


def tautological_G24(R=None):
    """(U, Q) on G(2,4): ``c(U) = 1 - s1 + s11``, ``c(Q) = 1 + s1 + s2``."""
    R = R or ring_G24()
    g = R.gen
    U = ChernClass(R, 2, R.one() - g("s1") + g("s11"))
    Q = ChernClass(R, 2, R.one() + g("s1") + g("s2"))
    return U, Q


def tangent_G24(R=None):
    """Tangent bundle via the quadric presentation ``G(2,4) in P^5``: (1+s1)^6 / (1+2 s1)."""
    R = R or ring_G24()
    s1 = R.gen("s1")
    return ChernClass(R, 4, (R.one() + s1) ** 6 * (R.one() + 2 * s1).inverse())


def pullback_bundle(R, E, factor):
    return ChernClass(R, E.rank, pullback(R, E.total, factor))


# ---------------------------------------------------------------------------
# Lagrangian degeneracy classes


def lagrangian_d2(E):
    """``c1 c2 - 2 c3`` of ``E``."""
    if E.rank < 3:
        raise RankTooSmall(f"rank {E.rank} < 3")
    return E.c(1) * E.c(2) - 2 * E.c(3)


@dataclass(frozen=True)
class D2Report:
    raw: ChowClass
    dual: ChowClass

    @property
    def effective(self):
        """The raw class unless it is non-effective and the dual one is effective."""
        if not self.raw.is_effective() and self.dual.is_effective():
            return self.dual
        return self.raw

    @property
    def used_dual(self):
        return self.effective is self.dual and self.raw != self.dual


def lagrangian_d2_report(E):
    return D2Report(lagrangian_d2(E), lagrangian_d2(chern_dual(E)))


def t1_plus():
    """``2 wedge^2(T_P3(-1))`` on P^3."""
    R = ring_Pn(3)
    E = chern_lambda2_rank3(chern_twist(tangent_Pn(R), -R.gen("h")))
    return 2 * E


def t3_minus():
    """``pi2^* U + pi2^* Q^vee`` on P^1 x G(2,4)."""
    R = ring_P1xG24()
    U, Q = tautological_G24()
    return chern_sum(pullback_bundle(R, U, 1), pullback_bundle(R, chern_dual(Q), 1))


def segre_tangent_class(reading="projective"):
    """``(T3+)^vee`` on P^1 x G(2,4).

    ``"projective"``: dual of the rank-6 affine tangent bundle of the Segre
    embedding, ``0 -> O(-H) -> T^ -> T_X(-H) -> 0`` with ``H = h2 + s1``.
    ``"sequence"``: the rank-7 bundle read off
    ``0 -> O(-h2) + T_G^vee -> (T3+)^vee -> O(h2) + O_G(s1)``.
    """
    R = ring_P1xG24()
    h2, s1 = R.gen("h2"), R.gen("s1")
    TG = pullback_bundle(R, tangent_G24(), 1)
    if reading == "projective":
        TX = chern_sum(line_bundle(R, 2 * h2), TG)
        H = h2 + s1
        hat = chern_sum(line_bundle(R, -H), chern_twist(TX, -H))
        return chern_dual(hat)
    if reading == "sequence":
        sub = chern_sum(line_bundle(R, -h2), chern_dual(TG))
        quot = chern_sum(line_bundle(R, h2), line_bundle(R, s1))
        return chern_from_sequence(sub, quot)
    raise ValueError(f"unknown reading {reading!r}")


def paper_class_t3_plus():
    """The target class ``12 h1^2 h2``."""
    R = ring_P1xG24()
    return 12 * R.gen("h1") ** 2 * R.gen("h2")


def p1_times_p2_pairing(x):
    """Degree of ``x`` restricted to ``P^1 x P^2`` with ``[P^2] = s11``."""
    R = x.ring
    return integrate(x * R.gen("s11"))


# ---------------------------------------------------------------------------
# expression language for the CLI

_BIN = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul}


def _bundle_env(R):
    env = {}
    if R.name.startswith("P") and "x" not in R.name:
        env["T"] = tangent_Pn(R)
    if R.name == "G24":
        env["U"], env["Q"] = tautological_G24(R)
        env["T"] = tangent_G24(R)
    if R.name == "P1xG24":
        U, Q = tautological_G24()
        env["U"] = pullback_bundle(R, U, 1)
        env["Q"] = pullback_bundle(R, Q, 1)
        env["TG"] = pullback_bundle(R, tangent_G24(), 1)
        env["T3minus"] = t3_minus()
        env["T3plus_dual"] = segre_tangent_class()
        env["T3plus_dual_seq"] = segre_tangent_class("sequence")
    if R.name == "P3":
        env["T1plus"] = t1_plus()
    return env


def evaluate(expr, ring="P3"):
    """Evaluate an expression over named classes and bundles.

    Classes: ring generators (``h``; ``s1 s2 s11 s21 s22``; ``h1 h2`` on
    P1xG24), integers, ``+ - *`` and ``**`` by an integer.  Bundles: ``T``,
    ``U``, ``Q``, ``TG``, ``T3minus``, ``T3plus_dual``, ``T3plus_dual_seq``, ``T1plus``,
    ``O(l)``, ``trivial(n)``, combined with ``E + F``, ``k * E``,
    ``dual(E)``, ``twist(E, l)``, ``lambda2(E)``.  Bundle-to-class functions:
    ``c(E)``, ``c1(E)`` .. ``c4(E)``, ``d2(E)``, ``d2dual(E)``; ``integrate(x)``
    returns an integer.
    """
    R = get_ring(ring) if isinstance(ring, str) else ring
    env = dict(R.generators)
    env.update(_bundle_env(R))
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"syntax error in {expr!r}: {exc.msg}") from None

    funcs = {
        "O": lambda l: line_bundle(R, l),
        "trivial": lambda n: trivial(R, int(n)),
        "dual": chern_dual,
        "twist": chern_twist,
        "lambda2": chern_lambda2_rank3,
        "c": lambda E: E.total,
        "d2": lagrangian_d2,
        "d2dual": lambda E: lagrangian_d2(chern_dual(E)),
        "integrate": integrate,
    }
    for k in range(1, 5):
        funcs[f"c{k}"] = lambda E, k=k: E.c(k)

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise ParseError(f"unknown name {node.id!r} in ring {R.name}")
            return env[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            if isinstance(node.op, ast.UAdd):
                return v
            if isinstance(v, ChernClass):
                raise ParseError("cannot negate a bundle")
            return -v
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Pow):
                if not isinstance(b, int) or isinstance(a, ChernClass):
                    raise ParseError("exponent must be an integer and base a class")
                return a ** b if isinstance(a, ChowClass) else a ** b
            if type(node.op) not in _BIN:
                raise ParseError(f"unsupported operator {type(node.op).__name__}")
            if isinstance(a, ChernClass) or isinstance(b, ChernClass):
                if isinstance(node.op, ast.Add) and isinstance(a, ChernClass) and isinstance(b, ChernClass):
                    return chern_sum(a, b)
                if isinstance(node.op, ast.Mult) and isinstance(a, int) and isinstance(b, ChernClass):
                    return a * b
                raise ParseError("bundles only support E + F and k * E")
            return _BIN[type(node.op)](a, b)
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
            if node.func.id not in funcs:
                raise ParseError(f"unknown function {node.func.id!r}")
            return funcs[node.func.id](*[ev(a) for a in node.args])
        raise ParseError(f"unsupported syntax: {ast.dump(node)[:60]}")

    return ev(tree)
