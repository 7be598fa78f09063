"""Even integral lattices given by Gram matrices, and their invariants.

Everything here is exact: Gram matrices hold Python ints, discriminant
forms hold ``Fraction`` values, and the signature is read off the integer
characteristic polynomial.

>>> T = parse_lattice("U(2) + E8(-2)")
>>> two_elementary_invariants(T).triple
(10, 10, 0)
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import prod

import numpy as np

from . import _intmat as im
from . import _kernels
from .errors import LatticeError, NotTwoElementary, OutOfRegime, ParseError, ZeroVector

E8_GRAM = (
    (2, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0, 0, 0),
    (0, -1, 2, -1, 0, 0, 0, -1),
    (0, 0, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, -1, 0, 0, 0, 0, 2),
)

D4_GRAM = (
    (2, -1, 0, 0),
    (-1, 2, -1, -1),
    (0, -1, 2, 0),
    (0, -1, 0, 2),
)

U_GRAM = ((0, 1), (1, 0))

_STANDARD = {"U": U_GRAM, "E8": E8_GRAM, "D4": D4_GRAM, "A1": ((2,),)}


@dataclass(frozen=True)
class Lattice:
    """A nondegenerate even lattice in a fixed basis."""

    gram: tuple
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if n == 0:
            raise LatticeError("empty Gram matrix")
        if any(len(row) != n for row in g):
            raise LatticeError("Gram matrix is not square")
        for i in range(n):
            if g[i][i] % 2:
                raise LatticeError(f"odd diagonal entry {g[i][i]} at position {i}; lattice is not even")
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise LatticeError("Gram matrix is not symmetric")
        if self.det == 0:
            raise LatticeError("degenerate Gram matrix")

    @property
    def rank(self):
        return len(self.gram)

    @cached_property
    def det(self):
        return im.det([list(r) for r in self.gram])

    def as_array(self):
        return np.array(self.gram, dtype=np.int64)

    def dot(self, u, v):
        g = self.gram
        return sum(u[i] * g[i][j] * v[j] for i in range(len(u)) if u[i] for j in range(len(v)) if v[j])

    def square(self, v):
        return self.dot(v, v)

    def pairing_vector(self, v):
        """``G v`` as a list."""
        return [sum(row[j] * v[j] for j in range(len(v))) for row in self.gram]

    def rescale(self, n):
        if n == 0:
            raise LatticeError("scale must be nonzero")
        label = f"{self.label}({n})" if self.label else None
        return Lattice(tuple(tuple(n * x for x in row) for row in self.gram), label)

    def __add__(self, other):
        return direct_sum([self, other])

    def __str__(self):
        return self.label or f"Lattice(rank={self.rank}, det={self.det})"


def make_standard(name, scale=1):
    """Standard lattice ``name`` with its Gram matrix multiplied by ``scale``.

    ``name`` is one of ``U``, ``E8``, ``D4``, ``A1`` or ``diag(m)``.
    """
    if scale == 0:
        raise LatticeError("scale must be nonzero")
    m = re.fullmatch(r"diag\((-?\d+)\)", name.replace(" ", ""))
    if m:
        entry = int(m.group(1)) * scale
        if entry % 2:
            raise LatticeError(f"<{entry}> is odd")
        return Lattice(((entry,),), f"<{entry}>")
    if name not in _STANDARD:
        raise LatticeError(f"unknown standard lattice {name!r}")
    gram = tuple(tuple(scale * x for x in row) for row in _STANDARD[name])
    label = name if scale == 1 else f"{name}({scale})"
    return Lattice(gram, label)


def direct_sum(parts):
    parts = list(parts)
    if not parts:
        raise LatticeError("direct sum of nothing")
    if len(parts) == 1:
        return parts[0]
    n = sum(p.rank for p in parts)
    gram = [[0] * n for _ in range(n)]
    off = 0
    for p in parts:
        for i in range(p.rank):
            for j in range(p.rank):
                gram[off + i][off + j] = p.gram[i][j]
        off += p.rank
    labels = [p.label for p in parts]
    label = " + ".join(labels) if all(labels) else None
    return Lattice(tuple(map(tuple, gram)), label)


def signature(L):
    """(p_plus, p_minus) from Descartes' rule on the characteristic polynomial.

    The rule is exact here because a real symmetric matrix has only real
    eigenvalues and nondegeneracy rules out the root 0.
    """
    coeffs = im.charpoly([list(r) for r in L.gram])
    n = len(coeffs) - 1

    def changes(cs):
        signs = [c > 0 for c in cs if c]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    pos = changes(coeffs)
    neg = changes([c * (-1) ** (n - k) for k, c in enumerate(coeffs)])
    assert pos + neg == n
    return pos, neg


# ---------------------------------------------------------------------------
# discriminant forms


def _mod(x, m):
    x = Fraction(x)
    return x - m * (x // m)


@dataclass(frozen=True)
class FiniteQuadraticForm:
    """Discriminant group ``L^vee / L`` with its forms ``q`` (mod 2) and ``b`` (mod 1).

    ``generator_lifts`` are rational coordinate vectors in the basis of the
    ambient lattice whose Gram matrix is ``gram``; ``reducer`` maps the
    vector ``G x`` of a dual vector ``x`` to generator coordinates.
    """

    orders: tuple
    q_diag: tuple
    b_offdiag: tuple
    generator_lifts: tuple
    gram: tuple = field(repr=False)
    reducer: tuple = field(repr=False)

    @property
    def ngens(self):
        return len(self.orders)

    @property
    def order(self):
        return prod(self.orders)

    def is_two_elementary(self):
        return all(d == 2 for d in self.orders)

    def lift(self, coords):
        n = len(self.gram)
        v = [Fraction(0)] * n
        for c, x in zip(coords, self.generator_lifts):
            if c:
                for i in range(n):
                    v[i] += c * x[i]
        return v

    def _pair(self, u, v):
        g = self.gram
        return sum(u[i] * g[i][j] * v[j] for i in range(len(u)) if u[i] for j in range(len(v)) if v[j])

    def q(self, coords):
        x = self.lift(coords)
        return _mod(self._pair(x, x), 2)

    def b(self, c1, c2):
        return _mod(self._pair(self.lift(c1), self.lift(c2)), 1)

    def reduce(self, x):
        """Generator coordinates of the class of a dual vector ``x``."""
        gx = [sum(row[j] * x[j] for j in range(len(x))) for row in self.gram]
        if any(Fraction(t).denominator != 1 for t in gx):
            raise LatticeError("vector is not in the dual lattice")
        out = []
        for row, d in zip(self.reducer, self.orders):
            out.append(int(sum(Fraction(r) * t for r, t in zip(row, gx))) % d)
        return tuple(out)

    def elements(self):
        return itertools.product(*(range(d) for d in self.orders))

    def direct_sum(self, other):
        n1, n2 = len(self.gram), len(other.gram)
        gram = [list(r) + [0] * n2 for r in self.gram] + [[0] * n1 + list(r) for r in other.gram]
        lifts = tuple(tuple(x) + (Fraction(0),) * n2 for x in self.generator_lifts) + tuple(
            (Fraction(0),) * n1 + tuple(x) for x in other.generator_lifts
        )
        reducer = tuple(tuple(r) + (0,) * n2 for r in self.reducer) + tuple(
            (0,) * n1 + tuple(r) for r in other.reducer
        )
        k1, k2 = self.ngens, other.ngens
        b = [[Fraction(0)] * (k1 + k2) for _ in range(k1 + k2)]
        for i in range(k1):
            for j in range(k1):
                b[i][j] = self.b_offdiag[i][j]
        for i in range(k2):
            for j in range(k2):
                b[k1 + i][k1 + j] = other.b_offdiag[i][j]
        return FiniteQuadraticForm(
            self.orders + other.orders,
            self.q_diag + other.q_diag,
            tuple(map(tuple, b)),
            lifts,
            tuple(map(tuple, gram)),
            reducer,
        )


def discriminant_group(L):
    """``A_L`` from the Smith decomposition ``D = S G T`` of the Gram matrix.

    The generator of the ``i``-th cyclic factor lifts to ``T e_i / d_i``.
    """
    g = [list(r) for r in L.gram]
    diag, s, t = im.snf(g)
    orders, lifts, reducer = [], [], []
    for i, d in enumerate(diag):
        if abs(d) > 1:
            orders.append(abs(d))
            lifts.append(tuple(Fraction(t[k][i], d) for k in range(L.rank)))
            reducer.append(tuple(s[i]))
    A = FiniteQuadraticForm(tuple(orders), (), (), tuple(lifts), L.gram, tuple(reducer))
    k = len(orders)
    unit = [tuple(int(i == j) for j in range(k)) for i in range(k)]
    q_diag = tuple(A.q(u) for u in unit)
    b = tuple(tuple(A.b(u, w) for w in unit) for u in unit)
    return FiniteQuadraticForm(tuple(orders), q_diag, b, tuple(lifts), L.gram, tuple(reducer))


@dataclass(frozen=True)
class TwoElemInvariants:
    r: int
    signature: tuple
    a: int
    delta: int

    @property
    def triple(self):
        return (self.r, self.a, self.delta)

    def as_tuple(self):
        return (self.r, self.signature, self.a, self.delta)

    def __str__(self):
        p, m = self.signature
        return f"r={self.r} sig=({p},{m}) a={self.a} delta={self.delta}"


def two_elementary_invariants(L, A=None):
    """(r, signature, a, delta) of a 2-elementary lattice.

    delta is tested on generators only: on a 2-elementary group ``2 b``
    is integral, so ``q(x + y) = q(x) + q(y) mod Z``.
    """
    if A is None:
        A = discriminant_group(L)
    if not A.is_two_elementary():
        raise NotTwoElementary(f"discriminant group has orders {A.orders}")
    delta = 0 if all(qv.denominator == 1 for qv in A.q_diag) else 1
    return TwoElemInvariants(L.rank, signature(L), A.ngens, delta)


def is_indefinite(L):
    p, m = signature(L)
    return p > 0 and m > 0


def is_isometric_2elem(L1, L2):
    """Isometry test valid for indefinite 2-elementary even lattices."""
    invs = []
    for L in (L1, L2):
        if not is_indefinite(L):
            raise OutOfRegime(f"{L} is definite")
        try:
            invs.append(two_elementary_invariants(L))
        except NotTwoElementary as exc:
            raise OutOfRegime(str(exc)) from exc
    return invs[0] == invs[1]


def divisibility(L, v):
    if not any(v):
        raise ZeroVector("divisibility of the zero vector")
    return im.content(L.pairing_vector(v))


def square_multiple_certificate(L, m):
    """True guarantees ``m | v.v`` for every ``v`` in ``L``."""
    if m < 1:
        raise LatticeError("m must be positive")
    g = L.gram
    n = L.rank
    return all(g[i][i] % m == 0 for i in range(n)) and all(
        (2 * g[i][j]) % m == 0 for i in range(n) for j in range(i + 1, n)
    )


def _normalize_sign(v):
    for x in v:
        if x:
            return tuple(int(y) for y in v) if x > 0 else tuple(-int(y) for y in v)
    return tuple(int(y) for y in v)


def find_vector_of_square(L, n, div=None, bound=1):
    """First vector of square ``n`` (and divisibility ``div``) in the box of radius ``bound``.

    ``None`` only means nothing was found inside the box.  The witness is
    returned with its first nonzero coordinate positive.
    """
    if bound < 1:
        raise LatticeError("bound must be positive")
    hits = _kernels.search_vectors(L.as_array(), n, bound, div or 0, 1)
    if len(hits) == 0:
        return None
    return _normalize_sign(hits[0])


def vectors_of_square(L, n, bound, limit=100000, div=None):
    hits = _kernels.search_vectors(L.as_array(), n, bound, div or 0, limit)
    return [tuple(int(x) for x in h) for h in hits]


@dataclass(frozen=True)
class DeltaProfile:
    has_minus2: bool
    minus2_witness: tuple | None
    has_minus10_div2: bool
    minus10_witness: tuple | None
    certified_empty: bool
    bound: int


def delta_set_profile(T, bound):
    """Status of the set of (-2)-vectors and (-10)-vectors of divisibility 2 in ``T``.

    Divisibility is measured inside ``T``.  ``certified_empty`` comes from
    the mod-4 certificate (neither -2 nor -10 is divisible by 4).
    """
    w2 = find_vector_of_square(T, -2, None, bound)
    w10 = find_vector_of_square(T, -10, 2, bound)
    cert = square_multiple_certificate(T, 4)
    if cert:
        assert w2 is None and w10 is None
    return DeltaProfile(w2 is not None, w2, w10 is not None, w10, cert, bound)


# ---------------------------------------------------------------------------
# text I/O

_TOKEN = re.compile(r"\s*(?:(?P<name>U|E8|D4|A1)(?:\((?P<scale>[+-]?\d+)\))?|<(?P<diag>[+-]?\d+)>)(?:\^(?P<pow>\d+))?\s*")


def parse_lattice(expr):
    """Lattice from an expression such as ``"U(2) + E8(-2)"`` or ``"<-2>^4 + <2> + U"``.

    Grammar: ``term ('+' term)*`` with ``term = (U|E8|D4|A1)['(' n ')'] | '<' m '>'``,
    each optionally followed by ``^k`` for a k-fold sum.
    """
    parts = []
    for chunk in expr.split("+") if expr.strip() else []:
        # "+" also appears as a sign inside parentheses
        parts.append(chunk)
    # rejoin sign-only splits such as "U(+2)"
    terms, buf = [], ""
    for chunk in parts:
        if not chunk.strip() and not buf:
            raise ParseError(f"empty term in lattice expression {expr!r}")
        buf = f"{buf}+{chunk}" if buf else chunk
        if buf.count("(") == buf.count(")") and buf.count("<") == buf.count(">") and buf.strip():
            terms.append(buf)
            buf = ""
    if buf or not terms:
        raise ParseError(f"cannot parse lattice expression {expr!r}")
    lattices = []
    for term in terms:
        m = _TOKEN.fullmatch(term)
        if not m:
            raise ParseError(f"bad lattice term {term.strip()!r}")
        if m.group("diag") is not None:
            L = make_standard(f"diag({m.group('diag')})")
        else:
            scale = int(m.group("scale")) if m.group("scale") else 1
            L = make_standard(m.group("name"), scale)
        lattices += [L] * int(m.group("pow") or 1)
    return direct_sum(lattices)


def read_gram(text, label=None):
    """Parse the Gram file format: rank on the first line, then the rows."""
    rows = []
    rank = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(f"non-integer entry in {line!r}", lineno) from None
        if rank is None:
            if len(nums) != 1 or nums[0] < 1:
                raise ParseError("first line must hold the rank", lineno)
            rank = nums[0]
            continue
        if len(nums) != rank:
            raise ParseError(f"expected {rank} entries, got {len(nums)}", lineno)
        if len(rows) == rank:
            raise ParseError("too many rows", lineno)
        rows.append(nums)
    if rank is None:
        raise ParseError("empty Gram file")
    if len(rows) != rank:
        raise ParseError(f"expected {rank} rows, got {len(rows)}")
    try:
        return Lattice(tuple(map(tuple, rows)), label)
    except LatticeError as exc:
        raise ParseError(str(exc)) from exc


def format_gram(L):
    lines = [str(L.rank)]
    width = max(len(str(x)) for row in L.gram for x in row)
    lines += [" ".join(str(x).rjust(width) for x in row) for row in L.gram]
    return "\n".join(lines) + "\n"

