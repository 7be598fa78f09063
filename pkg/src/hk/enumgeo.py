"""Small enumerative checks: exceptional classes on blown-up planes, torsion
counts, invariant monomials, family and moduli dimensions, and Riemann-Roch on
the quartic del Pezzo surface."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import _kernels
from .errors import OutOfRange, RankTooLarge

A_RANGE = (0, 7)
B_RANGE = (-2, 4)


@dataclass(frozen=True)
class DPClass:
    """``a H - sum b_i E_i`` on the blowup of the plane in ``k = len(b)`` points."""

    a: int
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", int(self.a))
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))

    @property
    def k(self):
        return len(self.b)

    def dot(self, other):
        if other.k != self.k:
            raise OutOfRange("classes live on different blowups")
        return self.a * other.a - sum(x * y for x, y in zip(self.b, other.b))

    @property
    def square(self):
        return self.dot(self)

    def dot_K(self):
        """Intersection with ``K = -3H + sum E_i``."""
        return -3 * self.a + sum(self.b)

    def __add__(self, other):
        return DPClass(self.a + other.a, tuple(x + y for x, y in zip(self.b, other.b)))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return DPClass(-self.a, tuple(-x for x in self.b))

    def __str__(self):
        terms = [f"{self.a}H"] + [f"{-x:+d}E{i + 1}" for i, x in enumerate(self.b) if x]
        return " ".join(terms)


def H(k):
    return DPClass(1, (0,) * k)


def E(i, k):
    return DPClass(0, tuple(-1 if j == i else 0 for j in range(k)))


def anticanonical(k):
    return DPClass(3, (1,) * k)


def del_pezzo_minus1_classes(k, a_range=A_RANGE, b_range=B_RANGE, use_numba=None):
    """Classes with ``C^2 = -1`` and ``C.(-K) = 1`` inside the search box."""
    if not 0 <= k <= 8:
        raise OutOfRange(f"k = {k} outside 0..8")
    rows = _kernels.minus_one_classes(k, a_range, b_range, use_numba)
    out = [DPClass(r[0], tuple(r[1:])) for r in rows.tolist()]
    for c in out:
        assert c.square == -1 and c.dot_K() == -1
    return out


def bounds_sufficient(k, widen=2):
    """The count does not change when every coordinate range is widened by ``widen``."""
    base = len(del_pezzo_minus1_classes(k))
    wide = del_pezzo_minus1_classes(
        k, (A_RANGE[0] - widen, A_RANGE[1] + widen), (B_RANGE[0] - widen, B_RANGE[1] + widen)
    )
    return base == len(wide)


def symmetric_conic_count(curve_count=None):
    """Conics pair up the exceptional curves of the degree-one del Pezzo."""
    if curve_count is None:
        curve_count = len(del_pezzo_minus1_classes(8))
    if curve_count % 2:
        raise OutOfRange(f"odd curve count {curve_count} cannot be paired")
    return curve_count // 2


def two_torsion_count(g_quotient, ambient_rank, ker_dim):
    """``(total, (2^(2g) - 1, total - 2^(2g) - 1))`` with ``total = 2^(2g + ker_dim)``."""
    if min(g_quotient, ambient_rank, ker_dim) < 0:
        raise OutOfRange("inputs must be nonnegative")
    if ker_dim > ambient_rank:
        raise OutOfRange("kernel larger than the ambient group")
    total = 2 ** (2 * g_quotient + ker_dim)
    base = 2 ** (2 * g_quotient)
    return total, (base - 1, total - base - 1)


# parity condition of each case and the eigenspace multiplicities of the
# involution on the two factors
_CASES = {
    1: (lambda i, j: i[0] % 2 == 0, (3,), (1, 2)),
    2: (lambda i, j: j[0] % 2 == 0, (1, 2), (3,)),
    3: (lambda i, j: (i[0] + j[0]) % 2 == 0, (1, 2), (1, 2)),
}


def _exponents(total, n=3):
    return [e for e in itertools.product(range(total + 1), repeat=n) if sum(e) == total]


def invariant_monomial_count(case=None):
    """Bidegree (2,2) monomials on P^2 x P^2 surviving the parity of ``case``; ``None`` counts all."""
    if case is not None and case not in _CASES:
        raise OutOfRange(f"case must be 1, 2 or 3, got {case}")
    keep = _CASES[case][0] if case else (lambda i, j: True)
    return sum(1 for i in _exponents(2) for j in _exponents(2) if keep(i, j))


def centralizer_dim(multiplicities, size=None):
    if any(m < 0 for m in multiplicities):
        raise OutOfRange("negative multiplicity")
    if size is not None and sum(multiplicities) != size:
        raise OutOfRange("multiplicities do not sum to the matrix size")
    return sum(m * m for m in multiplicities)


def family_dimension(case):
    if case not in _CASES:
        raise OutOfRange(f"case must be 1, 2 or 3, got {case}")
    _, m1, m2 = _CASES[case]
    return invariant_monomial_count(case) - centralizer_dim(m1, 3) - centralizer_dim(m2, 3) + 1


def family_dimension_projective(case):
    """Same count with projective groups: (monomials - 1) - (c1 - 1) - (c2 - 1)."""
    _, m1, m2 = _CASES[case]
    return (invariant_monomial_count(case) - 1) - (centralizer_dim(m1) - 1) - (centralizer_dim(m2) - 1)


def moduli_dimension_pairs(T):
    if T.rank > 21:
        raise RankTooLarge(f"rank {T.rank} > 21")
    return 21 - T.rank


# ---------------------------------------------------------------------------
# quartic del Pezzo (five points)


def dp4_chi(D):
    if D.k != 5:
        raise OutOfRange("expected a class on the five-point blowup")
    num = D.square - D.dot_K()
    assert num % 2 == 0
    return 1 + num // 2


def dp4_ideal_chi(D, c):
    """``chi(I_c(D)) = chi(D) - chi(O_c(D))`` for a smooth rational curve ``c``."""
    return dp4_chi(D) - (D.dot(c) + 1)


def dp4_paper_divisors():
    """``k - h, h, 0, -h, h - k`` with ``k = -K`` and ``h = H - E1``; conic ``c = H - E2``."""
    k = anticanonical(5)
    h = H(5) - E(0, 5)
    zero = DPClass(0, (0,) * 5)
    c = H(5) - E(1, 5)
    return {"k-h": k - h, "h": h, "0": zero, "-h": -h, "h-k": h - k}, c
