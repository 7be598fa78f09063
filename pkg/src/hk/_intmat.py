"""Exact integer/rational matrix helpers (thin layer over sympy's DomainMatrix).

Matrices are plain lists of lists of ``int`` or ``Fraction``.
"""

from fractions import Fraction
from math import gcd, lcm

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form, smith_normal_decomp


def _dm_zz(rows):
    return DomainMatrix([[ZZ(int(x)) for x in r] for r in rows], (len(rows), len(rows[0])), ZZ)


def _dm_qq(rows):
    return DomainMatrix(
        [[QQ(Fraction(x).numerator, Fraction(x).denominator) for x in r] for r in rows],
        (len(rows), len(rows[0])),
        QQ,
    )


def _to_ints(dm):
    return [[int(x) for x in row] for row in dm.to_list()]


def _to_fracs(dm):
    return [[Fraction(int(x.numerator), int(x.denominator)) for x in row] for row in dm.to_list()]


def transpose(m):
    return [list(col) for col in zip(*m)]


def matmul(a, b):
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def det(m):
    if not m:
        return 1
    return int(_dm_zz(m).det())


def charpoly(m):
    """Integer coefficients of det(xI - m), leading first."""
    return [int(c) for c in _dm_zz(m).charpoly()]


def inverse_q(m):
    return _to_fracs(_dm_qq(m).inv())


def rank_q(m):
    if not m or not m[0]:
        return 0
    return _dm_qq(m).rank()


def nullspace_q(m, ncols=None):
    """Basis (rows) of the rational right kernel of ``m``."""
    if not m:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    ns = _dm_qq(m).nullspace()
    return _to_fracs(ns) if ns.shape[0] else []


def snf(m):
    """Smith decomposition ``D = S m T``; returns (diagonal, S, T)."""
    d, s, t = smith_normal_decomp(_dm_zz(m))
    dl = d.to_list()
    diag = [int(dl[i][i]) for i in range(min(len(dl), len(dl[0])))]
    return diag, _to_ints(s), _to_ints(t)


def elementary_divisors(m):
    diag, _, _ = snf(m)
    return [abs(x) for x in diag]


def row_basis(rows):
    """A Z-basis (as rows) of the Z-span of rational row vectors."""
    rows = [[Fraction(x) for x in r] for r in rows]
    n = len(rows[0])
    den = 1
    for r in rows:
        for x in r:
            den = lcm(den, x.denominator)
    ints = [[int(x * den) for x in r] for r in rows]
    if not any(any(r) for r in ints):
        return []
    h = hermite_normal_form(_dm_zz(ints).transpose())
    cols = transpose(_to_ints(h)) if h.shape[1] else []
    basis = [[Fraction(x, den) for x in c] for c in cols if any(c)]
    assert all(len(b) == n for b in basis)
    return basis


def saturation_basis(rows):
    """Basis of (Q-span of ``rows``) intersected with Z^n; rows must be independent."""
    k = len(rows)
    diag, s, t = snf(rows)
    if sum(1 for x in diag if x) < k:
        raise ValueError("dependent generators")
    tinv = inverse_q(t)
    return [[int(x) for x in tinv[i]] for i in range(k)]


def integer_kernel(m, n=None):
    """Basis rows of {x in Z^n : m x = 0}; the result is automatically saturated."""
    if not m:
        return identity(n)
    diag, s, t = snf(m)
    r = sum(1 for x in diag if x)
    cols = transpose(t)
    return [list(c) for c in cols[r:]]


def is_primitive_rows(rows):
    """True iff the rows span a saturated sublattice of Z^n."""
    diag = snf(rows)[0]
    return len(diag) == len(rows) and all(x in (1, -1) for x in diag)


def content(vec):
    g = 0
    for x in vec:
        g = gcd(g, int(x))
    return g
