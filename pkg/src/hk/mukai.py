"""Mukai vectors, order-two Brauer classes and Picard lattices of moduli spaces.

Pairing convention: ``(r, c, s).(r', c', s') = c.c' - r s' - r' s``.

The transcendental lattice is only ever seen through its Gram matrix; the
algebraic part of a twisted Mukai lattice is assembled from ``Pic(S)``,
``(n, s, 0)`` and ``(0, 0, 1)``, and the ``s``-component only enters through
``s^2`` because it pairs trivially with ``Pic(S)``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction

from . import _intmat as im
from .errors import (
    DimensionMismatch,
    InvalidOrder,
    NegativeSquare,
    ParseError,
    ShapeMismatch,
    TrivialClass,
    VectorNotInLattice,
)
from .glue import complement_basis
from .lattice import Lattice, U_GRAM, direct_sum, find_vector_of_square, make_standard, parse_lattice

# Gram of <(1,0,0), (0,0,1)> under the Mukai pairing
MUKAI_U = ((0, -1), (-1, 0))


@dataclass(frozen=True)
class MukaiVector:
    r: int
    c: tuple
    s: int

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(int(x) for x in self.c))

    def __str__(self):
        return f"({self.r}; {','.join(map(str, self.c))}; {self.s})"


def parse_mukai(text):
    """``"(r; c1,...,ck; s)"`` -> MukaiVector."""
    m = re.fullmatch(r"\s*\(\s*([+-]?\d+)\s*;([^;]*);\s*([+-]?\d+)\s*\)\s*", text)
    if not m:
        raise ParseError(f"bad Mukai vector {text!r}; expected '(r; c1,...,ck; s)'")
    body = m.group(2).strip()
    try:
        c = tuple(int(x) for x in body.split(",")) if body else ()
    except ValueError:
        raise ParseError(f"bad middle component {body!r}") from None
    return MukaiVector(int(m.group(1)), c, int(m.group(3)))


def mukai_pairing(v, w, middle):
    if len(v.c) != middle.rank or len(w.c) != middle.rank:
        raise DimensionMismatch(f"middle components must have length {middle.rank}")
    return middle.dot(v.c, w.c) - v.r * w.s - w.r * v.s


def mukai_square(v, middle):
    return mukai_pairing(v, v, middle)


def moduli_dimension_mukai(v, middle):
    sq = mukai_square(v, middle)
    if sq < -2:
        raise NegativeSquare(f"v^2 = {sq} < -2")
    return sq + 2


# ---------------------------------------------------------------------------
# twisted Mukai lattices


def twisted_picard(picS, n, s_sq=0):
    """Algebraic part of the (twisted) Mukai lattice.

    ``n == 1``: ``<(1,0,0), (0,0,1)> + Pic`` in that order.  ``n >= 2``:
    ``Pic + <(n, s, 0), (0, 0, 1)>`` whose last block has Gram
    ``[[s_sq, -n], [-n, 0]]``.
    """
    if not isinstance(n, int) or n < 1:
        raise InvalidOrder(f"order must be a positive integer, got {n!r}")
    if n == 1:
        return direct_sum([Lattice(MUKAI_U, "U"), picS])
    if s_sq % 2:
        raise InvalidOrder("s^2 must be even")
    return direct_sum([picS, Lattice(((s_sq, -n), (-n, 0)))])


def mukai_coordinates(picS, n, v):
    """Coordinates of ``v`` in the basis used by ``twisted_picard``."""
    if len(v.c) != picS.rank:
        raise DimensionMismatch(f"middle component must have length {picS.rank}")
    if n == 1:
        return (v.r, v.s) + v.c
    if v.r % n:
        raise VectorNotInLattice(f"rank {v.r} is not divisible by the order {n}")
    return v.c + (v.r // n, v.s)


def moduli_picard(picS, n, s_sq, v):
    """``v^perp`` inside ``twisted_picard(picS, n, s_sq)``."""
    M = twisted_picard(picS, n, s_sq)
    x = mukai_coordinates(picS, n, v)
    if not any(x):
        raise VectorNotInLattice("v is zero")
    basis = complement_basis(M, [x])
    gram = tuple(tuple(M.dot(a, b) for b in basis) for a in basis)
    return Lattice(gram)


# ---------------------------------------------------------------------------
# Brauer classes of order two


@dataclass(frozen=True)
class BrauerClass2:
    """``alpha(x) = sum a_i x_i mod 2`` on the transcendental lattice ``T``."""

    T: Lattice
    functional: tuple
    unimodular_block: tuple = (0, 1, 2, 3)

    def __post_init__(self):
        f = tuple(int(a) % 2 for a in self.functional)
        if len(f) != self.T.rank:
            raise DimensionMismatch(f"functional must have length {self.T.rank}")
        object.__setattr__(self, "functional", f)

    def __call__(self, x):
        return sum(a * int(xi) for a, xi in zip(self.functional, x)) % 2

    @property
    def trivial(self):
        return not any(self.functional)


@dataclass(frozen=True)
class BLiftData:
    s_part: tuple
    t_part: tuple
    n: int = 2


def brauer_kernel(alpha):
    """The index-two sublattice ``{x : alpha(x) = 0}`` of ``T``."""
    if alpha.trivial:
        raise TrivialClass("alpha is trivial")
    n = alpha.T.rank
    f = alpha.functional
    i0 = f.index(1)
    rows = []
    for i in range(n):
        e = [0] * n
        if f[i] == 0:
            e[i] = 1
        elif i == i0:
            e[i] = 2
        else:
            e[i] = e[i0] = 1
        rows.append(e)
    basis = [[int(x) for x in r] for r in im.row_basis(rows)]
    gram = tuple(tuple(alpha.T.dot(a, b) for b in basis) for a in basis)
    K = Lattice(gram)
    assert K.det == 4 * alpha.T.det
    return K


def _check_u2_block(alpha):
    blk = alpha.unimodular_block
    if len(blk) != 4 or alpha.T.rank < 4:
        raise ShapeMismatch("T must start with a U^2 block")
    sub = tuple(tuple(alpha.T.gram[i][j] for j in blk) for i in blk)
    if sub != direct_sum([Lattice(U_GRAM)] * 2).gram:
        raise ShapeMismatch("the designated block is not U + U")
    for i in blk:
        if any(alpha.T.gram[i][j] for j in range(alpha.T.rank) if j not in blk):
            raise ShapeMismatch("the U^2 block is not an orthogonal summand")


def b_lift_reduce(alpha, lift):
    """Reduce a lift ``2B = s + t`` of ``alpha`` to the class of ``s`` in ``U^2 / 2 U^2``.

    The ``t``-part is absorbed: on the non-unimodular block it agrees mod 2
    with the pairing against a Picard class, so only ``s mod 2`` matters.
    """
    _check_u2_block(alpha)
    blk = alpha.unimodular_block
    if len(lift.s_part) != 4 or len(lift.t_part) != alpha.T.rank - 4:
        raise ShapeMismatch("lift parts do not match the block shape")
    canonical = tuple(int(x) % 2 for x in lift.s_part)
    # alpha restricted to U^2 is pairing with s
    u2 = direct_sum([Lattice(U_GRAM)] * 2)
    expect = tuple(x % 2 for x in u2.pairing_vector(canonical))
    if expect != tuple(alpha.functional[i] for i in blk):
        raise ShapeMismatch("s does not represent alpha on the U^2 block")
    return {"canonical_s": canonical, "in_I": any(canonical)}


def alpha_form_eval(alpha_coeffs, lam_alpha, x, T=None):
    """``(1/2) <sum a_i r_i, x> + <lambda, lambda_alpha> mod 2``.

    ``x`` is in coordinates of ``U^2 + E8(-2) + <-2>`` (``lambda`` = first four
    entries, ``r_1..r_9`` = the remaining basis vectors).
    """
    if T is None:
        T = standard_transcendental()
    if len(alpha_coeffs) != 9 or len(lam_alpha) != 4 or len(x) != T.rank:
        raise ShapeMismatch("expected 9 coefficients, a U^2 vector and a rank-13 vector")
    a = (0, 0, 0, 0) + tuple(int(c) for c in alpha_coeffs)
    half = Fraction(T.dot(a, x), 2)
    lam = tuple(x[:4]) + (0,) * 9
    lam_a = tuple(lam_alpha) + (0,) * 9
    val = half + T.dot(lam, lam_a)
    assert val.denominator == 1
    return int(val) % 2


def standard_transcendental():
    return parse_lattice("U^2 + E8(-2) + <-2>")


def standard_picard():
    """``<2> + E8(-2)`` with ``H`` the first basis vector."""
    return direct_sum([make_standard("diag(2)"), make_standard("E8", -2)])


def hyperplane_vector(picS):
    return MukaiVector(0, (1,) + (0,) * (picS.rank - 1), 0)


@dataclass(frozen=True)
class LambdaCase:
    lam: tuple
    s_sq: int
    t: tuple
    lift_sq: int
    picard: Lattice
    naive_picard: Lattice


def enumerate_lambda_alpha(picS=None, bound=1):
    """Moduli Picard lattices for the 15 nonzero classes ``lambda_alpha`` in ``U^2 / 2``.

    ``s`` is the 0/1 representative; a compensating ``t`` in ``E8(-2) + <-2>``
    with ``t^2 = -s^2`` gives a lift with ``B^2 = 0``.  ``naive_picard`` uses
    ``t = 0`` instead.
    """
    if picS is None:
        picS = standard_picard()
    T = standard_transcendental()
    rest = Lattice(tuple(tuple(T.gram[i][j] for j in range(4, 13)) for i in range(4, 13)))
    u2 = direct_sum([Lattice(U_GRAM)] * 2)
    v = hyperplane_vector(picS)
    out = []
    for lam in itertools.product((0, 1), repeat=4):
        if not any(lam):
            continue
        s_sq = u2.square(lam)
        t = (0,) * rest.rank if s_sq == 0 else find_vector_of_square(rest, -s_sq, None, bound)
        if t is None:
            raise VectorNotInLattice(f"no t with t^2 = {-s_sq} in the search box")
        lift_sq = s_sq + rest.square(t)
        out.append(
            LambdaCase(
                lam,
                s_sq,
                tuple(t),
                lift_sq,
                moduli_picard(picS, 2, lift_sq, v),
                moduli_picard(picS, 2, s_sq, v),
            )
        )
    return out
