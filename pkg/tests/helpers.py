"""Random lattice generators and brute-force oracles shared by the tests."""

import itertools

import sympy

from hk import _intmat as im
from hk.lattice import Lattice, direct_sum, discriminant_group, parse_lattice

TWO_ELEMENTARY_PIECES = ("U", "U(2)", "<2>", "<-2>", "D4(-1)", "E8(-2)", "E8(-1)")


def random_unimodular(rng, n, steps=None):
    """Product of random elementary integer matrices (det +-1)."""
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if steps is not None else 3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            P[i] = [-x for x in P[i]]
            continue
        c = rng.choice((-2, -1, 1, 2))
        P[i] = [a + c * b for a, b in zip(P[i], P[j])]
    return P


def change_basis(L, P):
    G = L.gram
    n = len(G)
    return Lattice(
        tuple(
            tuple(sum(P[i][a] * G[a][b] * P[j][b] for a in range(n) for b in range(n)) for j in range(n))
            for i in range(n)
        )
    )


def random_even_lattice(rng, n, entry=3):
    while True:
        G = [[0] * n for _ in range(n)]
        for i in range(n):
            G[i][i] = 2 * rng.randint(-entry, entry)
            for j in range(i + 1, n):
                G[i][j] = G[j][i] = rng.randint(-entry, entry)
        if im.det(G) != 0:
            return Lattice(tuple(map(tuple, G)))


def random_two_elementary(rng, max_pieces=3, scramble=True, max_a=12):
    # max_a keeps brute-force passes over A_L affordable
    while True:
        pieces = [parse_lattice(rng.choice(TWO_ELEMENTARY_PIECES)) for _ in range(rng.randint(1, max_pieces))]
        L = direct_sum(pieces)
        if abs(L.det) <= 2 ** max_a:
            break
    if scramble and L.rank <= 12:
        L = change_basis(L, random_unimodular(rng, L.rank))
    return L


def brute_force_delta(L):
    """delta from q over every element of A_L, not just generators."""
    A = discriminant_group(L)
    return 0 if all(A.q(x).denominator == 1 for x in A.elements()) else 1


def brute_force_minus_one(k, a_max=6, m_range=range(-2, 4)):
    """Count aH - sum m_i E_i with C^2 = -1 and -K.C = 1 by plain loops."""
    count = 0
    for a in range(a_max + 1):
        for m in itertools.product(m_range, repeat=k):
            if a * a - sum(x * x for x in m) == -1 and 3 * a - sum(m) == 1:
                count += 1
    return count


def cofactor_low_degree(M, k, n_vars):
    """Full sympy determinant of a matrix of TruncatedPoly, then keep degree <= k."""
    S = sympy.Matrix([[c.to_sympy() for c in row] for row in M])
    d = sympy.expand(S.det(method="berkowitz"))
    if d == 0:
        return d
    gens = sympy.symbols(("x", "y", "z", "t", "u")[:n_vars])
    P = sympy.Poly(d, *gens)
    return sympy.expand(sum(c * sympy.prod([g ** e for g, e in zip(gens, m)]) for m, c in P.terms() if sum(m) <= k))
