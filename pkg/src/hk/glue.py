"""Sublattices, overlattices and isometries glued along discriminant groups.

An overlattice ``L`` of ``T1 + T2`` is encoded by the isotropic subgroup
``H = L / (T1 + T2)`` of ``A_T1 + A_T2``.  Both summands stay primitive in
``L`` exactly when ``H`` meets each discriminant factor trivially, i.e. when
``H`` is the graph of an injective map from a subgroup of ``A_T1`` into
``A_T2``.  Enumeration is restricted to 2-elementary discriminant groups,
where everything reduces to linear algebra over F2 (vectors are bitmasks).
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from . import _intmat as im
from .errors import (
    DegenerateComplement,
    DependentGenerators,
    GlueNotPreserved,
    LatticeError,
    NonIntegralGlue,
    NotInvolution,
    NotIsometry,
    NotTwoElementary,
)
from .lattice import (
    FiniteQuadraticForm,
    Lattice,
    TwoElemInvariants,
    direct_sum,
    discriminant_group,
    is_isometric_2elem,
    signature,
    two_elementary_invariants,
    vectors_of_square,
)

# ---------------------------------------------------------------------------
# sublattices


@dataclass(frozen=True)
class Embedding:
    """A sublattice given by basis rows in the coordinates of ``target``.

    ``gram`` is kept separately because a saturated span may be degenerate.
    """

    target: Lattice
    basis: tuple
    gram: tuple

    @property
    def matrix(self):
        """target.rank x source.rank integer matrix; columns are the images."""
        return tuple(map(tuple, im.transpose([list(r) for r in self.basis])))

    @property
    def source(self):
        return Lattice(self.gram)

    @property
    def rank(self):
        return len(self.basis)

    def is_primitive(self):
        return im.is_primitive_rows([list(r) for r in self.basis])


def _gram_of(L, rows):
    return tuple(tuple(L.dot(u, v) for v in rows) for u in rows)


def _check_independent(gens):
    if not gens or im.rank_q([list(g) for g in gens]) < len(gens):
        raise DependentGenerators("generators are linearly dependent")


def saturate(ambient, sub_gens):
    """Primitive closure of the span of ``sub_gens`` (rational span meets the lattice)."""
    gens = [list(map(int, g)) for g in sub_gens]
    _check_independent(gens)
    sat = im.saturation_basis(gens)
    basis = [tuple(int(x) for x in r) for r in im.row_basis(sat)]
    return Embedding(ambient, tuple(basis), _gram_of(ambient, basis))


def complement_basis(ambient, sub_gens):
    gens = [list(map(int, g)) for g in sub_gens]
    _check_independent(gens)
    pair = [ambient.pairing_vector(g) for g in gens]
    kern = im.integer_kernel(pair, ambient.rank)
    if not kern:
        return []
    return [tuple(int(x) for x in r) for r in im.row_basis(kern)]


def orthogonal_complement(ambient, sub_gens):
    """The orthogonal of ``sub_gens`` in ``ambient`` (saturated by construction)."""
    basis = complement_basis(ambient, sub_gens)
    if not basis:
        raise DegenerateComplement("orthogonal complement is zero")
    gram = _gram_of(ambient, basis)
    if im.det([list(r) for r in gram]) == 0:
        raise DegenerateComplement("orthogonal complement is degenerate")
    return Lattice(gram)


# ---------------------------------------------------------------------------
# F2 view of a 2-elementary discriminant form


class F2Form:
    """A 2-elementary finite quadratic form in bitmask coordinates.

    ``Q[i]`` stores ``2 q(g_i) mod 4`` and ``B[i]`` the bitmask of ``j`` with
    ``b(g_i, g_j) = 1/2``; then ``2 q(x) mod 4`` and ``2 b(x, y) mod 2`` are
    integer computations.
    """

    def __init__(self, A):
        if not A.is_two_elementary():
            raise NotTwoElementary(f"discriminant group has orders {A.orders}")
        self.A = A
        self.n = A.ngens
        self.Q = [int(2 * qv) % 4 for qv in A.q_diag]
        self.B = [sum(1 << j for j in range(self.n) if A.b_offdiag[i][j] == Fraction(1, 2)) for i in range(self.n)]

    def q2(self, x):
        s = 0
        bits = [i for i in range(self.n) if x >> i & 1]
        for i in bits:
            s += self.Q[i]
        for a, i in enumerate(bits):
            for j in bits[a + 1:]:
                if self.B[i] >> j & 1:
                    s += 2
        return s % 4

    def b2(self, x, y):
        s = 0
        for i in range(self.n):
            if x >> i & 1:
                s ^= bin(self.B[i] & y).count("1") & 1
        return s

    def to_coords(self, x):
        return tuple(x >> i & 1 for i in range(self.n))

    @staticmethod
    def from_coords(c):
        return sum(1 << i for i, ci in enumerate(c) if ci % 2)


def _span(vectors):
    out = {0}
    for v in vectors:
        out |= {x ^ v for x in out}
    return out


def _rref_subspaces(n, dim):
    """All dim-dimensional subspaces of F2^n, each as a tuple of basis bitmasks."""
    for pivots in itertools.combinations(range(n), dim):
        pivset = set(pivots)
        free = [[j for j in range(p + 1, n) if j not in pivset] for p in pivots]
        for choice in itertools.product(*(range(1 << len(f)) for f in free)):
            rows = []
            for p, f, c in zip(pivots, free, choice):
                v = 1 << p
                for k, j in enumerate(f):
                    if c >> k & 1:
                        v |= 1 << j
                rows.append(v)
            yield tuple(rows)


def _nullspace_f2(rows, n):
    """Basis of {x : popcount(r & x) even for every r}."""
    pivots = {}
    for r in rows:
        for p, pr in pivots.items():
            if r >> p & 1:
                r ^= pr
        if r:
            p = r.bit_length() - 1
            for q in list(pivots):
                if pivots[q] >> p & 1:
                    pivots[q] ^= r
            pivots[p] = r
    out = []
    for j in range(n):
        if j in pivots:
            continue
        v = 1 << j
        for p, pr in pivots.items():
            if pr >> j & 1:
                v |= 1 << p
        out.append(v)
    return out


@dataclass(frozen=True)
class GlueSubgroup:
    ambient: FiniteQuadraticForm
    basis_vectors: tuple

    @property
    def dim(self):
        return len(self.basis_vectors)

    def elements(self):
        """All elements, as coordinate tuples (closure of the basis under addition)."""
        orders = self.ambient.orders
        seen = {tuple(0 for _ in orders)}
        frontier = list(seen)
        while frontier:
            new = []
            for x in frontier:
                for g in self.basis_vectors:
                    y = tuple((a + b) % d for a, b, d in zip(x, g, orders))
                    if y not in seen:
                        seen.add(y)
                        new.append(y)
            frontier = new
        return sorted(seen)

    @property
    def order(self):
        return len(self.elements())

    def is_isotropic(self):
        A = self.ambient
        if not all(A.q(g) == 0 for g in self.basis_vectors):
            return False
        return all(A.b(g, h) == 0 for g, h in itertools.combinations(self.basis_vectors, 2))


def enumerate_isotropic_subgroups(A, max_dim, split_constraint=None):
    """Isotropic subgroups of a 2-elementary ``A`` of F2-dimension at most ``max_dim``.

    With ``split_constraint=(A1, A2)`` the form ``A`` must be ``A1.direct_sum(A2)``
    and only subgroups meeting both factors trivially are returned.
    The trivial subgroup is always first.
    """
    F = F2Form(A)
    out = [GlueSubgroup(A, ())]
    if split_constraint is None:
        for dim in range(1, min(max_dim, F.n) + 1):
            for rows in _rref_subspaces(F.n, dim):
                if all(F.q2(r) == 0 for r in rows) and all(F.b2(r, s) == 0 for r, s in itertools.combinations(rows, 2)):
                    out.append(GlueSubgroup(A, tuple(F.to_coords(r) for r in rows)))
        return out

    A1, A2 = split_constraint
    n1, n2 = A1.ngens, A2.ngens
    if A.ngens != n1 + n2 or A.orders != A1.orders + A2.orders:
        raise LatticeError("split constraint does not match the ambient form")
    F1, F2 = F2Form(A1), F2Form(A2)
    targets = list(range(1, 1 << n2))
    by_q = {v: [y for y in targets if F2.q2(y) == v] for v in range(4)}
    for dim in range(1, min(max_dim, n1, n2) + 1):
        for rows in _rref_subspaces(n1, dim):
            qs = [(-F1.q2(r)) % 4 for r in rows]
            bs = [[F1.b2(r, s) for s in rows] for r in rows]

            def extend(images, span):
                i = len(images)
                if i == dim:
                    yield tuple(images)
                    return
                for y in by_q[qs[i]]:
                    if y in span:
                        continue
                    if any(F2.b2(y, images[j]) != bs[i][j] for j in range(i)):
                        continue
                    yield from extend(images + [y], span | {s ^ y for s in span})

            for images in extend([], {0}):
                basis = tuple(F1.to_coords(r) + F2.to_coords(y) for r, y in zip(rows, images))
                out.append(GlueSubgroup(A, basis))
    return out


# ---------------------------------------------------------------------------
# overlattices


@dataclass(frozen=True)
class Overlattice:
    """``lattice`` in the basis ``basis`` (rows, coordinates of ``parts`` summed)."""

    parts: tuple
    glue: GlueSubgroup
    basis: tuple
    lattice: Lattice
    index: int

    @property
    def base(self):
        return direct_sum(self.parts)

    def index_formula_holds(self):
        """[L : T1+T2]^2 |A_L| == |A_T1| |A_T2| (orders are |det|)."""
        lhs = self.index ** 2 * abs(self.lattice.det)
        rhs = 1
        for p in self.parts:
            rhs *= abs(p.det)
        return lhs == rhs

    @classmethod
    def from_sublattice(cls, L, sub_basis):
        """View ``L`` as an overlattice of ``T + T^perp`` for a primitive ``T`` spanned by ``sub_basis``."""
        T_rows = [list(map(int, r)) for r in sub_basis]
        Z_rows = complement_basis(L, T_rows)
        T = Lattice(_gram_of(L, T_rows))
        Z = Lattice(_gram_of(L, Z_rows))
        C = T_rows + [list(r) for r in Z_rows]
        Y = im.inverse_q(C)
        A = discriminant_group(T).direct_sum(discriminant_group(Z))
        gens = []
        for row in Y:
            c = A.reduce(row)
            if any(c) and c not in gens:
                gens.append(c)
        glue = GlueSubgroup(A, tuple(gens))
        index = abs(im.det(C))
        basis = tuple(tuple(Fraction(x) for x in r) for r in Y)
        return cls((T, Z), glue, basis, Lattice(L.gram, L.label), index)


def _overlattice_basis(base, glue):
    n = base.rank
    rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    rows += [glue.ambient.lift(g) for g in glue.basis_vectors]
    basis = im.row_basis(rows)
    # clear denominators and multiply in exact integer arithmetic
    den = 1
    for u in basis:
        for x in u:
            den = lcm(den, x.denominator)
    B = np.array([[int(x * den) for x in u] for u in basis], dtype=object)
    G = np.array(base.gram, dtype=object)
    num = B @ G @ B.T
    sq = den * den
    if any(x % sq for x in num.flat):
        raise NonIntegralGlue("glue subgroup is not isotropic")
    gram = tuple(tuple(int(x) // sq for x in row) for row in num)
    if any(gram[i][i] % 2 for i in range(n)):
        raise NonIntegralGlue("glue subgroup is not isotropic")
    return basis, gram


def overlattice_from_glue(L, H):
    """The overlattice of ``L`` generated by lifts of the isotropic subgroup ``H``."""
    if tuple(map(tuple, H.ambient.gram)) != L.gram:
        raise LatticeError("glue subgroup lives on a different lattice")
    if not H.is_isotropic():
        raise NonIntegralGlue("glue subgroup is not isotropic")
    _, gram = _overlattice_basis(L, H)
    M = Lattice(gram)
    order = H.order
    assert order ** 2 * abs(M.det) == abs(L.det)
    return M


def build_overlattice(parts, H):
    base = direct_sum(parts)
    if not H.is_isotropic():
        raise NonIntegralGlue("glue subgroup is not isotropic")
    basis, gram = _overlattice_basis(base, H)
    lat = Lattice(gram)
    index = H.order
    return Overlattice(tuple(parts), H, tuple(map(tuple, basis)), lat, index)


def enumerate_primitive_overlattices(T1, T2, max_dim=None):
    """Every overlattice of ``T1 + T2`` in which both summands are primitive."""
    A1, A2 = discriminant_group(T1), discriminant_group(T2)
    if max_dim is None:
        max_dim = min(A1.ngens, A2.ngens)
    A = A1.direct_sum(A2)
    subgroups = enumerate_isotropic_subgroups(A, max_dim, split_constraint=(A1, A2))
    return [build_overlattice((T1, T2), H) for H in subgroups]


def glue_invariants(H, sig):
    """2-elementary invariants of the overlattice defined by ``H``, read off ``H^perp / H``."""
    F = F2Form(H.ambient)
    hs = [F.from_coords(h) for h in H.basis_vectors]
    brows = []
    for h in hs:
        row = 0
        for i in range(F.n):
            if F.b2(h, 1 << i):
                row |= 1 << i
        brows.append(row)
    perp = _nullspace_f2(brows, F.n)
    delta = 0 if all(F.q2(x) % 2 == 0 for x in perp) else 1
    r = sum(sig)
    return TwoElemInvariants(r, sig, F.n - 2 * len(hs), delta)


@dataclass(frozen=True)
class OverlatticeClass:
    """One isometry class; ``certified`` is False for definite representatives,
    where the uniqueness theorem does not apply and nothing is merged."""

    invariants: TwoElemInvariants
    representative: Overlattice
    members: int = 1
    certified: bool = True

    @property
    def gram(self):
        return self.representative.lattice.gram


def classify_primitive_overlattices(T1, T2, max_dim=None, overlattices=None, spot_checks=3):
    """Isometry classes of overlattices of ``T1 + T2`` containing both summands primitively.

    Each overlattice is bucketed by invariants read off ``H^perp / H``; the
    bucket representative is recomputed from its Gram matrix and the first
    few members are confirmed isometric to it with ``is_isometric_2elem``.
    """
    if overlattices is None:
        overlattices = enumerate_primitive_overlattices(T1, T2, max_dim)
    sig = signature(direct_sum([T1, T2]))
    definite = 0 in sig
    classes = []
    if definite:
        for ov in overlattices:
            inv = two_elementary_invariants(ov.lattice)
            classes.append(OverlatticeClass(inv, ov, 1, certified=False))
        return classes
    buckets = {}
    for ov in overlattices:
        buckets.setdefault(glue_invariants(ov.glue, sig), []).append(ov)
    for key, members in buckets.items():
        rep = members[0]
        actual = two_elementary_invariants(rep.lattice)
        assert actual == key, (actual, key)
        for other in members[1:1 + spot_checks]:
            assert is_isometric_2elem(rep.lattice, other.lattice)
        for cls in classes:
            assert not is_isometric_2elem(cls.representative.lattice, rep.lattice)
        classes.append(OverlatticeClass(actual, rep, len(members)))
    classes.sort(key=lambda c: (-c.invariants.a, c.invariants.delta))
    return classes


# ---------------------------------------------------------------------------
# Eichler criterion


class EichlerVerdict(enum.Enum):
    YES_BY_EICHLER = "YesByEichler"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


MAX_EICHLER_GROUP = 1 << 14


def _form_embeddings(AL, AM, limit=1):
    """Up to ``limit`` form-preserving injective maps ``A_L -> A_M`` (as generator images)."""
    k = AL.ngens
    if k == 0:
        return [()]
    if AM.order > MAX_EICHLER_GROUP:
        return None
    m_elems = list(AM.elements())
    qm = {y: AM.q(y) for y in m_elems}
    unit = [tuple(int(i == j) for j in range(k)) for i in range(k)]
    found = []

    def order_of(y):
        o = 1
        while any((o * c) % d for c, d in zip(y, AM.orders)):
            o += 1
        return o

    def extend(images):
        if len(found) >= limit:
            return
        i = len(images)
        if i == k:
            if _injective(AL, AM, images):
                found.append(tuple(images))
            return
        d = AL.orders[i]
        for y in m_elems:
            if d % order_of(y):
                continue
            if qm[y] != AL.q_diag[i]:
                continue
            if any(AM.b(y, images[j]) != AL.b_offdiag[i][j] for j in range(i)):
                continue
            extend(images + [y])

    extend([])
    return found


def _injective(AL, AM, images):
    for c in AL.elements():
        if not any(c):
            continue
        y = [0] * AM.ngens
        for ci, img in zip(c, images):
            for t in range(AM.ngens):
                y[t] += ci * img[t]
        if all(v % d == 0 for v, d in zip(y, AM.orders)):
            return False
    return True


def eichler_embedding_check(L, u_count, M_rest, disc_embedding=None):
    """One-sided primitive-embedding test for ``L`` into ``U^u_count + M_rest``.

    Returns YES_BY_EICHLER when ``u_count >= rank L`` and ``A_L`` embeds into
    ``A_M`` compatibly with the quadratic forms; otherwise UNKNOWN.  A
    supplied ``disc_embedding`` (generator images) is verified instead of
    searched for.
    """
    if u_count < L.rank:
        return EichlerVerdict.UNKNOWN
    AL = discriminant_group(L)
    AM = discriminant_group(M_rest) if M_rest is not None else None
    if AL.ngens == 0:
        return EichlerVerdict.YES_BY_EICHLER
    if AM is None or AM.ngens == 0:
        return EichlerVerdict.UNKNOWN
    if disc_embedding is not None:
        imgs = [tuple(y) for y in disc_embedding]
        ok = (
            len(imgs) == AL.ngens
            and all(AM.q(imgs[i]) == AL.q_diag[i] for i in range(AL.ngens))
            and all(AM.b(imgs[i], imgs[j]) == AL.b_offdiag[i][j] for i in range(AL.ngens) for j in range(i))
            and _injective(AL, AM, imgs)
        )
        return EichlerVerdict.YES_BY_EICHLER if ok else EichlerVerdict.UNKNOWN
    found = _form_embeddings(AL, AM)
    if found:
        return EichlerVerdict.YES_BY_EICHLER
    return EichlerVerdict.UNKNOWN


# ---------------------------------------------------------------------------
# isometries


def _is_isometry(L, M):
    n = L.rank
    if len(M) != n or any(len(r) != n for r in M):
        return False
    MT = im.transpose(M)
    return im.matmul(im.matmul(MT, [list(r) for r in L.gram]), M) == [list(r) for r in L.gram] and im.det(M) in (1, -1)


def glue_isometry(phiT, phiZ, ov):
    """Matrix on the basis of ``ov.lattice`` of the extension of ``phiT + phiZ``.

    Matrices act on column coordinate vectors.  The block map extends
    exactly when it maps the glue subgroup to itself.
    """
    T, Z = ov.parts
    phiT = [list(map(int, r)) for r in phiT]
    phiZ = [list(map(int, r)) for r in phiZ]
    if not _is_isometry(T, phiT) or not _is_isometry(Z, phiZ):
        raise NotIsometry("block maps must be isometries of the summands")
    nT, nZ = T.rank, Z.rank
    Phi = [r + [0] * nZ for r in phiT] + [[0] * nT + r for r in phiZ]
    A = ov.glue.ambient
    members = set(ov.glue.elements())
    for h in members:
        img = im.matvec(Phi, A.lift(h))
        if A.reduce(img) not in members:
            raise GlueNotPreserved(f"glue element {h} is not mapped into the glue group")
    Bt = im.transpose([list(r) for r in ov.basis])
    M = im.matmul(im.matmul(im.inverse_q(Bt), Phi), Bt)
    if any(Fraction(x).denominator != 1 for r in M for x in r):
        raise GlueNotPreserved("extension is not integral")
    M = [[int(x) for x in r] for r in M]
    assert _is_isometry(ov.lattice, M)
    return tuple(map(tuple, M))


@dataclass(frozen=True)
class InvariantPair:
    invariant: Lattice | None
    coinvariant: Lattice | None
    invariant_basis: tuple
    coinvariant_basis: tuple


def invariant_coinvariant(L, M):
    """Invariant and anti-invariant sublattices of an involution ``M`` (columns convention).

    A zero sublattice is reported as ``None``.
    """
    M = [list(map(int, r)) for r in M]
    n = L.rank
    I = im.identity(n)
    if im.matmul(M, M) != I:
        raise NotInvolution("M^2 != id")
    if not _is_isometry(L, M):
        raise NotIsometry("M does not preserve the form")
    out = []
    for sign in (1, -1):
        K = [[M[i][j] - sign * I[i][j] for j in range(n)] for i in range(n)]
        kern = im.integer_kernel(K, n)
        basis = tuple(tuple(int(x) for x in r) for r in im.row_basis(kern)) if kern else ()
        lat = Lattice(_gram_of(L, basis)) if basis else None
        out.append((lat, basis))
    (T, tb), (Z, zb) = out
    if T is not None and Z is not None:
        assert all(L.dot(u, v) == 0 for u in tb for v in zb)
    return InvariantPair(T, Z, tb, zb)


def contains_hyperbolic_U(L, k, bound, limit=5000):
    """Isotropic ``e, f`` with ``e.f = k`` spanning a primitive plane, searched in a box.

    ``None`` is inconclusive beyond ``bound``.
    """
    if L.rank < 2:
        return None
    iso = vectors_of_square(L, 0, bound, limit)
    if len(iso) < 2:
        return None
    V = np.array(iso, dtype=np.int64)
    P = V @ L.as_array() @ V.T
    for i, j in zip(*np.nonzero(P == k)):
        e, f = iso[i], iso[j]
        if im.is_primitive_rows([list(e), list(f)]):
            return e, f
    return None


def diagonal_embedding_basis(n_u=3, n_e8=2, extra=0):
    """Rows spanning a primitive ``U(2) + E8(-2)`` inside ``U^n_u + E8(-1)^n_e8 + (extra rank)``.

    ``U(2)`` sits on ``(e1 + e2, f1 + f2)`` of the first two ``U`` copies and
    ``E8(-2)`` on the diagonal of the first two ``E8(-1)`` copies.
    """
    if n_u < 2 or n_e8 < 2:
        raise LatticeError("need two copies of U and of E8(-1)")
    n = 2 * n_u + 8 * n_e8 + extra
    rows = []
    for k in range(2):
        v = [0] * n
        v[k] = v[2 + k] = 1
        rows.append(tuple(v))
    off = 2 * n_u
    for i in range(8):
        v = [0] * n
        v[off + i] = v[off + 8 + i] = 1
        rows.append(tuple(v))
    return rows
