"""Hot enumeration loops, compiled with numba when available.

Two kernels back the exhaustive searches used by the lattice and
enumerative modules:

* ``search_vectors`` walks the box ``[-bound, bound]^n`` of integer
  coordinate vectors and collects those of a prescribed square (and
  optionally divisibility);
* ``minus_one_classes`` lists the classes ``aH - sum b_i E_i`` on a blowup
  of the plane with ``C^2 = -1`` and ``C.(-K) = 1``.

Set ``HK_DISABLE_NUMBA=1`` to force the pure-numpy path.  Both paths return
identical arrays in identical order; ``benchmarks/bench_kernels.py`` times
them against each other.
"""

from __future__ import annotations

import math
import os

import numpy as np

try:  # pragma: no cover - import guard
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    _HAVE_NUMBA = False


def _env_disabled():
    return os.environ.get("HK_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")


USE_NUMBA = _HAVE_NUMBA and not _env_disabled()

# entries of the coordinate box visited in this order: 0, 1, -1, 2, -2, ...
def value_order(bound):
    vals = [0]
    for i in range(1, bound + 1):
        vals += [i, -i]
    return np.array(vals, dtype=np.int64)


MAX_DP_HITS = 1 << 16


# ---------------------------------------------------------------------------
# numba kernels

if _HAVE_NUMBA:

    @numba.njit(cache=True)
    def _gcd_abs(vec):
        g = 0
        for x in vec:
            a = abs(x)
            b = g
            while b:
                a, b = b, a % b
            g = a
        return g

    @numba.njit(cache=True)
    def _search_vectors_nb(gram, target, bound, div, max_hits):
        n = gram.shape[0]
        base = 2 * bound + 1
        vals = np.empty(base, np.int64)
        vals[0] = 0
        for i in range(1, bound + 1):
            vals[2 * i - 1] = i
            vals[2 * i] = -i
        digits = np.zeros(n, np.int64)
        v = np.zeros(n, np.int64)
        gv = np.zeros(n, np.int64)
        sq = 0
        out = np.empty((max_hits, n), np.int64)
        nh = 0
        while True:
            i = 0
            while i < n:
                d = digits[i] + 1
                if d == base:
                    d = 0
                digits[i] = d
                delta = vals[d] - v[i]
                if delta != 0:
                    sq += 2 * delta * gv[i] + delta * delta * gram[i, i]
                    for j in range(n):
                        gv[j] += delta * gram[j, i]
                    v[i] = vals[d]
                if d != 0:
                    break
                i += 1
            if i == n:
                break
            if sq != target:
                continue
            if div > 0 and _gcd_abs(gv) != div:
                continue
            out[nh, :] = v
            nh += 1
            if nh == max_hits:
                break
        return out[:nh]

    @numba.njit(cache=True)
    def _minus_one_classes_nb(k, a_lo, a_hi, b_lo, b_hi, cap):
        out = np.empty((cap, k + 1), np.int64)
        nh = 0
        b = np.zeros(max(k, 1), np.int64)
        for a in range(a_lo, a_hi + 1):
            target_sum = 3 * a - 1
            target_sq = a * a + 1
            if k == 0:
                continue
            pos = 0
            b[0] = b_lo - 1
            psum = 0
            psq = 0
            while pos >= 0:
                b[pos] += 1
                if b[pos] > b_hi:
                    pos -= 1
                    if pos >= 0:
                        psum -= b[pos]
                        psq -= b[pos] * b[pos]
                    continue
                ns = psum + b[pos]
                nq = psq + b[pos] * b[pos]
                if nq > target_sq:
                    continue
                rem = k - pos - 1
                if ns + rem * b_lo > target_sum or ns + rem * b_hi < target_sum:
                    continue
                if rem == 0:
                    if ns == target_sum and nq == target_sq:
                        if nh == cap:
                            return out[:0], -1
                        out[nh, 0] = a
                        for j in range(k):
                            out[nh, j + 1] = b[j]
                        nh += 1
                    continue
                psum = ns
                psq = nq
                pos += 1
                b[pos] = b_lo - 1
        return out[:nh], nh


# ---------------------------------------------------------------------------
# numpy fallbacks

def _search_vectors_np(gram, target, bound, div, max_hits):
    n = gram.shape[0]
    vals = value_order(bound)
    base = len(vals)
    # split coordinates: the first m vary fastest and are vectorised
    m = 1
    while m < n and base ** (m + 1) <= (1 << 20):
        m += 1
    m = min(m, n)
    idx = np.arange(base ** m, dtype=np.int64)
    low = np.empty((base ** m, m), dtype=np.int64)
    for j in range(m):
        low[:, j] = vals[(idx // base ** j) % base]
    g_ll = gram[:m, :m]
    g_lh = gram[:m, m:]
    g_hh = gram[m:, m:]
    q_low = np.einsum("ij,jk,ik->i", low, g_ll, low)
    w = low @ g_lh
    hits = []
    high = np.zeros(n - m, dtype=np.int64)
    digits = [0] * (n - m)
    while True:
        sq = q_low + 2 * (w @ high) + int(high @ g_hh @ high)
        cand = np.flatnonzero(sq == target)
        for c in cand:
            vec = np.concatenate([low[c], high])
            if not vec.any():
                continue
            if div > 0:
                g = 0
                for x in gram @ vec:
                    g = math.gcd(g, int(x))
                if g != div:
                    continue
            hits.append(vec)
            if len(hits) == max_hits:
                return np.array(hits, dtype=np.int64)
        i = 0
        while i < n - m:
            digits[i] = (digits[i] + 1) % base
            high[i] = vals[digits[i]]
            if digits[i] != 0:
                break
            i += 1
        if i == n - m:
            break
    if not hits:
        return np.zeros((0, n), dtype=np.int64)
    return np.array(hits, dtype=np.int64)


def _minus_one_classes_np(k, a_lo, a_hi, b_lo, b_hi):
    rows = []
    values = np.arange(b_lo, b_hi + 1, dtype=np.int64)
    nv = len(values)
    for a in range(a_lo, a_hi + 1):
        if k == 0:
            continue
        target_sum = 3 * a - 1
        target_sq = a * a + 1
        part = np.zeros((1, 0), dtype=np.int64)
        psum = np.zeros(1, dtype=np.int64)
        psq = np.zeros(1, dtype=np.int64)
        for pos in range(k):
            rem = k - pos - 1
            part = np.hstack([np.repeat(part, nv, axis=0), np.tile(values, len(part))[:, None]])
            psum = np.repeat(psum, nv) + np.tile(values, len(psum))
            psq = np.repeat(psq, nv) + np.tile(values * values, len(psq))
            keep = (psq <= target_sq) & (psum + rem * b_lo <= target_sum) & (psum + rem * b_hi >= target_sum)
            part, psum, psq = part[keep], psum[keep], psq[keep]
            if not len(part):
                break
        keep = (psum == target_sum) & (psq == target_sq)
        for row in part[keep]:
            rows.append(np.concatenate([[a], row]))
    if not rows:
        return np.zeros((0, k + 1), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


# ---------------------------------------------------------------------------
# public entry points

def search_vectors(gram, target, bound, div=0, max_hits=1, use_numba=None):
    """Nonzero vectors of ``[-bound, bound]^n`` with ``v.G.v == target``.

    Vectors are visited with the first coordinate varying fastest and each
    coordinate running through ``0, 1, -1, 2, -2, ...``, so vectors supported
    on early coordinates come first.  ``div > 0`` additionally requires the
    gcd of ``G v`` to equal ``div``.
    """
    gram = np.ascontiguousarray(gram, dtype=np.int64)
    if use_numba is None:
        use_numba = USE_NUMBA
    if gram.shape[0] == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if use_numba:
        if not _HAVE_NUMBA:
            raise RuntimeError("numba is not installed")
        return _search_vectors_nb(gram, int(target), int(bound), int(div), int(max_hits))
    return _search_vectors_np(gram, int(target), int(bound), int(div), int(max_hits))


def minus_one_classes(k, a_range, b_range, use_numba=None):
    """Rows ``(a, b_1, ..., b_k)`` with ``sum b_i = 3a - 1`` and ``sum b_i^2 = a^2 + 1``."""
    if use_numba is None:
        use_numba = USE_NUMBA
    a_lo, a_hi = a_range
    b_lo, b_hi = b_range
    if use_numba:
        if not _HAVE_NUMBA:
            raise RuntimeError("numba is not installed")
        out, nh = _minus_one_classes_nb(k, a_lo, a_hi, b_lo, b_hi, MAX_DP_HITS)
        if nh < 0:
            raise RuntimeError("class buffer overflow")
        return out
    return _minus_one_classes_np(k, a_lo, a_hi, b_lo, b_hi)
