"""Registry of numerical claims, each re-derived from scratch and compared exactly.

Every entry carries a provenance tag: ``stated`` (a value asserted in the
source statement), ``derived`` (follows by a computation we trust
independently) or ``trivial``.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from . import chow, detrank, enumgeo, glue, mukai
from .errors import UnknownClaimId
from .lattice import (
    delta_set_profile,
    is_isometric_2elem,
    parse_lattice,
    two_elementary_invariants,
)


@dataclass(frozen=True, eq=False)
class Claim:
    id: str
    slug: str
    description: str
    ref: str
    provenance: str
    compute: Callable
    expected: object


def _inv(expr):
    return list(two_elementary_invariants(parse_lattice(expr)).as_tuple())


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    if isinstance(x, list):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


# -- lattice claims -----------------------------------------------------------

TRIPLE_LATTICES = ("U(2)+E8(-2)", "U+E8(-2)", "U(2)+D4(-1)")


def c01():
    return {e: _inv(e) for e in TRIPLE_LATTICES}


def c02():
    p = delta_set_profile(parse_lattice("U(2)+E8(-2)"), 2)
    return {"certified_empty": p.certified_empty, "minus2": p.has_minus2, "minus10_div2": p.has_minus10_div2}


def c03():
    out = {}
    for e in ("U+E8(-2)", "U(2)+D4(-1)"):
        L = parse_lattice(e)
        w = delta_set_profile(L, 2).minus2_witness
        out[e] = w is not None and L.square(w) == -2
    return out


@lru_cache(maxsize=1)
def _overlattices():
    T1, T2 = parse_lattice("U(2)"), parse_lattice("E8(-2)")
    ovs = glue.enumerate_primitive_overlattices(T1, T2)
    return T1, T2, ovs


REFERENCE_OVERLATTICES = ("U(2)+E8(-2)", "U+E8(-2)", "U(2)+D4(-1)+D4(-1)")


def c04():
    T1, T2, ovs = _overlattices()
    classes = glue.classify_primitive_overlattices(T1, T2, overlattices=ovs)
    names = []
    for c in classes:
        match = [r for r in REFERENCE_OVERLATTICES if is_isometric_2elem(c.representative.lattice, parse_lattice(r))]
        names.append(match[0] if len(match) == 1 else None)
    return sorted(n or "?" for n in names)


def c05():
    _, _, ovs = _overlattices()
    bad = sum(1 for o in ovs if not o.index_formula_holds())
    return {"overlattices": len(ovs), "violations": bad}


def c06():
    return [_inv("U(2)+D4(-1)+<2>"), _inv("<-2>^4+<2>+U")]


# -- Mukai / moduli claims ------------------------------------------------------


def c07():
    P = mukai.standard_picard()
    return list(two_elementary_invariants(mukai.moduli_picard(P, 1, 0, mukai.hyperplane_vector(P))).as_tuple())


def c08():
    cases = mukai.enumerate_lambda_alpha()
    invs = {str(two_elementary_invariants(c.picard)) for c in cases}
    return {"classes": len(cases), "distinct_invariants": sorted(invs)}


def c09():
    P = mukai.standard_picard()
    return mukai.moduli_dimension_mukai(mukai.hyperplane_vector(P), P)


# -- Chow claims ------------------------------------------------------------------


def c10():
    return chow.integrate(chow.lagrangian_d2(chow.t1_plus()))


def c11():
    rep = chow.lagrangian_d2_report(chow.t3_minus())
    R = chow.ring_P1xG24()
    return {
        "raw": str(rep.raw),
        "effective": str(rep.effective),
        "equals_2h1^3": rep.effective == 2 * R.gen("h1") ** 3,
    }


def c12():
    rep = chow.lagrangian_d2_report(chow.segre_tangent_class())
    target = chow.paper_class_t3_plus()
    return {
        "class": str(rep.effective),
        "matches_12h1^2h2": rep.effective == target,
        "pairing": chow.p1_times_p2_pairing(target),
    }


# -- enumerative claims -------------------------------------------------------------


def c13():
    return [len(enumgeo.del_pezzo_minus1_classes(8)), enumgeo.symmetric_conic_count()]


def c14():
    total, splits = enumgeo.two_torsion_count(4, 5, 4)
    return [total, list(splits)]


def c15():
    return {
        "monomials": [enumgeo.invariant_monomial_count(c) for c in (1, 2, 3)],
        "family_dims": [enumgeo.family_dimension(c) for c in (1, 2, 3)],
    }


def c16():
    return [enumgeo.moduli_dimension_pairs(parse_lattice(e)) for e in TRIPLE_LATTICES]


def c17():
    divs, c = enumgeo.dp4_paper_divisors()
    return {"ideal_chi": {k: enumgeo.dp4_ideal_chi(D, c) for k, D in divs.items()}, "control_H": enumgeo.dp4_ideal_chi(enumgeo.H(5), c)}


def c18():
    M = detrank.local_model_matrix(cutoff=2)
    d = detrank.truncated_det(M, 2)
    phi = [str(detrank.homogeneous_part(d, k)) for k in range(3)]
    lin = detrank.homogeneous_part(detrank.truncated_det(detrank.linear_truncation(M), 2), 2)
    f = detrank.parse_poly("x**2+y**2+z**3+t**3", 3, ("x", "y", "z", "t"))
    return {
        "phi": phi,
        "rank_phi2": detrank.quadratic_rank(detrank.homogeneous_part(d, 2)),
        "linear_only": lin == detrank.homogeneous_part(d, 2),
        "d4": detrank.d4_type_check(f),
    }


CLAIMS = [
    Claim("C01", "triples", "2-elementary invariants of the three invariant lattices", "lattice invariants", "stated", c01,
          {e: v for e, v in zip(TRIPLE_LATTICES, [[10, [1, 9], 10, 0], [10, [1, 9], 8, 0], [6, [1, 5], 4, 0]])}),
    Claim("C02", "delta-empty", "no (-2)- or (-10)-vectors of divisibility 2 in U(2)+E8(-2) (mod 4 certificate)",
          "square multiple of four", "stated", c02, {"certified_empty": True, "minus2": False, "minus10_div2": False}),
    Claim("C03", "delta-witness", "(-2)-vectors exist in U+E8(-2) and U(2)+D4(-1)", "wall divisors", "derived", c03,
          {"U+E8(-2)": True, "U(2)+D4(-1)": True}),
    Claim("C04", "overlattices", "overlattices containing U(2) and E8(-2) primitively", "overlattice classes", "stated",
          c04, sorted(REFERENCE_OVERLATTICES)),
    Claim("C05", "index-formula", "index formula on every enumerated overlattice", "index formula", "stated", c05,
          {"overlattices": 9031, "violations": 0}),
    Claim("C06", "lattice-identity", "U(2)+D4(-1)+<2> and <-2>^4+<2>+U share invariants", "lattice identity",
          "stated", c06, [[7, [2, 5], 5, 1], [7, [2, 5], 5, 1]]),
    Claim("C07", "moduli-untwisted", "Picard lattice of the untwisted moduli space", "moduli Picard, untwisted",
          "stated", c07, [10, [1, 9], 8, 0]),
    Claim("C08", "moduli-twisted", "Picard lattice for all 15 nonzero lambda_alpha", "moduli Picard, twisted",
          "stated", c08, {"classes": 15, "distinct_invariants": ["r=10 sig=(1,9) a=10 delta=0"]}),
    Claim("C09", "moduli-dim", "dimension of the moduli space for v=(0,H,0)", "moduli dimension", "derived", c09, 4),
    Claim("C10", "d2-t1", "second degeneracy class on P^3", "degeneracy class, 16 points", "stated", c10, 16),
    Claim("C11", "d2-t3minus", "second degeneracy class of pi2*U + pi2*Q^vee", "degeneracy class 2h1^3", "stated",
          c11, {"raw": "-4*s21", "effective": "4*s21", "equals_2h1^3": True}),
    Claim("C12", "d2-t3plus", "second degeneracy class of the Segre tangent bundle", "degeneracy class 12h1^2h2",
          "stated", c12, {"class": "12*h2*s2 + 12*h2*s11", "matches_12h1^2h2": True, "pairing": 12}),
    Claim("C13", "minus-one-curves", "(-1)-curves on the degree one del Pezzo and conic pairs", "240 curves, 120 conics",
          "stated", c13, [240, 120]),
    Claim("C14", "two-torsion", "2-torsion count and its splitting", "2^12 elements", "stated", c14, [4096, [255, 3839]]),
    Claim("C15", "monomials", "invariant monomials and family dimensions", "24-9-5+1=11", "stated", c15,
          {"monomials": [24, 24, 20], "family_dims": [11, 11, 11]}),
    Claim("C16", "moduli-dims", "dimensions of the moduli of pairs", "dimensions 11, 11, 15", "stated", c16, [11, 11, 15]),
    Claim("C17", "dp4-chi", "Euler characteristics on the quartic del Pezzo", "Riemann-Roch vanishing", "derived", c17,
          {"ideal_chi": {"k-h": 0, "h": 0, "0": 0, "-h": 0, "h-k": 0}, "control_H": 1}),
    Claim("C18", "detrank", "homogeneous parts of the local determinant and the D4 test", "transversal D4", "derived",
          c18, {"phi": ["0", "0", "-t**2 - x**2 - y**2"], "rank_phi2": 3, "linear_only": True, "d4": True}),
]

BY_ID = {c.id: c for c in CLAIMS}
BY_SLUG = {c.slug: c for c in CLAIMS}


def resolve(ids):
    if not ids:
        return list(CLAIMS)
    out = []
    for raw in ids:
        key = raw.strip()
        if key.upper() in BY_ID:
            out.append(BY_ID[key.upper()])
            continue
        slug = key[2:] if key.lower().startswith("c_") else key
        if slug.lower() in BY_SLUG:
            out.append(BY_SLUG[slug.lower()])
            continue
        raise UnknownClaimId(f"unknown claim id {raw!r}")
    return sorted({c.id: c for c in out}.values(), key=lambda c: c.id)


def _run_one(claim):
    t0 = time.perf_counter()
    try:
        computed = _jsonable(claim.compute())
        status = "pass" if computed == _jsonable(claim.expected) else "fail"
    except Exception as exc:  # a broken claim is a failed claim, not a crash
        computed = f"error: {type(exc).__name__}: {exc}"
        status = "fail"
    return {
        "id": claim.id,
        "status": status,
        "computed": computed,
        "expected": _jsonable(claim.expected),
        "paper_ref": claim.ref,
        "provenance": claim.provenance,
        "runtime_ms": round(1000 * (time.perf_counter() - t0), 1),
    }


def thread_count():
    try:
        return max(1, int(os.environ.get("HK_THREADS", "1")))
    except ValueError:
        return 1


def run_claims(ids=None):
    claims = resolve(ids)
    threads = min(thread_count(), len(claims))
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            rows = list(pool.map(_run_one, claims))
    else:
        rows = [_run_one(c) for c in claims]
    rows.sort(key=lambda r: r["id"])
    passed = sum(r["status"] == "pass" for r in rows)
    return {"claims": rows, "summary": {"pass": passed, "fail": len(rows) - passed}}


def format_report(report, fmt="text"):
    if fmt == "json":
        return json.dumps(report, indent=2)
    lines = []
    for r in report["claims"]:
        lines.append(f"{r['id']} {r['status'].upper():4s} {BY_ID[r['id']].description} ({r['runtime_ms']} ms)")
        if r["status"] != "pass":
            lines.append(f"     computed: {json.dumps(r['computed'])}")
            lines.append(f"     expected: {json.dumps(r['expected'])}")
    s = report["summary"]
    lines.append(f"{s['pass']} passed, {s['fail']} failed")
    return "\n".join(lines)
