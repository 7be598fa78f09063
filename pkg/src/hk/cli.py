"""``hk`` command line interface."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import chow, claims, detrank, enumgeo
from .errors import HKError
from .lattice import (
    direct_sum,
    discriminant_group,
    format_gram,
    parse_lattice,
    read_gram,
    signature,
    two_elementary_invariants,
)


def load_lattice(arg):
    """A lattice from a Gram file path or an expression such as ``U(2)+E8(-2)``."""
    if os.path.isfile(arg):
        with open(arg) as fh:
            return read_gram(fh.read(), label=os.path.basename(arg))
    return parse_lattice(arg)


def _cmd_verify(args):
    ids = [s for s in args.claims.split(",") if s.strip()] if args.claims else None
    report = claims.run_claims(ids)
    print(claims.format_report(report, args.format))
    return min(report["summary"]["fail"], 125)


def _cmd_lattice(args):
    if args.sub == "sum":
        L = direct_sum([load_lattice(a) for a in args.lattices])
        print(format_gram(L), end="")
        return 0
    if len(args.lattices) != 1:
        raise HKError(f"'lattice {args.sub}' takes exactly one lattice")
    L = load_lattice(args.lattices[0])
    if args.sub == "info":
        p, m = signature(L)
        sign = "+" if L.det > 0 else "-"
        print(f"rank {L.rank}")
        print(f"|det| {abs(L.det)} (sign {sign})")
        print(f"signature ({p},{m})")
        A = discriminant_group(L)
        if A.is_two_elementary():
            print(two_elementary_invariants(L, A))
    elif args.sub == "disc":
        A = discriminant_group(L)
        print(f"orders {list(A.orders)}")
        for i in range(A.ngens):
            row = " ".join(str(A.b_offdiag[i][j]) for j in range(A.ngens))
            print(f"g{i}: q={A.q_diag[i]}  b: {row}")
    elif args.sub == "inv2":
        print(two_elementary_invariants(L))
    return 0


def _cmd_chow(args):
    value = chow.evaluate(args.expr, args.ring)
    print(value)
    return 0


def _cmd_enum(args):
    op = args.op
    rest = args.args
    if op == "minus1":
        k = int(rest[0]) if rest else 8
        classes = enumgeo.del_pezzo_minus1_classes(k)
        out = {"k": k, "count": len(classes)}
        if args.verbose:
            out["classes"] = [str(c) for c in classes]
    elif op == "conics":
        out = {"conics": enumgeo.symmetric_conic_count()}
    elif op == "torsion":
        g, r, d = (int(x) for x in (rest or ["4", "5", "4"]))
        total, splits = enumgeo.two_torsion_count(g, r, d)
        out = {"total": total, "splits": list(splits)}
    elif op == "monomials":
        out = {f"case{c}": enumgeo.invariant_monomial_count(c) for c in (1, 2, 3)}
        out["all"] = enumgeo.invariant_monomial_count()
    elif op == "family":
        out = {f"case{c}": enumgeo.family_dimension(c) for c in (1, 2, 3)}
    elif op == "moduli":
        exprs = rest or ["U(2)+E8(-2)", "U+E8(-2)", "U(2)+D4(-1)"]
        out = {e: enumgeo.moduli_dimension_pairs(load_lattice(e)) for e in exprs}
    elif op == "dp4":
        divs, c = enumgeo.dp4_paper_divisors()
        out = {k: {"chi": enumgeo.dp4_chi(D), "ideal_chi": enumgeo.dp4_ideal_chi(D, c)} for k, D in divs.items()}
        out["control H"] = {"chi": enumgeo.dp4_chi(enumgeo.H(5)), "ideal_chi": enumgeo.dp4_ideal_chi(enumgeo.H(5), c)}
    else:
        raise HKError(f"unknown enum operation {op!r}")
    print(json.dumps(out, indent=2))
    return 0


def _cmd_detrank(args):
    with open(args.matrix) as fh:
        M = detrank.read_matrix(fh.read(), args.cutoff)
    d = detrank.truncated_det(M, args.cutoff)
    for k in range(args.cutoff + 1):
        print(f"Phi_{k} = {detrank.homogeneous_part(d, k)}")
    if args.cutoff >= 2:
        phi2 = detrank.homogeneous_part(d, 2)
        print(f"rank Phi_2 = {detrank.quadratic_rank(phi2)}")
    if args.cutoff >= 3 and d.degree_part(0).is_zero() and d.degree_part(1).is_zero():
        print(f"transversal D4 (first {args.d4_vars} variables): {detrank.d4_type_check(d, args.d4_vars)}")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="hk", description="Exact lattice, Chow-ring and determinant checks.")
    sub = p.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("verify", help="re-derive the registered claims")
    v.add_argument("--claims", help="comma-separated ids or slugs (default: all)")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.set_defaults(func=_cmd_verify)

    lat = sub.add_parser("lattice", help="lattice information")
    lat.add_argument("sub", choices=("info", "disc", "inv2", "sum"))
    lat.add_argument("lattices", nargs="+", help="Gram file or expression")
    lat.set_defaults(func=_cmd_lattice)

    ch = sub.add_parser("chow", help="Chow ring expressions")
    ch.add_argument("action", choices=("eval",))
    ch.add_argument("expr")
    ch.add_argument("--ring", default="P3", choices=sorted(chow.RINGS))
    ch.set_defaults(func=_cmd_chow)

    en = sub.add_parser("enum", help="enumerative counts")
    en.add_argument("op", choices=("minus1", "conics", "torsion", "monomials", "family", "moduli", "dp4"))
    en.add_argument("args", nargs="*")
    en.add_argument("-v", "--verbose", action="store_true")
    en.set_defaults(func=_cmd_enum)

    dr = sub.add_parser("detrank", help="truncated determinant of a polynomial matrix")
    dr.add_argument("matrix")
    dr.add_argument("--cutoff", type=int, default=2)
    dr.add_argument("--d4-vars", type=int, default=4)
    dr.set_defaults(func=_cmd_detrank)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (HKError, OSError) as exc:
        print(f"hk: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
