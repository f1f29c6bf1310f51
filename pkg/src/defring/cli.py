"""Command-line front end: parse inputs, orchestrate pipelines, emit reports.

Subcommands: cohomology, products, present, pseudo, oracle, massey, check.
JSON output is deterministic (sorted keys, no timestamps unless --timing),
so repeated runs on the same input are byte-identical.  Exit status is 0
exactly when every requested verification passed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import deform, inputs, present, pseudo, transfer
from .cochain import build_group_complex, build_hochschild_complex

SCHEMA_VERSION = 1


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def _emit(report, args):
    report = _jsonable(report)
    if args.format == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        _print_text(report)
    return 0 if report.get("verification", {}).get("passed", True) else 1


def _print_text(report, indent=0):
    pad = "  " * indent
    for k in sorted(report):
        v = report[k]
        if isinstance(v, dict):
            print("%s%s:" % (pad, k))
            _print_text(v, indent + 1)
        else:
            print("%s%s: %s" % (pad, k, v))


def _load(args):
    doc = inputs.load_document(args.input)
    rep = inputs.load_problem(doc)
    return rep


def _pipeline(rep, d_max, n_arity, priority="standard"):
    if rep.is_group:
        complex = build_group_complex(rep, d_max)
    else:
        complex = build_hochschild_complex(rep, d_max)
    retract = transfer.Retract(complex, priority=priority)
    profile = "stasheff" if d_max >= 3 else "deg1"
    ainf = transfer.transfer_products(retract, complex, n_arity, profile)
    return complex, retract, ainf


def _parse_ring(spec, p):
    if spec.startswith("eps:"):
        return deform.eps_ring(p, int(spec.split(":", 1)[1]))
    if spec.startswith("sqz:"):
        return deform.square_zero_ring(p, int(spec.split(":", 1)[1]))
    if spec.startswith("file:"):
        doc = inputs.load_document(spec.split(":", 1)[1])
        return deform.ring_from_doc(doc, p)
    raise ValueError("ring spec must be eps:n, sqz:k, or file:<path>")


def cmd_cohomology(args):
    rep = _load(args)
    if rep.is_group:
        complex = build_group_complex(rep, args.dmax)
    else:
        complex = build_hochschild_complex(rep, args.dmax)
    retract = transfer.Retract(complex)
    dims, blocks = [], []
    for n in range(args.dmax + 1):
        h, per_block, _ = transfer.cohomology(complex, n, retract)
        dims.append(h)
        blocks.append({"%d,%d" % k: v for k, v in sorted(per_block.items())})
    report = {
        "schema_version": SCHEMA_VERSION, "command": "cohomology",
        "results": {"dims": dims, "blocks": blocks,
                    "complex_dims": [complex.dim(n) for n in range(args.dmax + 1)]},
        "verification": {"passed": True},
    }
    return _emit(report, args)


def cmd_products(args):
    rep = _load(args)
    complex, retract, ainf = _pipeline(rep, args.dmax, args.max_arity)
    entries = []
    for key in sorted(ainf.m_table):
        vec = ainf.m_table[key]
        if not vec.any():
            continue
        entries.append({
            "arity": len(key),
            "tuple": [[int(d), int(t)] for (d, t) in key],
            "blocks": [list(ainf.h1_blocks[t]) if d == 1 else list(ainf.h2_blocks[t])
                       for (d, t) in key],
            "output": vec.tolist(),
        })
    report = {
        "schema_version": SCHEMA_VERSION, "command": "products",
        "results": {"h1_blocks": [list(b) for b in ainf.h1_blocks],
                    "h2_blocks": [list(b) for b in ainf.h2_blocks],
                    "entries": entries},
        "verification": {"passed": True},
    }
    return _emit(report, args)


def _pres_payload(pres, hilbert):
    return {
        "generators": [{"name": n, "block": list(b)} for n, b in pres.generators],
        "relations": [{"label": lab, "block": list(b),
                       "terms": [{"word": list(w), "coeff": int(c)}
                                 for w, c in sorted(body.items())]}
                      for lab, b, body in pres.relations],
        "hilbert": hilbert,
        "commutative": pres.commutative,
        "truncation": pres.truncation,
    }


def cmd_present(args):
    rep = _load(args)
    table, verdict = inputs.check_multiplicity_free(rep)
    if rep.r > 1 and not verdict:
        print("error: representation is not multiplicity-free; "
              "intertwiner table %s" % table.tolist(), file=sys.stderr)
        return 2
    complex, retract, ainf = _pipeline(rep, args.dmax, max(args.truncate, 2))
    pres = present.relations_from_ainf(ainf, args.truncate)
    coeffs = present.universal_rep_coeffs(ainf, complex, args.truncate)
    if args.corrupt_sign:
        _corrupt_coeffs(coeffs)
    check = present.verify_universal_hom(coeffs, pres, complex) \
        if rep.is_group else {"passed": True, "failures": []}
    out = pres
    if args.gma:
        out = present.gma_coordinate_ring(ainf, args.truncate, verdict)
    elif args.abelian:
        out = present.abelianize(pres)
    hil = present.hilbert_function(out, args.truncate)
    report = {
        "schema_version": SCHEMA_VERSION, "command": "present",
        "results": _pres_payload(out, hil),
        "verification": {"passed": bool(check["passed"]),
                         "universal_hom": check},
    }
    return _emit(report, args)


def cmd_pseudo(args):
    if args.quiver:
        doc = inputs.load_document(args.quiver)
        ainf = pseudo.synthetic_ainf(doc["h1"], doc["h2"], doc.get("m"),
                                     p=int(doc.get("prime", 2)),
                                     n_max=max(args.truncate, int(doc.get("r", 2)) + 1))
    else:
        rep = _load(args)
        table, verdict = inputs.check_multiplicity_free(rep)
        if not verdict:
            print("error: representation is not multiplicity-free", file=sys.stderr)
            return 2
        _, _, ainf = _pipeline(rep, args.dmax, max(args.truncate, 2))
    q = pseudo.build_quiver(ainf)
    cd = pseudo.enumerate_cycles(q)
    pp = pseudo.rd_presentation(ainf, args.truncate)
    h2g = pseudo.h2_monoid_generators(q, cd, bound=args.truncate)
    bounds = pseudo.dimension_bounds(q, cd)
    crosscheck = pseudo.rd_gma_crosscheck(ainf, args.truncate)
    report = {
        "schema_version": SCHEMA_VERSION, "command": "pseudo",
        "results": {
            "cycles": [list(c) for c in cd.arrow_cycles],
            "vertex_cycles": [list(c) for c in cd.vertex_cycles],
            "h2_generators": [[list(u), list(v)] for u, v in h2g["pairs"]],
            "dim_h2": h2g["dim_h2"],
            "krull": pseudo.krull_dim_r1d(q),
            "tangent": pp.tangent,
            "bounds": bounds,
            "relations": [{"label": lab,
                           "terms": [{"monomial": list(m), "coeff": int(c)}
                                     for m, c in sorted(poly.items())]}
                          for lab, poly in pp.relation_polys],
            "hilbert_cycle": pp.hilbert_cycle,
            "hilbert_ext": pp.hilbert_ext,
        },
        "verification": {"passed": bool(crosscheck["agree"]),
                         "invariant_slice": crosscheck},
    }
    return _emit(report, args)


def cmd_oracle(args):
    rep = _load(args)
    ring = _parse_ring(args.ring, rep.p)
    res = deform.oracle_lift_classes(rep, ring)
    report = {
        "schema_version": SCHEMA_VERSION, "command": "oracle",
        "results": {"solutions": res["solutions"],
                    "strict_classes": res["strict_classes"],
                    "deformation_classes": res["deformation_classes"],
                    "ring": args.ring},
        "verification": {"passed": True},
    }
    return _emit(report, args)


def cmd_massey(args):
    rep = _load(args)
    complex, retract, ainf = _pipeline(rep, args.dmax, max(args.arity, 2))
    results = []
    ok_all = True
    for t in range(ainf.h1_dim):
        tup = tuple([t] * args.arity)
        blocks = [ainf.h1_blocks[t]] * args.arity
        if any(a[1] != b[0] for a, b in zip(blocks, blocks[1:])):
            continue
        try:
            system, value, checked = transfer.massey_from_ainf(ainf, complex, retract, tup)
        except transfer.TransferError as e:
            results.append({"tuple": list(tup), "refused": str(e)})
            continue
        ok_all = ok_all and checked
        results.append({"tuple": list(tup), "value": value.tolist(),
                        "sign_checked": bool(checked)})
    report = {
        "schema_version": SCHEMA_VERSION, "command": "massey",
        "results": {"arity": args.arity, "powers": results},
        "verification": {"passed": bool(ok_all)},
    }
    return _emit(report, args)


def _corrupt_coeffs(coeffs):
    """Negative-control corruption: perturb one higher coefficient entry."""
    for word in sorted(coeffs.coeffs, key=len):
        if len(word) >= 2:
            coeffs.coeffs[word][0, 0, 0] += 1
            return


def cmd_check(args):
    rep = _load(args)
    p = rep.p
    checks = {}
    complex, retract, ainf = _pipeline(rep, 3, max(args.max_arity, 4))
    pres = present.relations_from_ainf(ainf, min(args.max_arity, ainf.n_max))
    coeffs = present.universal_rep_coeffs(ainf, complex, pres.truncation)
    if args.corrupt_sign:
        _corrupt_coeffs(coeffs)
    uh = present.verify_universal_hom(coeffs, pres, complex)
    checks["universal_hom"] = uh

    st = transfer.check_stasheff(ainf, complex, [3, 4])
    checks["stasheff"] = {"passed": not st["violations"],
                          "checked": st["checked"],
                          "violations": st["violations"]}

    rings = [deform.eps_ring(p, 1), deform.eps_ring(p, 2)]
    oracle_ok = True
    oracle_counts = []
    for ring in rings:
        oracle = deform.oracle_lift_classes(rep, ring)
        dg = deform.enumerate_mc_dg(complex, ring)
        classes = deform.gauge_classes_dg(complex, ring, dg)
        mc = deform.solve_mc_minimal(ainf, ring)
        mc_classes = deform.minimal_gauge_class_count(ainf, ring, mc)
        agree = oracle["deformation_classes"] == len(classes) == mc_classes
        oracle_ok = oracle_ok and agree
        oracle_counts.append({"ring": "eps:%d" % (ring.dim - 1),
                              "oracle": oracle["deformation_classes"],
                              "dg_classes": len(classes),
                              "minimal_classes": mc_classes,
                              "agree": agree})
    checks["oracle_equivalence"] = {"passed": oracle_ok, "counts": oracle_counts}

    retract2 = transfer.Retract(complex, priority="reversed")
    ainf2 = transfer.transfer_products(retract2, complex, ainf.n_max)
    ab1 = present.abelianize(present.relations_from_ainf(ainf, pres.truncation))
    ab2 = present.abelianize(present.relations_from_ainf(ainf2, pres.truncation))
    h1 = present.hilbert_function(ab1, pres.truncation)
    h2 = present.hilbert_function(ab2, pres.truncation)
    checks["retract_independence"] = {"passed": h1 == h2,
                                      "hilbert": [h1, h2]}

    massey_ok = True
    massey_out = []
    for t in range(ainf.h1_dim):
        for n in range(3, min(5, ainf.n_max) + 1):
            tup = tuple([t] * n)
            try:
                _, value, checked = transfer.massey_from_ainf(ainf, complex, retract, tup)
            except transfer.TransferError:
                continue
            massey_ok = massey_ok and checked
            massey_out.append({"tuple": list(tup), "value": value.tolist(),
                               "sign_checked": bool(checked)})
    checks["massey_comparison"] = {"passed": massey_ok, "powers": massey_out}

    passed = all(c.get("passed", True) for c in checks.values())
    report = {
        "schema_version": SCHEMA_VERSION, "command": "check",
        "results": checks,
        "verification": {"passed": passed},
    }
    return _emit(report, args)


def main(argv=None):
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--format", choices=["json", "text"], default="json")
    shared.add_argument("--threads", type=int, default=1,
                        help="cap for parallel stages (stages run within the cap)")
    shared.add_argument("--timing", action="store_true",
                        help="report wall-clock timing on stderr")
    parser = argparse.ArgumentParser(
        prog="defring",
        description="Minimal A-infinity structures on cohomology and "
                    "truncated presentations of deformation rings over F_p.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, needs_input=True):
        if needs_input:
            sp.add_argument("--input", required=True)
        sp.add_argument("--dmax", type=int, default=3)
        sp.add_argument("--truncate", type=int, default=8)
        sp.add_argument("--max-arity", dest="max_arity", type=int, default=6)

    sp = sub.add_parser("cohomology", parents=[shared],
                        help="per-degree, per-block cohomology dims")
    common(sp)
    sp.set_defaults(func=cmd_cohomology)

    sp = sub.add_parser("products", parents=[shared],
                        help="transferred product tables as JSON")
    common(sp)
    sp.set_defaults(func=cmd_products)

    sp = sub.add_parser("present", parents=[shared],
                        help="truncated presentation + certificates")
    common(sp)
    sp.add_argument("--abelian", action="store_true")
    sp.add_argument("--gma", action="store_true")
    sp.add_argument("--corrupt-sign", action="store_true", help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_present)

    sp = sub.add_parser("pseudo", parents=[shared],
                        help="pseudodeformation presentation data")
    sp.add_argument("--input")
    sp.add_argument("--quiver")
    sp.add_argument("--dmax", type=int, default=3)
    sp.add_argument("--truncate", type=int, default=8)
    sp.add_argument("--max-arity", dest="max_arity", type=int, default=6)
    sp.set_defaults(func=cmd_pseudo)

    sp = sub.add_parser("oracle", parents=[shared],
                        help="brute-force lift classes over a test ring")
    common(sp)
    sp.add_argument("--ring", required=True, help="eps:n | sqz:k | file:<path>")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("massey", parents=[shared],
                        help="Massey powers from the f-induced system")
    common(sp)
    sp.add_argument("--arity", type=int, default=3)
    sp.set_defaults(func=cmd_massey)

    sp = sub.add_parser("check", parents=[shared],
                        help="full invariant suite on a fixture")
    common(sp)
    sp.add_argument("--corrupt-sign", action="store_true", help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_check)

    args = parser.parse_args(argv)
    if args.command == "pseudo" and not (args.input or args.quiver):
        parser.error("pseudo needs --input or --quiver")
    from .cochain import CapacityError
    from .deform import CapExceeded
    from .pseudo import PseudoError
    from .transfer import TransferError

    t0 = time.time()
    try:
        rc = args.func(args)
    except (inputs.InputError, ValueError, CapacityError, CapExceeded,
            TransferError, PseudoError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    if args.timing:
        print("elapsed: %.3fs" % (time.time() - t0), file=sys.stderr)
    return rc


if __name__ == "__main__":
    sys.exit(main())
