"""Command line entry point.

Exit codes: 0 holds/success, 1 fails with a witness, 2 inconclusive up to
the bound, 3 input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import depthcheck as dc
from .errors import (DepthkitError, DepthZeroWitness, GradingError, InputError, ParseError,
                     PreconditionError, RegularElementError)
from .fpmodule import DEFAULT_DMAX, minimal_presentation, tensor_product
from .homology import (Status, depth, depth_ab, depth_ext, is_tor_independent, tor_subquotient)
from .instance import load_instance_file, module_block
from .resolution import betti_rows, betti_table, free_resolution

EXIT_OK, EXIT_FAILS, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3
_STATUS_EXIT = {Status.HOLDS: EXIT_OK, Status.FAILS: EXIT_FAILS,
                Status.INCONCLUSIVE: EXIT_INCONCLUSIVE}


def _options(args, inst) -> dict:
    opts = dict(inst.options) if inst is not None else {}
    n = inst.ring.n if inst is not None else 2
    for key, dflt in (("bound", 2 * (n + 1)), ("dmax", DEFAULT_DMAX), ("seed", 0),
                      ("max_degree", 3)):
        val = getattr(args, key, None)
        if val is not None:
            opts[key] = val
        opts.setdefault(key, dflt)
    return dict(sorted(opts.items()))


def _betti(res) -> dict:
    return {"betti": [len(t) for t in res.twists], "rows": betti_rows(res),
            "graded": [[i, d, c] for (i, d), c in betti_table(res).items()],
            "complete": res.complete, "length": res.length}


def cmd_depth(args, inst, opts):
    M = inst.module(args.module)
    a, b = depth_ab(M), depth_ext(M)
    d = depth(M)
    result = {"module": args.module, "depth": d, "auslander_buchsbaum": a, "ext_route": b,
              "ring_depth": inst.ring.depth()}
    text = f"depth {args.module} = {d}"
    return EXIT_OK, result, text


def cmd_tor(args, inst, opts):
    M, N = inst.module(args.left), inst.module(args.right)
    top = args.index if args.index is not None else opts["bound"]
    res = free_resolution(M, top + 1)
    rows = []
    for i in range(0, top + 1):
        sq = tor_subquotient(M, N, i, res)
        rows.append({"i": i, "zero": sq.is_zero(), "hilbert": sq.hilbert_function(opts["dmax"])})
    v = is_tor_independent(M, N, opts["bound"])
    result = {"left": args.left, "right": args.right, "tor": rows, "verdict": v.to_dict()}
    lines = [f"Tor_{r['i']}({args.left},{args.right}) hilbert {r['hilbert']}" for r in rows]
    lines.append(f"Tor-independence: {v.status.value}"
                 + (f" (witness i = {v.witness[0]})" if v.witness else ""))
    return _STATUS_EXIT[v.status], result, "\n".join(lines)


def cmd_resolve(args, inst, opts):
    M = inst.module(args.module)
    length = args.length if args.length is not None else opts["bound"]
    res = free_resolution(M, length, over=args.over)
    shown = res.truncated(length)
    out = _betti(shown)
    out["module"] = args.module
    out["over"] = args.over
    if args.certify:
        out["certificate"] = res.certify()
    lines = [f"betti {out['betti']}", "complete" if out["complete"] else
             f"truncated at {shown.length}"]
    for r in out["rows"]:
        lines.append(" ".join(f"{c:3d}" for c in r))
    return EXIT_OK, out, "\n".join(lines)


def cmd_tensor(args, inst, opts):
    M, N = inst.module(args.left), inst.module(args.right)
    T = minimal_presentation(tensor_product(M, N))
    hf = T.hilbert_function(opts["dmax"])
    result = {"presentation": module_block(f"{args.left}_{args.right}", T), "hilbert": hf,
              "zero": T.is_zero()}
    if not T.is_zero():
        result["depth"] = depth(T)
    return EXIT_OK, result, result["presentation"] + f"\nhilbert {hf}"


def cmd_check_formula(args, inst, opts):
    M, N = inst.module(args.left), inst.module(args.right)
    rec = dc.depth_formula_defect(M, N, opts["bound"])
    v = rec.tor_verdict
    result = rec.to_dict()
    if v.fails:
        code, note = EXIT_FAILS, f"Fails: Tor_{v.witness[0]} != 0, formula not applicable"
    elif v.inconclusive:
        code, note = EXIT_INCONCLUSIVE, f"Inconclusive up to bound {v.bound}"
    elif rec.defect == 0:
        code, note = EXIT_OK, "Holds: defect 0"
    else:
        code, note = EXIT_FAILS, f"Fails: defect {rec.defect}"
    result["outcome"] = note
    text = (f"depths M={rec.depth_M} N={rec.depth_N} R={rec.depth_R} "
            f"M⊗N={rec.depth_MN} defect={rec.defect}\n{note}")
    return code, result, text


def cmd_reduce(args, inst, opts):
    M, N = inst.module(args.left), inst.module(args.right)
    if args.descend:
        steps = dc.descend_to_depth_one(M, N, opts["seed"], opts["bound"], opts["max_degree"])
    else:
        steps = [dc.reduce_pair(M, N, opts["seed"], opts["bound"], opts["max_degree"])]
    transcript = [s.to_dict() for s in steps]
    ok = all(s.verified for s in steps)
    lines = []
    for s in steps:
        lines.append(f"x = {s.ring_before.poly_str(s.element)}: "
                     + ", ".join(f"{k} {s.depths_before[k]}->{s.depths_after[k]}"
                                 for k in sorted(s.depths_before)))
    lines.append("verified" if ok else "postcondition failed")
    return (EXIT_OK if ok else EXIT_FAILS), {"steps": transcript, "verified": ok}, "\n".join(lines)


def cmd_suite(args, inst, opts):
    from .suite import default_families, run_lemma_suite

    extra = []
    if inst is not None:
        from .suite import Instance

        for k, (a, b) in enumerate(inst.pairs):
            extra.append(Instance("file", k, inst.ring, inst.module(a), inst.module(b),
                                  "file"))
    fams = [] if args.no_families else default_families(args.count, opts["seed"])
    checks = args.checks.split(",") if args.checks else None
    rep = run_lemma_suite(fams, checks, bound=opts["bound"] if args.bound is not None else None,
                          seed=opts["seed"], d_max=opts["dmax"],
                          max_degree=opts["max_degree"], instances=extra)
    if rep.failures:
        code = EXIT_FAILS
    elif rep.inconclusive:
        code = EXIT_INCONCLUSIVE
    else:
        code = EXIT_OK
    return code, rep.to_dict(), rep.to_text()


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="depthkit",
                                 description="Depth, Tor and resolutions over graded quotient rings.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, help="Tor truncation bound (default 2(n+1))")
    common.add_argument("--dmax", type=int, help="Hilbert function cutoff (default 12)")
    common.add_argument("--seed", type=int, help="random seed (default 0)")
    common.add_argument("--max-degree", dest="max_degree", type=int,
                        help="degree limit for regular-element search (default 3)")
    common.add_argument("--char", type=int, help="replace the characteristic of the file")
    common.add_argument("--format", choices=("text", "machine"), default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("depth", parents=[common])
    p.add_argument("file")
    p.add_argument("module")
    p.set_defaults(func=cmd_depth)

    for name, fn in (("tor", cmd_tor), ("tensor", cmd_tensor),
                     ("check-formula", cmd_check_formula), ("reduce", cmd_reduce)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("file")
        p.add_argument("left")
        p.add_argument("right")
        if name == "tor":
            p.add_argument("--index", type=int, help="compute Tor_0..Tor_index")
        if name == "reduce":
            p.add_argument("--descend", action="store_true",
                           help="descend a maximal Cohen-Macaulay pair to depth one")
        p.set_defaults(func=fn)

    p = sub.add_parser("resolve", parents=[common])
    p.add_argument("file")
    p.add_argument("module")
    p.add_argument("--length", type=int)
    p.add_argument("--over", choices=("R", "S"), default="R")
    p.add_argument("--certify", action="store_true")
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("suite", parents=[common])
    p.add_argument("file", nargs="?")
    p.add_argument("--count", type=int, default=4, help="instances per default family")
    p.add_argument("--checks", help="comma separated check names")
    p.add_argument("--no-families", action="store_true",
                   help="only run the pairs listed in the file")
    p.set_defaults(func=cmd_suite)
    return ap


def _emit(args, argv, code, result, text, opts, out):
    if args.format == "machine":
        doc = {"command": list(argv), "options": opts, "result": result, "exit_code": code}
        out.write(json.dumps(doc, sort_keys=True, indent=2, default=str, ensure_ascii=False))
        out.write("\n")
    else:
        out.write(text + "\n")


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    opts = {}
    try:
        inst = load_instance_file(args.file, args.char) if getattr(args, "file", None) else None
        opts = _options(args, inst)
        code, result, text = args.func(args, inst, opts)
    except (ParseError, GradingError, InputError, PreconditionError, DepthZeroWitness,
            NameError, OSError) as exc:
        code, result, text = EXIT_INPUT, {"error": type(exc).__name__, "message": str(exc)}, \
            f"error: {exc}"
    except RegularElementError as exc:
        code, result, text = EXIT_INCONCLUSIVE, {"error": type(exc).__name__,
                                                 "message": str(exc)}, f"inconclusive: {exc}"
    except DepthkitError as exc:
        code, result, text = EXIT_INPUT, {"error": type(exc).__name__, "message": str(exc)}, \
            f"error: {exc}"
    _emit(args, argv, code, result, text, opts, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
