"""Command-line front end: ``cohomtools {decompose,nilcheck,verify-paper,dump-model}``.

Exit codes: 0 success, 1 bad arguments, 2 invariant failure, 3 a nilcheck
verdict is NotTransitive, 4 a verdict is Unknown.  ``verify-paper`` exits 0
iff every criterion passes.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

EXIT_OK, EXIT_ARGS, EXIT_INVARIANT = 0, 1, 2


class ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ArgumentError(message)


def _model_args(p, preset_required=True):
    p.add_argument("--preset", required=preset_required,
                   help="g2c-g2, sl3c-su3 or so-2-np2")
    p.add_argument("--n", type=int, default=None, help="n for so-2-np2")
    p.add_argument("--format", choices=("json", "text"), default="text")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="cohomtools", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("decompose", help="parabolic decomposition summary")
    _model_args(p)
    p.add_argument("--j", type=int, required=True)

    p = sub.add_parser("nilcheck", help="nilpotent-construction conditions for a subspace")
    _model_args(p)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--v", required=True,
                   help="full | root:<label> | kahler:<cos^2> | rows:<json> | tensor:e1f1,...")
    p.add_argument("--samples", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--frame", type=int, default=None,
                   help="test condition (i) inside the parabolic q_(j,l)")

    p = sub.add_parser("verify-paper", help="run the acceptance suite")
    _model_args(p, preset_required=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=32)

    p = sub.add_parser("dump-model", help="serialize a preset model as JSON")
    p.add_argument("--preset", required=True)
    p.add_argument("--n", type=int, default=None)
    return ap


def _model(args):
    from .liealg import build_model
    return build_model(args.preset, args.n)


def cmd_decompose(args, out) -> int:
    from .parabolic import parabolic_decomposition
    pd = parabolic_decomposition(_model(args), args.j)
    summary = pd.summary()
    if args.format == "json":
        from .liealg import SCHEMA_VERSION
        doc = {"schemaVersion": SCHEMA_VERSION, "model": pd.model.key, **summary}
        out.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        out.write(f"{pd.model.key}  j={pd.j}  Phi_j={summary['phi']}\n")
        for k, v in summary["dims"].items():
            out.write(f"  dim {k:4s} = {v}\n")
        for nu, dim in summary["gradation"].items():
            out.write(f"  level {nu}: dim {dim}  roots {summary['levelRoots'][nu]}\n")
    return EXIT_OK


def cmd_nilcheck(args, out) -> int:
    from .nilcons import nilpotent_construction_check, parse_subspace
    from .parabolic import parabolic_decomposition
    if args.samples < 1:
        raise ArgumentError("--samples must be positive")
    pd = parabolic_decomposition(_model(args), args.j)
    if args.frame is not None and args.frame not in pd.other_indices():
        raise ArgumentError(f"--frame must be one of {pd.other_indices()}")
    v = parse_subspace(pd, args.v)
    rep = nilpotent_construction_check(pd, v, samples=args.samples, seed=args.seed,
                                       frame=args.frame)
    if args.format == "json":
        out.write(rep.dumps() + "\n")
    else:
        out.write(f"{rep.preset}  j={rep.j}  dim v={v.dim}\n")
        out.write(f"  condition (i):  {rep.condition_i.value.value} ({rep.condition_i.evidence})\n")
        out.write(f"  condition (ii): {rep.condition_ii.value.value} ({rep.condition_ii.evidence})\n")
        out.write(f"  singular orbit dim: {rep.singular_orbit_dim}\n")
        out.write(f"  V_l membership: {rep.vl_membership}\n")
        if rep.hint:
            out.write(f"  hint: {rep.hint}\n")
    return rep.exit_code


def cmd_verify(args, out) -> int:
    from .verify import run_suite, suite_json
    if args.preset is None and args.n is not None:
        raise ArgumentError("--n needs --preset so-2-np2")
    results = run_suite(seed=args.seed, preset=args.preset, n=args.n, samples=args.samples)
    if args.format == "json":
        out.write(suite_json(results, args.seed) + "\n")
    else:
        for r in results:
            out.write(r.line() + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_INVARIANT


def cmd_dump_model(args, out) -> int:
    out.write(_model(args).dumps() + "\n")
    return EXIT_OK


COMMANDS = {"decompose": cmd_decompose, "nilcheck": cmd_nilcheck,
            "verify-paper": cmd_verify, "dump-model": cmd_dump_model}


def main(argv: Optional[List[str]] = None, out=None) -> int:
    from .liealg import InvariantError
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except ArgumentError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ARGS
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except InvariantError as exc:
        sys.stderr.write(f"invariant failure: {exc}\n")
        return EXIT_INVARIANT
    except (ArgumentError, ValueError, KeyError, TypeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ARGS


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
