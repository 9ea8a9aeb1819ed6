"""Command line runner for scenario files."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .expr import ExprError
from . import scenario as _scenario

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistcheck",
        description="verify twisted Jacobi / contact / groupoid structures "
        "declared in scenario files",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run the checks declared in a scenario")
    check.add_argument("scenario", help="path to a scenario JSON file")
    check.add_argument("--tol", type=float, default=1e-9,
                       help="default numeric tolerance (default 1e-9)")
    check.add_argument("--samples", type=int, default=None,
                       help="sample-point count for numeric fallbacks")
    check.add_argument("--seed", type=int, default=0,
                       help="seed for deterministic sample points (default 0)")
    check.add_argument("--json", dest="json_out", default=None,
                       help="write a JSON-lines machine report to this path")

    derive = sub.add_parser("derive", help="print a derived structure in scenario syntax")
    derive.add_argument("scenario", help="path to a scenario JSON file")
    derive.add_argument("object", help="structure name to derive from")
    derive.add_argument(
        "construction",
        help="one of: reeb, bivector, jacobi, poissonize, pair_groupoid, induced_base",
    )
    return parser


def _cmd_check(args) -> int:
    sc = _scenario.load(args.scenario)
    outcomes = _scenario.run(sc, tol=args.tol, samples=args.samples, seed=args.seed)
    for outcome in outcomes:
        status = "PASS" if outcome.passed else "FAIL"
        print(f"[{status}] {outcome.name}: {outcome.verdict}"
              f" (max residual {outcome.max_residual:.3e}, {outcome.ms:.1f} ms)")
        for line in outcome.lines:
            print(f"    {line}")
        for a in outcome.assumptions:
            print(f"    assumption: {a}")
    total = len(outcomes)
    failed = sum(1 for o in outcomes if not o.passed)
    print(f"{total - failed}/{total} checks passed")
    if args.json_out is not None:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            for outcome in outcomes:
                fh.write(json.dumps(outcome.machine_record(), sort_keys=True) + "\n")
    return 0 if failed == 0 else 1


def _cmd_derive(args) -> int:
    sc = _scenario.load(args.scenario)
    fragment = _scenario.derive(sc, args.object, args.construction)
    print(json.dumps(fragment, indent=2, sort_keys=True))
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "check":
            return _cmd_check(args)
        return _cmd_derive(args)
    except (ExprError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
