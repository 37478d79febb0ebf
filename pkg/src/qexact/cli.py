"""Command line entry points: campaigns, schedule report, backend validation.

Exit codes: 0 success, 2 backend-validation failure, 1 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import harness
from .harness import VALIDATE_HEADER, CampaignConfig, write_csv


def parse_int_range(spec: str) -> tuple[int, ...]:
    """"4..8" -> (4,5,6,7,8); "4,6" -> (4,6); "5" -> (5,)."""
    if ".." in spec:
        lo, hi = spec.split("..")
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(t) for t in spec.split(","))


def _add_common(p: argparse.ArgumentParser, default_repeats: int) -> None:
    p.add_argument("--functions", type=int, default=16, help="target functions per grid cell")
    p.add_argument("--repeats", type=int, default=None,
                   help=f"training repeats per function (default {default_repeats})")
    p.add_argument("--seed", type=int, default=1, help="base seed for the whole campaign")
    p.add_argument("--out", type=Path, required=True, help="output directory for runs.csv/phases.csv")
    p.add_argument("--phase-cap", type=int, default=None, help="update-phase guard (default 10*n)")
    p.add_argument("--paper-scale", action="store_true",
                   help="restore the full-size repeat counts of the reference experiments")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qexact")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn-generic", help="train on random Boolean functions")
    p.add_argument("--n", default="4..6", help="input dimensions, e.g. 4..8")
    p.add_argument("--m0", default="0,1,2,3,4", help="rotation indices to sweep")
    p.add_argument("--no-naive", action="store_true", help="skip the naive baseline runs")
    _add_common(p, default_repeats=10)

    p = sub.add_parser("learn-junta", help="train on random positive k-juntas")
    p.add_argument("--n", default="5..6", help="input dimensions, e.g. 5..8")
    p.add_argument("--k", default="2..n-1", help="junta arities, e.g. 2..n-1")
    _add_common(p, default_repeats=10)

    p = sub.add_parser("schedule", help="emit the per-stage and total sample-count report")
    p.add_argument("--n", default="4..20")
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("validate", help="compare the analytic and dense backends")
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--pairs", type=int, default=5, help="random (target, hypothesis) pairs per cell")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("figures", help="emit figure-data CSVs from campaign output")
    p.add_argument("--in", dest="in_dir", type=Path, default=None,
                   help="campaign directory holding runs.csv (omit for schedule-only figures)")
    p.add_argument("--out", type=Path, required=True)
    return parser


def _cmd_learn(args: argparse.Namespace, mode: str) -> int:
    repeats = args.repeats
    if repeats is None:
        repeats = (50 if mode == "generic" else 25) if args.paper_scale else 10
    cfg = CampaignConfig(
        mode=mode,
        n_values=parse_int_range(args.n),
        m0_values=parse_int_range(args.m0) if mode == "generic" else (2,),
        k_spec=args.k if mode == "junta" else "",
        functions_per_cell=args.functions,
        repeats_per_function=repeats,
        base_seed=args.seed,
        phase_cap=args.phase_cap,
        out_dir=args.out,
        include_naive=(mode == "generic" and not args.no_naive),
    )
    records = harness.run_campaign(cfg)
    converged = sum(1 for r in records if r.terminated == "converged")
    exact = sum(1 for r in records if r.final_error_rate == 0.0)
    print(f"{len(records)} runs -> {args.out} (converged {converged}, exact {exact})")
    return 0


def _cmd_schedule(args: argparse.Namespace) -> int:
    stage_rows, total_rows = harness.schedule_report_rows(parse_int_range(args.n))
    write_csv(args.out / "schedule_stages.csv", ["n", "variant", "m", "shots"], stage_rows)
    write_csv(args.out / "schedule_totals.csv",
               ["n", "variant", "total", "naive_total", "ratio"], total_rows)
    print(f"schedule report -> {args.out}")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    rows = harness.backend_validation_rows(args.n_max, args.pairs, args.seed)
    write_csv(args.out / "validate.csv", VALIDATE_HEADER, rows)
    worst_joint = max((r[5] for r in rows if r[6] == harness.JOINT_STATE), default=0.0)
    worst_literal = max((r[5] for r in rows if r[6] == harness.PAPER_LITERAL), default=0.0)
    print(f"validate -> {args.out} (worst joint_state TV {worst_joint:.3e}, "
          f"worst paper_literal TV {worst_literal:.3e})")
    if not harness.validation_passed(rows):
        print("FAIL: joint_state TV distance above gate", file=sys.stderr)
        return 2
    return 0


def _cmd_figures(args: argparse.Namespace) -> int:
    written = harness.reproduce_figures(args.in_dir, args.out)
    print(f"figure data -> {', '.join(str(p) for p in written.values())}")
    if args.in_dir is None:
        print("note: no --in directory given; campaign-derived figures skipped")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "learn-generic":
            return _cmd_learn(args, "generic")
        if args.command == "learn-junta":
            return _cmd_learn(args, "junta")
        if args.command == "schedule":
            return _cmd_schedule(args)
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "figures":
            return _cmd_figures(args)
        raise AssertionError(f"unhandled command {args.command}")
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
