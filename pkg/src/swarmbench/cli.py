"""Command-line driver.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .benchfns import DEFAULT_REGISTRY, FunctionRegistry
from .bees import AbcConfig
from .core import SwarmError
from .firefly import FaConfig
from .harness import (
    ExperimentPlan,
    compare,
    default_checkpoints,
    emit_plot_data,
    export,
    load_report,
    plot_series,
    run_experiment,
)

OUT_DIR_ENV = "SWARMBENCH_OUT_DIR"
DEFAULT_OUT_DIR = "results"


class UsageError(Exception):
    pass


def _bounds(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"lower bound must be below upper bound, got {text!r}")
    return lo, hi


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swarmbench",
        description="Artificial Bee Colony and Firefly experiments on benchmark functions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a multi-seed experiment and write a report")
    run.add_argument("--algorithm", choices=["abc", "fa"])
    run.add_argument("--plan", type=Path, help="JSON plan file (same schema as a report's plan)")
    run.add_argument("--function", default="rastrigin")
    run.add_argument("--dims", type=int, default=2)
    run.add_argument("--iterations", type=int, default=100)
    run.add_argument("--population", type=int, default=50,
                     help="food sources for abc, fireflies for fa")
    run.add_argument("--seed", type=int, default=0, help="base seed of the experiment")
    run.add_argument("--reps", type=int, default=30)
    run.add_argument("--checkpoints", type=_int_list,
                     help="comma-separated iterations (default: 20,40,60,80,100 scaled to --iterations)")
    run.add_argument("--bounds", type=_bounds, default=(-30.0, 30.0), metavar="LO:HI")
    run.add_argument("--limit", type=int, help="abc abandonment limit (default population*dims)")
    run.add_argument("--alpha", type=float, default=0.5)
    run.add_argument("--beta0", type=float, default=1.0)
    run.add_argument("--gamma", type=float, default=1.0)
    run.add_argument("--exponent-power", type=int, choices=[1, 2], default=2)
    run.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    run.add_argument("--format", choices=["csv", "json"], default="json")
    run.add_argument("--out", type=Path,
                     help=f"output file (default: ${OUT_DIR_ENV} or ./{DEFAULT_OUT_DIR}/<auto name>)")
    run.add_argument("--timing", action="store_true", help="include wall-clock times in the report")

    cmp_ = sub.add_parser("compare", help="tabulate two JSON reports side by side")
    cmp_.add_argument("reports", nargs=2, type=Path)

    trace = sub.add_parser("trace", help="write median convergence series of JSON reports")
    trace.add_argument("reports", nargs="+", type=Path)
    trace.add_argument("--out", type=Path, help="CSV destination (default: standard output)")

    sub.add_parser("list-functions", help="list registered objective functions")
    return parser


def plan_from_args(args, registry: FunctionRegistry) -> ExperimentPlan:
    if args.plan is not None:
        if args.algorithm is not None:
            raise UsageError("--plan and --algorithm are mutually exclusive")
        return load_plan(args.plan)
    if args.algorithm is None:
        raise UsageError("--algorithm is required unless --plan is given")
    try:
        return _plan_from_flags(args, registry)
    except SwarmError as exc:
        raise UsageError(str(exc)) from exc


def _plan_from_flags(args, registry: FunctionRegistry) -> ExperimentPlan:
    if args.function not in registry:
        raise UsageError(f"unknown function {args.function!r}; registered functions: "
                         f"{', '.join(registry.names())}")
    if args.dims < 1:
        raise UsageError(f"--dims must be >= 1, got {args.dims}")
    if args.algorithm == "abc":
        config = AbcConfig(colony_size=args.population, limit=args.limit,
                           max_iterations=args.iterations)
    else:
        config = FaConfig(population=args.population, alpha=args.alpha, beta0=args.beta0,
                          gamma=args.gamma, max_iterations=args.iterations,
                          exponent_power=args.exponent_power)
    lo, hi = args.bounds
    return ExperimentPlan(
        algorithm=args.algorithm,
        config=config,
        objective=args.function,
        dims=args.dims,
        lower=(lo,) * args.dims,
        upper=(hi,) * args.dims,
        repetitions=args.reps,
        base_seed=args.seed,
        checkpoints=args.checkpoints or default_checkpoints(args.iterations),
    )


def load_plan(path: Path) -> ExperimentPlan:
    data = json.loads(path.read_text(encoding="utf-8"))
    # Accept either a bare plan or a full report.
    return ExperimentPlan.from_dict(data.get("plan", data))


def plan_header(plan: ExperimentPlan) -> str:
    cfg = plan.config
    if plan.algorithm == "abc":
        params = (f"colony_size={cfg.colony_size} limit={cfg.resolved_limit(plan.dims)}"
                  f"{'' if cfg.limit is not None else ' (default population*dims)'}")
    else:
        params = (f"population={cfg.population} alpha={cfg.alpha} beta0={cfg.beta0} "
                  f"gamma={cfg.gamma} exponent_power={cfg.exponent_power}")
    bounds = (f"[{plan.lower[0]}, {plan.upper[0]}]"
              if len(set(plan.lower)) == 1 and len(set(plan.upper)) == 1
              else f"lower={list(plan.lower)} upper={list(plan.upper)}")
    return (f"# {plan.algorithm} on {plan.objective} ({plan.dims}-D), bounds {bounds}\n"
            f"# {params} iterations={cfg.max_iterations}\n"
            f"# reps={plan.repetitions} base_seed={plan.base_seed} "
            f"checkpoints={','.join(map(str, plan.checkpoints))}")


def summary_table(report) -> str:
    header = f"{'checkpoint':>10} {'min':>14} {'median':>14} {'mean':>14} {'std':>14}"
    lines = [header]
    for s in report.checkpoint_stats:
        lines.append(f"{s.checkpoint:>10} {s.min:>14.6g} {s.median:>14.6g} {s.mean:>14.6g} {s.std:>14.6g}")
    return "\n".join(lines)


def default_out(plan: ExperimentPlan, fmt: str) -> Path:
    out_dir = Path(os.environ.get(OUT_DIR_ENV) or DEFAULT_OUT_DIR)
    return out_dir / f"{plan.algorithm}_{plan.objective}_{plan.dims}d_seed{plan.base_seed}.{fmt}"


def cmd_run(args, registry: FunctionRegistry) -> int:
    plan = plan_from_args(args, registry)
    print(plan_header(plan))
    report = run_experiment(plan, registry=registry, workers=args.workers)
    out = args.out or default_out(plan, args.format)
    written = export(report, args.format, out, include_timing=args.timing)
    print(summary_table(report))
    print(f"# evaluations={report.total_evaluations}")
    for path in written:
        print(f"# wrote {path}")
    return 0


def cmd_compare(args) -> int:
    a, b = (load_report(p) for p in args.reports)
    print(compare(a, b).format())
    return 0


def cmd_trace(args) -> int:
    reports = [load_report(p) for p in args.reports]
    if args.out is not None:
        print(f"# wrote {emit_plot_data(reports, args.out)}")
        return 0
    header, rows = plot_series(reports)
    print(",".join(header))
    for row in rows:
        print(",".join([str(row[0]), *(repr(v) for v in row[1:])]))
    return 0


def cmd_list_functions(registry: FunctionRegistry) -> int:
    print(f"{'name':<12} {'dims':<8} known minimum")
    for entry in registry.entries():
        if entry.minimum_value is None:
            known = "unknown"
        elif entry.minimum_location is None:
            known = f"{entry.minimum_value:g}"
        else:
            location = entry.minimum_location(entry.min_dims)
            where = "origin" if not any(location) else f"{list(location)}"
            known = f"{entry.minimum_value:g} at {where}"
        print(f"{entry.name:<12} {entry.dims_label():<8} {known}")
    return 0


def main(argv: Optional[Sequence[str]] = None, registry: Optional[FunctionRegistry] = None) -> int:
    registry = DEFAULT_REGISTRY if registry is None else DEFAULT_REGISTRY.merged(registry)
    parser = build_parser()
    # argparse exits with status 2 on bad flags.
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args, registry)
        if args.command == "compare":
            return cmd_compare(args)
        if args.command == "trace":
            return cmd_trace(args)
        return cmd_list_functions(registry)
    except UsageError as exc:
        parser.error(str(exc))
    except (SwarmError, OSError, KeyError, ValueError) as exc:
        print(f"swarmbench: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
