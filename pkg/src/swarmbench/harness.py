"""Multi-seed experiments, checkpoint statistics, comparison tables and
file export.

A report is a pure function of its plan apart from wall-clock timings,
which are kept in memory but left out of exports unless asked for.
"""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .benchfns import DEFAULT_REGISTRY, FunctionRegistry
from .bees import AbcConfig, run_abc
from .core import (
    ConfigurationError,
    RunResult,
    SearchSpace,
    SwarmError,
    derive_seed,
)
from .firefly import FaConfig, run_fa

REPORT_SCHEMA = "swarmbench-report/1"
DEFAULT_CHECKPOINTS = (20, 40, 60, 80, 100)
ALGORITHMS = {"abc": (AbcConfig, run_abc), "fa": (FaConfig, run_fa)}

Config = Union[AbcConfig, FaConfig]


class IncompatibleReportsError(SwarmError, ValueError):
    pass


class ExportError(SwarmError, OSError):
    pass


def default_checkpoints(max_iterations: int) -> tuple[int, ...]:
    """Five evenly spaced checkpoints ending at ``max_iterations``."""
    if max_iterations == 100:
        return DEFAULT_CHECKPOINTS
    points = sorted({round(max_iterations * k / 5) for k in range(1, 6)})
    return tuple(p for p in points if p > 0) or (max_iterations,)


def config_from_dict(algorithm: str, data: dict) -> Config:
    try:
        config_cls = ALGORITHMS[algorithm][0]
    except KeyError:
        raise ConfigurationError(f"unknown algorithm {algorithm!r}; expected one of {sorted(ALGORITHMS)}") from None
    try:
        return config_cls(**data)
    except TypeError as exc:
        raise ConfigurationError(f"bad {algorithm} config: {exc}") from None


@dataclass(frozen=True)
class ExperimentPlan:
    algorithm: str
    config: Config
    objective: str = "rastrigin"
    dims: int = 2
    lower: Optional[tuple[float, ...]] = None
    upper: Optional[tuple[float, ...]] = None
    repetitions: int = 30
    base_seed: int = 0
    checkpoints: tuple[int, ...] = DEFAULT_CHECKPOINTS

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigurationError(f"unknown algorithm {self.algorithm!r}; expected one of {sorted(ALGORITHMS)}")
        if not isinstance(self.config, ALGORITHMS[self.algorithm][0]):
            raise ConfigurationError(f"{self.algorithm} plan needs a {ALGORITHMS[self.algorithm][0].__name__}")
        if self.lower is None:
            object.__setattr__(self, "lower", (-30.0,) * self.dims)
        if self.upper is None:
            object.__setattr__(self, "upper", (30.0,) * self.dims)
        object.__setattr__(self, "lower", tuple(float(v) for v in self.lower))
        object.__setattr__(self, "upper", tuple(float(v) for v in self.upper))
        object.__setattr__(self, "checkpoints", tuple(int(c) for c in self.checkpoints))
        # Validates the bounds.
        space = self.space()
        if space.dims != self.dims:
            raise ConfigurationError(f"bounds describe {space.dims} dims but plan says {self.dims}")
        if self.repetitions < 1:
            raise ConfigurationError(f"repetitions must be >= 1, got {self.repetitions}")
        if not 0 <= self.base_seed < 2**64:
            raise ConfigurationError(f"base_seed must be a 64-bit unsigned integer, got {self.base_seed}")
        cps = self.checkpoints
        if not cps:
            raise ConfigurationError("at least one checkpoint is required")
        if any(b <= a for a, b in zip(cps, cps[1:])):
            raise ConfigurationError(f"checkpoints must be strictly increasing, got {list(cps)}")
        if cps[0] < 0 or cps[-1] > self.config.max_iterations:
            raise ConfigurationError(
                f"checkpoints must lie in [0, {self.config.max_iterations}], got {list(cps)}"
            )

    def space(self) -> SearchSpace:
        return SearchSpace(self.lower, self.upper)

    @property
    def max_iterations(self) -> int:
        return self.config.max_iterations

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "config": self.config.to_dict(),
            "objective": self.objective,
            "dims": self.dims,
            "lower": list(self.lower),
            "upper": list(self.upper),
            "repetitions": self.repetitions,
            "base_seed": self.base_seed,
            "checkpoints": list(self.checkpoints),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentPlan":
        algorithm = data["algorithm"]
        return cls(
            algorithm=algorithm,
            config=config_from_dict(algorithm, data.get("config", {})),
            objective=data.get("objective", "rastrigin"),
            dims=int(data.get("dims", 2)),
            lower=data.get("lower"),
            upper=data.get("upper"),
            repetitions=int(data.get("repetitions", 30)),
            base_seed=int(data.get("base_seed", 0)),
            checkpoints=tuple(data.get("checkpoints", DEFAULT_CHECKPOINTS)),
        )


@dataclass(frozen=True)
class CheckpointStats:
    checkpoint: int
    min: float
    median: float
    mean: float
    std: float

    def to_dict(self) -> dict:
        return {"checkpoint": self.checkpoint, "min": self.min, "median": self.median,
                "mean": self.mean, "std": self.std}


def checkpoint_statistics(runs: Sequence[RunResult], checkpoints: Sequence[int]) -> tuple[CheckpointStats, ...]:
    """Order statistics of best-so-far across runs at each checkpoint.

    ``std`` is the population standard deviation, so one run gives 0.
    """
    stats = []
    for cp in checkpoints:
        values = np.array([r.trace.value_at(cp) for r in runs], dtype=float)
        stats.append(CheckpointStats(
            checkpoint=int(cp),
            min=float(values.min()),
            median=float(np.median(values)),
            mean=float(values.mean()),
            std=float(values.std()),
        ))
    return tuple(stats)


@dataclass(frozen=True)
class ExperimentReport:
    plan: ExperimentPlan
    runs: tuple[RunResult, ...]
    checkpoint_stats: tuple[CheckpointStats, ...]
    total_evaluations: int
    total_wall_time: Optional[float] = None

    @property
    def label(self) -> str:
        return self.plan.algorithm

    def medians(self) -> list[float]:
        return [s.median for s in self.checkpoint_stats]

    def median_series(self) -> list[tuple[int, float]]:
        """Median best-so-far across runs at every iteration 0..max_iterations."""
        matrix = np.array([r.trace.values() for r in self.runs], dtype=float)
        iterations = self.runs[0].trace.iterations()
        return [(it, float(v)) for it, v in zip(iterations, np.median(matrix, axis=0))]

    def to_dict(self, include_timing: bool = False) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "plan": self.plan.to_dict(),
            "runs": [r.to_dict(include_timing) for r in self.runs],
            "checkpoint_stats": [s.to_dict() for s in self.checkpoint_stats],
            "total_evaluations": self.total_evaluations,
            "total_wall_time": self.total_wall_time if include_timing else None,
        }

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentReport":
        if data.get("schema", REPORT_SCHEMA) != REPORT_SCHEMA:
            raise ConfigurationError(f"unsupported report schema {data.get('schema')!r}")
        return cls(
            plan=ExperimentPlan.from_dict(data["plan"]),
            runs=tuple(RunResult.from_dict(r) for r in data["runs"]),
            checkpoint_stats=tuple(CheckpointStats(**s) for s in data["checkpoint_stats"]),
            total_evaluations=int(data["total_evaluations"]),
            total_wall_time=data.get("total_wall_time"),
        )


def _run_one(plan: ExperimentPlan, repetition: int, registry: FunctionRegistry) -> RunResult:
    objective = registry.lookup(plan.objective, plan.dims)
    runner = ALGORITHMS[plan.algorithm][1]
    return runner(plan.config, objective, plan.space(), derive_seed(plan.base_seed, repetition))


def run_experiment(plan: ExperimentPlan, registry: Optional[FunctionRegistry] = None,
                   workers: int = 1) -> ExperimentReport:
    """Run every repetition of ``plan`` and aggregate checkpoint statistics.

    Repetition ``k`` is seeded with ``derive_seed(plan.base_seed, k)``, so
    results do not depend on ``workers``. With ``workers > 1`` the registry
    must be picklable (module-level functions, no lambdas).
    """
    registry = registry or DEFAULT_REGISTRY
    # Fail fast on a bad name before spawning anything.
    registry.lookup(plan.objective, plan.dims)
    start = time.perf_counter()
    reps = range(plan.repetitions)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            runs = tuple(pool.map(_run_one, [plan] * len(reps), reps, [registry] * len(reps)))
    else:
        runs = tuple(_run_one(plan, k, registry) for k in reps)
    return ExperimentReport(
        plan=plan,
        runs=runs,
        checkpoint_stats=checkpoint_statistics(runs, plan.checkpoints),
        total_evaluations=sum(r.evaluations for r in runs),
        total_wall_time=time.perf_counter() - start,
    )


@dataclass(frozen=True)
class ComparisonTable:
    """Median best-so-far per checkpoint, one row per report.

    ``winners[c]`` is the label with the strictly lower median at
    checkpoint ``c``, or None on a tie.
    """

    objective: str
    dims: int
    checkpoints: tuple[int, ...]
    rows: tuple[tuple[str, tuple[float, ...]], ...]
    winners: tuple[Optional[str], ...] = field(default=())

    def format(self, precision: int = 4) -> str:
        width = max(10, precision + 8)
        name_width = max(9, *(len(label) for label, _ in self.rows))
        lines = [f"{self.objective} ({self.dims}-D), median best-so-far",
                 "Algorithm".ljust(name_width) + "".join(str(c).rjust(width) for c in self.checkpoints)]
        for label, cells in self.rows:
            lines.append(label.ljust(name_width) + "".join(f"{v:.{precision}g}".rjust(width) for v in cells))
        lines.append("winner".ljust(name_width) + "".join((w or "tie").rjust(width) for w in self.winners))
        return "\n".join(lines)


def _check_compatible(a: ExperimentReport, b: ExperimentReport) -> None:
    pa, pb = a.plan, b.plan
    for name, va, vb in (("objective", pa.objective, pb.objective), ("dims", pa.dims, pb.dims),
                         ("checkpoints", list(pa.checkpoints), list(pb.checkpoints))):
        if va != vb:
            raise IncompatibleReportsError(f"reports differ in {name}: {va!r} vs {vb!r}")


def compare(a: ExperimentReport, b: ExperimentReport) -> ComparisonTable:
    _check_compatible(a, b)
    label_a, label_b = a.label, b.label
    if label_a == label_b:
        label_b = f"{label_b} (2)"
    ma, mb = a.medians(), b.medians()
    winners = tuple(label_a if x < y else label_b if y < x else None for x, y in zip(ma, mb))
    return ComparisonTable(
        objective=a.plan.objective,
        dims=a.plan.dims,
        checkpoints=a.plan.checkpoints,
        rows=((label_a, tuple(ma)), (label_b, tuple(mb))),
        winners=winners,
    )


def summary_rows(report: ExperimentReport) -> list[list]:
    return [[s.checkpoint, s.min, s.median, s.mean, s.std] for s in report.checkpoint_stats]


def summary_path(destination: Path) -> Path:
    return destination.with_name(f"{destination.stem}_summary{destination.suffix or '.csv'}")


def _open_for_write(path: Path):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        return path.open("w", newline="", encoding="utf-8")
    except OSError as exc:
        raise ExportError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc


def export(report: ExperimentReport, fmt: str, destination: Union[str, Path],
           include_timing: bool = False) -> list[Path]:
    """Write ``report`` and return the paths written.

    ``json`` writes one document. ``csv`` writes the traces
    (``iteration,run_seed,best_so_far``) to ``destination`` and the
    checkpoint summary (``checkpoint,min,median,mean,std``) next to it as
    ``<stem>_summary.csv``.
    """
    destination = Path(destination)
    if fmt == "json":
        with _open_for_write(destination) as fh:
            fh.write(report.to_json(include_timing))
        return [destination]
    if fmt != "csv":
        raise ConfigurationError(f"unknown export format {fmt!r}; expected csv or json")
    with _open_for_write(destination) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["iteration", "run_seed", "best_so_far"])
        for run in report.runs:
            for iteration, value in run.trace.entries:
                writer.writerow([iteration, run.seed, repr(value)])
    summary = summary_path(destination)
    with _open_for_write(summary) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["checkpoint", "min", "median", "mean", "std"])
        for row in summary_rows(report):
            writer.writerow([row[0], *(repr(v) for v in row[1:])])
    return [destination, summary]


def load_report(path: Union[str, Path]) -> ExperimentReport:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ExportError(exc.errno, f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path} is not valid JSON: {exc}") from exc
    return ExperimentReport.from_dict(data)


def plot_series(reports: Sequence[ExperimentReport]) -> tuple[list[str], list[list]]:
    """Header and rows of ``iteration,<label>...`` median best-so-far."""
    if not reports or any(not r.runs for r in reports):
        raise ConfigurationError("plot data needs at least one report with at least one run")
    labels: list[str] = []
    for r in reports:
        label, n = r.label, 2
        while label in labels:
            label, n = f"{r.label}_{n}", n + 1
        labels.append(label)
    series = [r.median_series() for r in reports]
    iterations = [it for it, _ in series[0]]
    for s in series[1:]:
        if [it for it, _ in s] != iterations:
            raise IncompatibleReportsError("reports have different iteration ranges")
    rows = [[it, *(s[k][1] for s in series)] for k, it in enumerate(iterations)]
    return ["iteration", *labels], rows


def emit_plot_data(reports: Union[ExperimentReport, Sequence[ExperimentReport]],
                   destination: Union[str, Path]) -> Path:
    """Write per-iteration median best-so-far as CSV, one column per report."""
    if isinstance(reports, ExperimentReport):
        reports = [reports]
    header, rows = plot_series(reports)
    destination = Path(destination)
    with _open_for_write(destination) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([row[0], *(repr(v) for v in row[1:])])
    return destination
