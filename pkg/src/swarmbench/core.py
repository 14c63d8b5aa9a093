"""Shared types for the optimizers: search boxes, objectives, seeded
random streams and convergence bookkeeping.

Positions are plain tuples of floats. Populations here are small (tens of
members, two or three coordinates) and the inner loops are scalar, so
pure-Python arithmetic is several times faster than dispatching to numpy
for every candidate.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

Vector = tuple[float, ...]


class SwarmError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(SwarmError, ValueError):
    pass


class ConfigurationError(SwarmError, ValueError):
    pass


class RangeError(SwarmError, ValueError):
    pass


class TraceOrderError(SwarmError, ValueError):
    pass


class NotFoundError(SwarmError, LookupError):
    pass


class NonFiniteObjectiveError(SwarmError, ArithmeticError):
    """An objective returned NaN or an infinity."""

    def __init__(self, name: str, point: Sequence[float], value: float):
        self.point = tuple(point)
        self.value = value
        super().__init__(f"objective {name!r} returned {value!r} at point {list(self.point)!r}")


@dataclass(frozen=True)
class SearchSpace:
    """Axis-aligned box ``lower[j] <= x[j] <= upper[j]``."""

    lower: Vector
    upper: Vector

    def __post_init__(self):
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        if len(lower) == 0:
            raise DimensionError("search space needs at least one dimension")
        if len(lower) != len(upper):
            raise DimensionError(f"bounds length mismatch: {len(lower)} lower vs {len(upper)} upper")
        for j, (lo, hi) in enumerate(zip(lower, upper)):
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise RangeError(f"bounds of dimension {j} must be finite")
            if not lo < hi:
                raise RangeError(f"dimension {j}: lower bound {lo} is not below upper bound {hi}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def uniform(cls, dims: int, low: float = -30.0, high: float = 30.0) -> "SearchSpace":
        if dims < 1:
            raise DimensionError(f"dims must be >= 1, got {dims}")
        return cls((low,) * dims, (high,) * dims)

    @property
    def dims(self) -> int:
        return len(self.lower)

    def contains(self, x: Sequence[float]) -> bool:
        return len(x) == self.dims and all(
            lo <= v <= hi for v, lo, hi in zip(x, self.lower, self.upper)
        )


@dataclass(frozen=True)
class ObjectiveSpec:
    """A named function to minimize.

    ``known_minimum`` is ``(value, location)`` when the global minimum is
    known analytically.
    """

    name: str
    dims: int
    func: Callable[[Sequence[float]], float] = field(repr=False)
    known_minimum: Optional[tuple[float, Vector]] = None

    def __call__(self, x: Sequence[float]) -> float:
        return self.func(x)


class RngStream(random.Random):
    """Seeded uniform stream consumed by the optimizers.

    A thin subclass of :class:`random.Random` (Mersenne Twister) that keeps
    its seed. The draw sequence is a pure function of the seed. Only
    ``random()`` (uniform on [0, 1)) and ``randrange()`` are used by the
    algorithms, so tests can substitute any object providing those two.
    """

    def __init__(self, seed: int):
        if not 0 <= seed < 2**64:
            raise RangeError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed_value = int(seed)
        super().__init__(self.seed_value)


def derive_seed(base_seed: int, repetition: int) -> int:
    """64-bit seed for one repetition of an experiment."""
    seq = np.random.SeedSequence([int(base_seed), int(repetition)])
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def evaluate(objective: Callable[[Sequence[float]], float], x: Sequence[float]) -> float:
    value = objective(x)
    if type(value) is not float:
        value = float(value)
    if not math.isfinite(value):
        raise NonFiniteObjectiveError(getattr(objective, "name", repr(objective)), x, value)
    return value


class CountingObjective:
    """Wraps an objective and counts calls; keeps ``name`` and ``dims``."""

    def __init__(self, objective):
        self.name = getattr(objective, "name", repr(objective))
        self.dims = getattr(objective, "dims", None)
        self._func = getattr(objective, "func", objective)
        self.calls = 0

    def __call__(self, x):
        self.calls += 1
        return self._func(x)


def random_point(space: SearchSpace, rng) -> Vector:
    """Uniform point in the box: ``lower + u * (upper - lower)`` per coordinate."""
    return tuple(lo + rng.random() * (hi - lo) for lo, hi in zip(space.lower, space.upper))


def clamp(x: Sequence[float], space: SearchSpace) -> Vector:
    """``min(upper, max(lower, x))`` per coordinate."""
    if len(x) != len(space.lower):
        raise DimensionError(f"point has {len(x)} coordinates, space has {space.dims}")
    return tuple(map(min, space.upper, map(max, space.lower, x)))


class ConvergenceTrace:
    """Best objective value seen so far, one entry per recorded iteration."""

    def __init__(self, entries: Sequence[tuple[int, float]] = ()):
        self.entries: list[tuple[int, float]] = []
        for iteration, value in entries:
            self.record(iteration, value)

    def record(self, iteration: int, candidate_best: float) -> "ConvergenceTrace":
        """Append ``(iteration, min(candidate_best, previous best))``."""
        if self.entries:
            last_iteration, last_best = self.entries[-1]
            if iteration <= last_iteration:
                raise TraceOrderError(
                    f"iteration {iteration} recorded after iteration {last_iteration}"
                )
            candidate_best = min(candidate_best, last_best)
        elif iteration < 0:
            raise TraceOrderError(f"iteration must be non-negative, got {iteration}")
        self.entries.append((int(iteration), float(candidate_best)))
        return self

    @property
    def best(self) -> float:
        if not self.entries:
            raise TraceOrderError("empty trace has no best value")
        return self.entries[-1][1]

    def value_at(self, iteration: int) -> float:
        """Best-so-far at ``iteration`` (the latest entry not after it)."""
        found = None
        for it, value in self.entries:
            if it > iteration:
                break
            found = value
        if found is None:
            raise RangeError(f"no trace entry at or before iteration {iteration}")
        return found

    def iterations(self) -> list[int]:
        return [it for it, _ in self.entries]

    def values(self) -> list[float]:
        return [v for _, v in self.entries]

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, ConvergenceTrace) and self.entries == other.entries

    def __repr__(self) -> str:
        return f"ConvergenceTrace({len(self.entries)} entries, best={self.entries[-1][1] if self.entries else None})"


@dataclass(frozen=True)
class RunResult:
    algorithm: str
    objective: str
    seed: int
    best_point: Vector
    best_value: float
    trace: ConvergenceTrace
    evaluations: int
    wall_time: Optional[float] = None
    # Algorithm-specific counters, e.g. ``{"scouts": 3}`` for ABC.
    info: dict = field(default_factory=dict)

    def to_dict(self, include_timing: bool = True) -> dict:
        return {
            "algorithm": self.algorithm,
            "objective": self.objective,
            "seed": self.seed,
            "best_point": list(self.best_point),
            "best_value": self.best_value,
            "trace": [[it, v] for it, v in self.trace.entries],
            "evaluations": self.evaluations,
            "wall_time": self.wall_time if include_timing else None,
            "info": dict(self.info),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunResult":
        return cls(
            algorithm=data["algorithm"],
            objective=data["objective"],
            seed=int(data["seed"]),
            best_point=tuple(float(v) for v in data["best_point"]),
            best_value=float(data["best_value"]),
            trace=ConvergenceTrace((int(it), float(v)) for it, v in data["trace"]),
            evaluations=int(data["evaluations"]),
            wall_time=data.get("wall_time"),
            info=dict(data.get("info", {})),
        )
