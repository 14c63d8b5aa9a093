"""Artificial Bee Colony optimizer.

Every food source is visited once by an employed bee and ``colony_size``
onlooker visits are spread over sources by fitness-proportionate roulette.
Each visit perturbs a single coordinate toward or away from a random
partner source and keeps the result only if its fitness is strictly
higher. A source that fails more than ``limit`` times in a row is
abandoned and re-sampled uniformly, at most one per iteration.
"""

from __future__ import annotations

import math
import time
from bisect import bisect_right
from dataclasses import dataclass
from itertools import accumulate
from typing import Optional, Sequence

from .core import (
    ConfigurationError,
    ConvergenceTrace,
    CountingObjective,
    DimensionError,
    NonFiniteObjectiveError,
    RngStream,
    RunResult,
    SearchSpace,
    SwarmError,
    Vector,
    clamp,
    evaluate,
    random_point,
)


class InvariantViolation(SwarmError, ValueError):
    pass


def fitness_transform(f: float) -> float:
    """Map an objective value to a positive weight, decreasing in ``f``.

    ``1 / (1 + f)`` for ``f >= 0`` and ``1 + |f|`` otherwise.
    """
    if not math.isfinite(f):
        raise NonFiniteObjectiveError("fitness_transform", (), f)
    if f >= 0:
        return 1.0 / (1.0 + f)
    return 1.0 + abs(f)


@dataclass
class FoodSource:
    position: Vector
    value: float
    fitness: float
    trials: int = 0

    @classmethod
    def at(cls, position: Vector, value: float) -> "FoodSource":
        return cls(position, value, fitness_transform(value), 0)


@dataclass(frozen=True)
class AbcConfig:
    """ABC parameters.

    ``limit=None`` means ``colony_size * dims``, resolved at run time.
    """

    colony_size: int = 50
    limit: Optional[int] = None
    max_iterations: int = 100

    def __post_init__(self):
        if self.colony_size < 2:
            raise ConfigurationError(f"colony_size must be >= 2, got {self.colony_size}")
        if self.limit is not None and self.limit < 1:
            raise ConfigurationError(f"limit must be >= 1, got {self.limit}")
        if self.max_iterations < 0:
            raise ConfigurationError(f"max_iterations must be >= 0, got {self.max_iterations}")

    def resolved_limit(self, dims: int) -> int:
        return self.limit if self.limit is not None else self.colony_size * dims

    def to_dict(self) -> dict:
        return {"colony_size": self.colony_size, "limit": self.limit,
                "max_iterations": self.max_iterations}


def neighbor(sources: Sequence[FoodSource], i: int, rng, space: SearchSpace) -> Vector:
    """Candidate ``v`` equal to ``x_i`` except in one random coordinate ``j``:
    ``v_j = x_ij + phi * (x_ij - x_kj)`` with partner ``k != i`` and
    ``phi ~ U[-1, 1)``, clamped to the box."""
    n = len(sources)
    if n < 2:
        raise ConfigurationError("neighbor search needs at least two food sources")
    x = sources[i].position
    j = rng.randrange(len(x))
    k = rng.randrange(n - 1)
    if k >= i:
        k += 1
    phi = 2.0 * rng.random() - 1.0
    v = list(x)
    v[j] = x[j] + phi * (x[j] - sources[k].position[j])
    return clamp(v, space)


def _try_improve(sources: list[FoodSource], i: int, objective, rng, space: SearchSpace) -> None:
    candidate = neighbor(sources, i, rng, space)
    value = evaluate(objective, candidate)
    fit = fitness_transform(value)
    source = sources[i]
    # Ties keep the incumbent.
    if fit > source.fitness:
        sources[i] = FoodSource(candidate, value, fit, 0)
    else:
        source.trials += 1


def employed_phase(sources: list[FoodSource], objective, rng, space: SearchSpace) -> list[FoodSource]:
    """One greedy neighbor trial per source, in index order. Mutates and
    returns ``sources``."""
    for i in range(len(sources)):
        _try_improve(sources, i, objective, rng, space)
    return sources


def selection_probabilities(sources: Sequence[FoodSource]) -> list[float]:
    fits = [s.fitness for s in sources]
    if not fits:
        raise InvariantViolation("no food sources")
    for i, f in enumerate(fits):
        if not f > 0:
            raise InvariantViolation(f"food source {i} has non-positive fitness {f}")
    total = math.fsum(fits)
    return [f / total for f in fits]


def roulette_select(probabilities: Sequence[float], rng) -> int:
    """Invert the cumulative distribution at one uniform draw in [0, 1).

    The last bucket absorbs any rounding shortfall in the cumulative sum.
    """
    cumulative = list(accumulate(probabilities))
    return min(bisect_right(cumulative, rng.random()), len(cumulative) - 1)


def onlooker_phase(sources: list[FoodSource], objective, rng, space: SearchSpace) -> list[FoodSource]:
    """``len(sources)`` roulette-selected greedy trials.

    Probabilities are computed once from the fitnesses at the start of the
    phase, matching the usual ABC bookkeeping.
    """
    cumulative = list(accumulate(selection_probabilities(sources)))
    last = len(cumulative) - 1
    for _ in range(len(sources)):
        i = min(bisect_right(cumulative, rng.random()), last)
        _try_improve(sources, i, objective, rng, space)
    return sources


def scout_phase(sources: list[FoodSource], objective, rng, space: SearchSpace,
                limit: int) -> Optional[int]:
    """Abandon at most one exhausted source (``trials > limit``).

    The source with the most trials goes first, lowest index on ties. It is
    replaced by a uniform random point. Returns the scouted index or None.
    """
    if limit < 1:
        raise ConfigurationError(f"limit must be >= 1, got {limit}")
    chosen = None
    for i, s in enumerate(sources):
        if s.trials > limit and (chosen is None or s.trials > sources[chosen].trials):
            chosen = i
    if chosen is None:
        return None
    position = random_point(space, rng)
    sources[chosen] = FoodSource.at(position, evaluate(objective, position))
    return chosen


def _best(sources: Sequence[FoodSource]) -> FoodSource:
    best = sources[0]
    for s in sources:
        if s.value < best.value:
            best = s
    return best


def run_abc(config: AbcConfig, objective, space: SearchSpace, seed: int) -> RunResult:
    """Run ABC for ``config.max_iterations`` iterations from a fresh seed.

    The trace has one entry per iteration, starting with iteration 0 for
    the initial population. The reported best is the best source ever held,
    including sources that were later abandoned.
    """
    dims = getattr(objective, "dims", space.dims)
    if dims != space.dims:
        raise DimensionError(f"objective has {dims} dims, search space has {space.dims}")
    rng = RngStream(seed)
    limit = config.resolved_limit(space.dims)
    counted = CountingObjective(objective)
    start = time.perf_counter()
    sources = []
    for _ in range(config.colony_size):
        position = random_point(space, rng)
        sources.append(FoodSource.at(position, evaluate(counted, position)))

    best = _best(sources)
    best_point, best_value = best.position, best.value
    trace = ConvergenceTrace().record(0, best_value)
    scouts = 0

    def refresh():
        nonlocal best_point, best_value
        b = _best(sources)
        if b.value < best_value:
            best_point, best_value = b.position, b.value

    for iteration in range(1, config.max_iterations + 1):
        employed_phase(sources, counted, rng, space)
        refresh()
        onlooker_phase(sources, counted, rng, space)
        refresh()
        # The source about to be abandoned was already folded into the best.
        if scout_phase(sources, counted, rng, space, limit) is not None:
            scouts += 1
            refresh()
        trace.record(iteration, best_value)

    return RunResult(
        algorithm="abc",
        objective=getattr(objective, "name", "objective"),
        seed=seed,
        best_point=best_point,
        best_value=best_value,
        trace=trace,
        evaluations=counted.calls,
        wall_time=time.perf_counter() - start,
        info={"scouts": scouts, "limit": limit},
    )
