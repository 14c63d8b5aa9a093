"""Firefly Algorithm.

Brightness is the negated objective: a firefly is brighter than another iff
its value is strictly lower. The population is kept ranked brightest first,
so in the triangular sweep (``i`` over the population, ``j < i``) every
firefly is pulled toward each brighter one, updating immediately after
each move.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .core import (
    ConfigurationError,
    ConvergenceTrace,
    CountingObjective,
    DimensionError,
    RangeError,
    RngStream,
    RunResult,
    SearchSpace,
    Vector,
    clamp,
    evaluate,
    random_point,
)


class Firefly(NamedTuple):
    position: Vector
    value: float

    def brighter_than(self, other: "Firefly") -> bool:
        return self.value < other.value


@dataclass(frozen=True)
class FaConfig:
    """FA parameters.

    ``alpha`` is in absolute box units (not scaled by the bounds).
    ``exponent_power`` selects ``exp(-gamma * r**p)``: 2 for the usual
    Gaussian decay, 1 for the plain exponential.
    """

    population: int = 50
    alpha: float = 0.5
    beta0: float = 1.0
    gamma: float = 1.0
    max_iterations: int = 100
    exponent_power: int = 2

    def __post_init__(self):
        if self.population < 1:
            raise ConfigurationError(f"population must be >= 1, got {self.population}")
        if not self.alpha >= 0:
            raise ConfigurationError(f"alpha must be >= 0, got {self.alpha}")
        if not 0 <= self.beta0 <= 1:
            raise ConfigurationError(f"beta0 must lie in [0, 1], got {self.beta0}")
        if not self.gamma >= 0:
            raise ConfigurationError(f"gamma must be >= 0, got {self.gamma}")
        if self.max_iterations < 0:
            raise ConfigurationError(f"max_iterations must be >= 0, got {self.max_iterations}")
        if self.exponent_power not in (1, 2):
            raise ConfigurationError(f"exponent_power must be 1 or 2, got {self.exponent_power}")

    def to_dict(self) -> dict:
        return {"population": self.population, "alpha": self.alpha, "beta0": self.beta0,
                "gamma": self.gamma, "max_iterations": self.max_iterations,
                "exponent_power": self.exponent_power}


def distance(a: Sequence[float], b: Sequence[float]) -> float:
    if len(a) != len(b):
        raise DimensionError(f"cannot measure distance between {len(a)}-d and {len(b)}-d points")
    return math.dist(a, b)


def attractiveness(r: float, beta0: float, gamma: float, power: int = 2) -> float:
    """``beta0 * exp(-gamma * r**power)``."""
    if r < 0:
        raise RangeError(f"distance must be non-negative, got {r}")
    if gamma == 0 or r == 0:
        return beta0
    return beta0 * math.exp(-gamma * r**power)


def move_toward(fly: Firefly, other: Firefly, config: FaConfig, rng, space: SearchSpace,
                objective) -> Firefly:
    """Pull ``fly`` toward the brighter ``other`` plus centred uniform noise.

    ``x + beta * (y - x) + alpha * (u - 1/2)`` with an independent ``u`` per
    coordinate, clamped and re-evaluated.
    """
    x, y = fly.position, other.position
    beta = attractiveness(math.dist(x, y), config.beta0, config.gamma, config.exponent_power)
    alpha = config.alpha
    moved = clamp([xk + beta * (yk - xk) + alpha * (rng.random() - 0.5) for xk, yk in zip(x, y)],
                  space)
    return Firefly(moved, evaluate(objective, moved))


def random_walk(best: Firefly, config: FaConfig, rng, space: SearchSpace, objective) -> Firefly:
    """Undirected step ``x + alpha * (u - 1/2)`` of the brightest firefly.

    The walk is accepted even when it worsens the firefly; the run keeps
    its best-so-far separately.
    """
    alpha = config.alpha
    moved = clamp([xk + alpha * (rng.random() - 0.5) for xk in best.position], space)
    return Firefly(moved, evaluate(objective, moved))


def rank(fireflies: Sequence[Firefly]) -> list[Firefly]:
    """Brightest first. Stable, so equal values keep their order."""
    return sorted(fireflies, key=lambda f: f.value)


def run_fa(config: FaConfig, objective, space: SearchSpace, seed: int) -> RunResult:
    """Run FA for ``config.max_iterations`` iterations from a fresh seed.

    Best-so-far is taken over every evaluated point, so a firefly that
    passes through a good spot and moves on still counts.

    The sweep is the composition of :func:`move_toward`,
    :func:`random_walk` and :func:`rank`, unrolled with local bindings
    because it dominates the runtime (about n^2 / 2 moves per iteration).
    """
    dims = getattr(objective, "dims", space.dims)
    if dims != space.dims:
        raise DimensionError(f"objective has {dims} dims, search space has {space.dims}")
    rng = RngStream(seed)
    n = config.population
    counted = CountingObjective(objective)
    start = time.perf_counter()

    flies = []
    for _ in range(n):
        position = random_point(space, rng)
        flies.append(Firefly(position, evaluate(counted, position)))
    moves = 0

    best = min(flies, key=lambda f: f.value)
    best_point, best_value = best.position, best.value
    trace = ConvergenceTrace().record(0, best_value)
    flies = rank(flies)
    pos = [f.position for f in flies]
    val = [f.value for f in flies]

    rand, dist, exp = rng.random, math.dist, math.exp
    lower, upper = space.lower, space.upper
    alpha, beta0, gamma, power = config.alpha, config.beta0, config.gamma, config.exponent_power

    for iteration in range(1, config.max_iterations + 1):
        for i in range(n):
            xi, vi = pos[i], val[i]
            # j == i can never be strictly brighter, so stop at i - 1.
            for j in range(i):
                if val[j] < vi:
                    xj = pos[j]
                    r = dist(xi, xj)
                    beta = beta0 if gamma == 0 or r == 0 else beta0 * exp(-gamma * r**power)
                    xi = tuple(map(min, upper, map(max, lower, [
                        a + beta * (b - a) + alpha * (rand() - 0.5) for a, b in zip(xi, xj)
                    ])))
                    vi = evaluate(counted, xi)
                    moves += 1
                    if vi < best_value:
                        best_point, best_value = xi, vi
            pos[i], val[i] = xi, vi

        k = val.index(min(val))
        walked = random_walk(Firefly(pos[k], val[k]), config, rng, space, counted)
        pos[k], val[k] = walked
        if walked.value < best_value:
            best_point, best_value = walked.position, walked.value

        order = sorted(range(n), key=val.__getitem__)
        pos = [pos[k] for k in order]
        val = [val[k] for k in order]
        trace.record(iteration, best_value)

    return RunResult(
        algorithm="fa",
        objective=getattr(objective, "name", "objective"),
        seed=seed,
        best_point=best_point,
        best_value=best_value,
        trace=trace,
        evaluations=counted.calls,
        wall_time=time.perf_counter() - start,
        info={"moves": moves},
    )
