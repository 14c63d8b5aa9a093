"""Artificial Bee Colony and Firefly optimizers with a benchmark harness."""

from .benchfns import DEFAULT_REGISTRY, FunctionRegistry, lookup, rastrigin, sphere
from .bees import AbcConfig, FoodSource, run_abc
from .core import (
    ConvergenceTrace,
    ObjectiveSpec,
    RngStream,
    RunResult,
    SearchSpace,
    SwarmError,
    clamp,
    random_point,
)
from .firefly import FaConfig, Firefly, run_fa

__version__ = "0.1.0"
