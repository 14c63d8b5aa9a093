"""Benchmark objectives and the name registry used by the CLI."""

from __future__ import annotations

import math
from math import cos
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .core import DimensionError, NotFoundError, ObjectiveSpec, RangeError

TWO_PI = 2.0 * math.pi


def rastrigin(x: Sequence[float]) -> float:
    """Rastrigin function ``10 n + sum(x_i^2 - 10 cos(2 pi x_i))``.

    Global minimum 0 at the origin. For n = 2 and n = 3 the constant term
    is 20 and 30 respectively.
    """
    n = len(x)
    if n == 0:
        raise DimensionError("rastrigin needs at least one coordinate")
    total = 10.0 * n
    for v in x:
        total += v * v - 10.0 * cos(TWO_PI * v)
    return float(total)


def sphere(x: Sequence[float]) -> float:
    """Sum of squares. Not one of the reference benchmarks; a unimodal
    smoke-test target."""
    if len(x) == 0:
        raise DimensionError("sphere needs at least one coordinate")
    return float(sum(v * v for v in x))


@dataclass(frozen=True)
class RegistryEntry:
    name: str
    func: Callable[[Sequence[float]], float]
    min_dims: int = 1
    max_dims: Optional[int] = None
    # Minimum value and a function of dims giving its location.
    minimum_value: Optional[float] = None
    minimum_location: Optional[Callable[[int], tuple[float, ...]]] = None
    description: str = ""

    def supports(self, dims: int) -> bool:
        return dims >= self.min_dims and (self.max_dims is None or dims <= self.max_dims)

    def dims_label(self) -> str:
        if self.max_dims is None:
            return f">={self.min_dims}"
        if self.max_dims == self.min_dims:
            return str(self.min_dims)
        return f"{self.min_dims}-{self.max_dims}"

    def build(self, dims: int) -> ObjectiveSpec:
        known = None
        if self.minimum_value is not None and self.minimum_location is not None:
            known = (self.minimum_value, self.minimum_location(dims))
        return ObjectiveSpec(self.name, dims, self.func, known)


class FunctionRegistry:
    def __init__(self, entries: Sequence[RegistryEntry] = ()):
        self._entries: dict[str, RegistryEntry] = {}
        for entry in entries:
            self.add(entry)

    def add(self, entry: RegistryEntry) -> None:
        self._entries[entry.name] = entry

    def register(self, name: str, func, *, min_dims: int = 1, max_dims: Optional[int] = None,
                 minimum_value: Optional[float] = None, minimum_location=None,
                 description: str = "") -> None:
        self.add(RegistryEntry(name, func, min_dims, max_dims, minimum_value,
                               minimum_location, description))

    def merged(self, other: "FunctionRegistry") -> "FunctionRegistry":
        """New registry with ``other``'s entries layered over this one."""
        return FunctionRegistry(list(self._entries.values()) + list(other._entries.values()))

    def names(self) -> list[str]:
        return sorted(self._entries)

    def entries(self) -> list[RegistryEntry]:
        return [self._entries[name] for name in self.names()]

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def lookup(self, name: str, dims: int) -> ObjectiveSpec:
        try:
            entry = self._entries[name]
        except KeyError:
            raise NotFoundError(
                f"unknown function {name!r}; registered functions: {', '.join(self.names())}"
            ) from None
        if not entry.supports(dims):
            raise RangeError(f"function {name!r} supports dims {entry.dims_label()}, got {dims}")
        return entry.build(dims)


def _origin(dims: int) -> tuple[float, ...]:
    return (0.0,) * dims


DEFAULT_REGISTRY = FunctionRegistry([
    RegistryEntry("rastrigin", rastrigin, minimum_value=0.0, minimum_location=_origin,
                  description="10n + sum(x^2 - 10 cos(2 pi x))"),
    RegistryEntry("sphere", sphere, minimum_value=0.0, minimum_location=_origin,
                  description="sum(x^2), smoke-test only"),
])


def lookup(name: str, dims: int, registry: Optional[FunctionRegistry] = None) -> ObjectiveSpec:
    return (registry or DEFAULT_REGISTRY).lookup(name, dims)
