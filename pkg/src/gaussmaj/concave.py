"""Nonnegative concave functions on [0, 1] used to build trace functionals."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import FunctionClassError, ParameterError

# Slopes of functions singular at 0 are evaluated no closer than this.
_SLOPE_FLOOR = 1e-300

_GRID = np.linspace(0.0, 1.0, 2001)


@dataclass(frozen=True)
class ConcaveFunctionSpec:
    """A real function on [0, 1] with ``f(0) = 0``, evaluated elementwise."""

    strictly_concave = True

    def __call__(self, x):
        raise NotImplementedError

    def derivative(self, x):
        raise NotImplementedError

    @cached_property
    def in_class(self) -> bool:
        """Whether ``f`` is nonnegative on [0, 1] (checked on a dense grid plus breakpoints)."""
        points = np.concatenate([_GRID, self._breakpoints()])
        return bool(np.all(self(points) >= -1e-15))

    def _breakpoints(self):
        return np.array([1.0])

    def check_class(self) -> None:
        if not self.in_class:
            raise FunctionClassError(f"{self} is negative somewhere on [0, 1]")


@dataclass(frozen=True)
class ShannonTerm(ConcaveFunctionSpec):
    r""":math:`f(x) = -x \ln x`."""

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        safe = np.where(x > 0, x, 1.0)
        return np.where(x > 0, -safe * np.log(safe), 0.0)

    def derivative(self, x):
        return -np.log(np.maximum(x, _SLOPE_FLOOR)) - 1.0

    def __str__(self):
        return "ShannonTerm"


@dataclass(frozen=True)
class PowerGap(ConcaveFunctionSpec):
    r""":math:`f(x) = x - x^p`, the Renyi-type family."""

    p: float

    def __post_init__(self):
        if not self.p > 1.0:
            raise ParameterError(f"power must be > 1, got {self.p}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return x - np.power(np.maximum(x, 0.0), self.p)

    def derivative(self, x):
        return 1.0 - self.p * np.power(np.maximum(x, 0.0), self.p - 1.0)

    def __str__(self):
        return f"PowerGap({self.p:g})"


@dataclass(frozen=True)
class SqrtGap(ConcaveFunctionSpec):
    r""":math:`f(x) = \sqrt{x}\,(1 - x)`."""

    def __call__(self, x):
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        return np.sqrt(x) * (1.0 - x)

    def derivative(self, x):
        x = np.maximum(x, _SLOPE_FLOOR)
        return 0.5 / np.sqrt(x) - 1.5 * np.sqrt(x)

    def __str__(self):
        return "SqrtGap"


@dataclass(frozen=True)
class ClippedLinear(ConcaveFunctionSpec):
    """``min(x, c)``: concave but not strictly."""

    c: float
    strictly_concave = False

    def __post_init__(self):
        if not 0.0 < self.c <= 1.0:
            raise ParameterError(f"clipping level must lie in (0, 1], got {self.c}")

    def __call__(self, x):
        return np.minimum(np.asarray(x, dtype=float), self.c)

    def derivative(self, x):
        return np.where(np.asarray(x) < self.c, 1.0, 0.0)

    def _breakpoints(self):
        return np.array([self.c, 1.0])

    def __str__(self):
        return f"ClippedLinear({self.c:g})"


@dataclass(frozen=True)
class ClippedQuadratic(ConcaveFunctionSpec):
    """``min(x, c) - eps x^2``: strictly concave for ``eps > 0``, nonnegative iff ``eps <= c``."""

    c: float
    eps: float

    def __post_init__(self):
        if not 0.0 < self.c <= 1.0:
            raise ParameterError(f"clipping level must lie in (0, 1], got {self.c}")
        if not self.eps > 0.0:
            raise ParameterError(f"quadratic bend must be > 0, got {self.eps}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.minimum(x, self.c) - self.eps * x * x

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x < self.c, 1.0, 0.0) - 2.0 * self.eps * x

    def _breakpoints(self):
        return np.array([self.c, 1.0])

    def __str__(self):
        return f"ClippedQuadratic({self.c:g},{self.eps:g})"


#: Fixed battery of strictly concave members of the class.
CONCAVE_BATTERY = (ShannonTerm(), PowerGap(2.0), PowerGap(3.0), SqrtGap())


def from_name(name: str) -> ConcaveFunctionSpec:
    """Parse ``ShannonTerm``, ``SqrtGap`` or ``PowerGap(p)``."""
    name = name.strip()
    if name == "ShannonTerm":
        return ShannonTerm()
    if name == "SqrtGap":
        return SqrtGap()
    if name.startswith("PowerGap(") and name.endswith(")"):
        try:
            return PowerGap(float(name[len("PowerGap("):-1]))
        except ValueError:
            pass
    raise ParameterError(f"unknown functional {name!r}")

