"""The gamma-reflected process W(t) = X(t) - c*t - gamma * inf_{s<=t}(X(s) - c*s).

gamma = 1 gives the queueing workload process, gamma = 0 the free drifted
process.  The grid supremum is a lower bound for the continuous-time
supremum; the grid step is the convergence knob for that bias.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fbm import SampledPath, TimeGrid, check_hurst


@dataclass(frozen=True)
class ProcessParams:
    """The quadruple (H, c, gamma, T); T = math.inf marks the infinite horizon."""

    hurst: float
    c: float
    gamma: float
    horizon: float

    def __post_init__(self):
        check_hurst(self.hurst, allow_one=True)
        if self.c <= 0:
            raise DomainError(f"drift c must be positive, got {self.c}")
        if not (0.0 <= self.gamma <= 1.0):
            raise DomainError(f"gamma must lie in [0, 1], got {self.gamma}")
        if self.horizon <= 0:
            raise DomainError(f"horizon must be positive, got {self.horizon}")
        if math.isinf(self.horizon) and self.gamma >= 1.0:
            raise DomainError(
                "gamma must be < 1 on the infinite horizon "
                "(the fully reflected supremum diverges almost surely)"
            )

    @property
    def is_infinite_horizon(self) -> bool:
        return math.isinf(self.horizon)


@dataclass(frozen=True)
class ReflectedPath:
    grid: TimeGrid
    w_values: np.ndarray
    running_inf: np.ndarray
    c: float
    gamma: float


def reflect_values(values: np.ndarray, times: np.ndarray, c: float, gamma: float):
    """Vectorized core: reflect along the last axis.  Returns (w, running_inf)."""
    if not (0.0 <= gamma <= 1.0):
        raise DomainError(f"gamma must lie in [0, 1], got {gamma}")
    drifted = values - c * times
    running_inf = np.minimum.accumulate(drifted, axis=-1)
    return drifted - gamma * running_inf, running_inf


def reflect(path: SampledPath, c: float, gamma: float) -> ReflectedPath:
    """Build the gamma-reflected process from a sampled input path."""
    if path.grid.start != 0:
        raise DomainError("reflect requires a grid starting at 0")
    w, running_inf = reflect_values(path.values, path.grid.points, c, gamma)
    return ReflectedPath(path.grid, w, running_inf, c, gamma)


def supremum(rp: ReflectedPath) -> float:
    """Grid maximum of W (a lower bound for the continuous-time supremum)."""
    return float(np.max(rp.w_values))


def surplus(rp: ReflectedPath, u: float) -> np.ndarray:
    """Surplus process U(t) = u - W(t); ruin {U < 0} iff supremum(rp) > u."""
    if u < 0:
        raise DomainError(f"initial reserve u must be nonnegative, got {u}")
    return u - rp.w_values
