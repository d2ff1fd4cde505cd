"""Exact sampling of fractional Brownian motion (fBm) on uniform time grids.

The default sampler uses circulant embedding of the increment autocovariance
(Davies-Harte), which is exact and O(n log n).  When the embedding is not
nonnegative definite it silently falls back to a dense Cholesky factorization
of the path covariance.

Two-sided fBm (needed for Piterbarg-constant windows spanning negative times)
is sampled with a dense Cholesky factor built from the global covariance
    Cov(B(t), B(s)) = (|t|^{2H} + |s|^{2H} - |t-s|^{2H}) / 2,   t, s in R.
Gluing two independent one-sided paths at 0 would be wrong for H != 1/2: the
two half-lines of a two-sided fBm are dependent.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResourceError

log = logging.getLogger(__name__)

# Largest grid accepted by the dense Cholesky fallback / two-sided sampler.
DENSE_LIMIT = 8192


def check_hurst(value: float, allow_one: bool = False) -> float:
    """Validate a Hurst index, returning it as a float."""
    h = float(value)
    if not (0.0 < h <= 1.0):
        raise DomainError(f"Hurst index must lie in (0, 1], got {value}")
    if h == 1.0 and not allow_one:
        raise DomainError(
            "H = 1 is degenerate; use sample_degenerate_fbm for that case"
        )
    return h


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid t_k = start + k*step, k = 0..count-1."""

    start: float
    step: float
    count: int

    def __post_init__(self):
        if self.step <= 0:
            raise DomainError(f"grid step must be positive, got {self.step}")
        if self.count < 1:
            raise DomainError(f"grid count must be >= 1, got {self.count}")

    @property
    def points(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.count)

    @property
    def end(self) -> float:
        return self.start + self.step * (self.count - 1)

    @classmethod
    def over(cls, start: float, end: float, step: float) -> "TimeGrid":
        """Grid covering [start, end] with the given step (end must be a multiple)."""
        n = (end - start) / step
        count = int(round(n)) + 1
        if not math.isclose(start + (count - 1) * step, end, rel_tol=1e-9, abs_tol=1e-12):
            raise DomainError(f"step {step} does not divide [{start}, {end}]")
        return cls(start, step, count)


@dataclass(frozen=True)
class SampledPath:
    """A Gaussian path on a time grid."""

    grid: TimeGrid
    values: np.ndarray
    hurst: float

    def __post_init__(self):
        if len(self.values) != self.grid.count:
            raise DomainError("values length does not match grid count")


def fbm_covariance(t, s, H):
    """Covariance of standard fBm: (t^{2H} + s^{2H} - |t-s|^{2H}) / 2."""
    h = check_hurst(H, allow_one=True)
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any(t < 0) or np.any(s < 0):
        raise DomainError("fbm_covariance requires nonnegative times")
    out = 0.5 * (t ** (2 * h) + s ** (2 * h) - np.abs(t - s) ** (2 * h))
    return out if out.ndim else float(out)


def fbm_covariance_matrix(times: np.ndarray, H: float) -> np.ndarray:
    """Dense covariance matrix of one-sided fBm on the given times."""
    t = np.asarray(times, dtype=float)
    return fbm_covariance(t[:, None], t[None, :], H)


def two_sided_covariance_matrix(times: np.ndarray, H: float) -> np.ndarray:
    """Covariance of fBm defined on all of R, at arbitrary (possibly negative) times."""
    h = check_hurst(H, allow_one=True)
    t = np.asarray(times, dtype=float)
    at = np.abs(t)
    return 0.5 * (
        at[:, None] ** (2 * h)
        + at[None, :] ** (2 * h)
        - np.abs(t[:, None] - t[None, :]) ** (2 * h)
    )


# ---------------------------------------------------------------------------
# internal batched samplers (estimation loops build on these)
# ---------------------------------------------------------------------------

def _fgn_circulant_eigenvalues(n: int, H: float):
    """Eigenvalues of the 2n circulant embedding of unit-step fGn autocovariance.

    Returns None when the embedding is indefinite (then the caller must fall
    back to dense Cholesky).
    """
    k = np.arange(n + 1, dtype=float)
    rho = 0.5 * ((k + 1) ** (2 * H) + np.abs(k - 1) ** (2 * H) - 2 * k ** (2 * H))
    c = np.concatenate([rho, rho[-2:0:-1]])
    lam = np.fft.fft(c).real
    if lam.min() < -1e-9 * max(lam.max(), 1.0):
        return None
    return np.clip(lam, 0.0, None)


def _fgn_batch(eigenvalues: np.ndarray, n: int, n_paths: int, rng,
               out: np.ndarray | None = None) -> np.ndarray:
    """Draw (n_paths, n) exact unit-step fGn samples from precomputed eigenvalues.

    When given, `out` (shape (n_paths, n), any strides) receives the samples,
    avoiding a second full-size allocation.
    """
    m = eigenvalues.size
    scale = np.sqrt(eigenvalues / m)
    # rows are independent, so the batch is generated and transformed in row
    # blocks: peak memory is one block of complex work arrays, not the full
    # (n_paths, m) complex matrix, which matters on long grids
    if out is None:
        out = np.empty((n_paths, n))
    block = max(1, (1 << 25) // m)
    for i in range(0, n_paths, block):
        b = min(block, n_paths - i)
        xi = rng.standard_normal((b, m)) + 1j * rng.standard_normal((b, m))
        xi *= scale
        out[i:i + b] = np.fft.fft(xi, axis=-1).real[:, :n]
    return out


def cholesky_psd(cov: np.ndarray) -> np.ndarray:
    """Lower-triangular-like factor L with L @ L.T = cov, tolerating tiny negatives."""
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        w, v = np.linalg.eigh(cov)
        scale = max(abs(w[-1]), 1.0)
        if w[0] < -1e-8 * scale:
            raise FloatingPointError(
                f"covariance is indefinite: smallest eigenvalue {w[0]:.3e}"
            )
        return v * np.sqrt(np.clip(w, 0.0, None))


class FbmSampler:
    """Reusable exact sampler for one-sided fBm on a fixed grid starting at 0.

    Immutable after construction; sampling is a pure function of the rng state.
    """

    def __init__(self, n_increments: int, H: float, step: float):
        self.H = check_hurst(H)
        self.n = int(n_increments)
        self.step = float(step)
        if self.n < 1:
            raise DomainError("need at least one increment")
        self._eigs = _fgn_circulant_eigenvalues(self.n, self.H)
        self._factor = None
        if self._eigs is None:
            if self.n > DENSE_LIMIT:
                raise ResourceError(
                    f"circulant embedding failed and grid of {self.n} increments "
                    f"exceeds the dense fallback limit {DENSE_LIMIT}"
                )
            log.info(
                "circulant embedding indefinite for n=%d H=%.3f; "
                "falling back to dense Cholesky", self.n, self.H,
            )
            times = self.step * np.arange(1, self.n + 1)
            self._factor = cholesky_psd(fbm_covariance_matrix(times, self.H))

    def sample_batch(self, n_paths: int, rng) -> np.ndarray:
        """(n_paths, n+1) array of fBm values at t = 0, step, ..., n*step."""
        out = np.empty((n_paths, self.n + 1))
        out[:, 0] = 0.0
        if self._eigs is not None:
            # fill, scale, and accumulate in place so the peak is one full-size
            # array plus the sampler's block-sized work buffers
            _fgn_batch(self._eigs, self.n, n_paths, rng, out=out[:, 1:])
            out[:, 1:] *= self.step ** self.H
            np.add.accumulate(out[:, 1:], axis=-1, out=out[:, 1:])
        else:
            z = rng.standard_normal((n_paths, self.n))
            out[:, 1:] = z @ self._factor.T
        return out


class TwoSidedFbmSampler:
    """Dense-Cholesky sampler for fBm on a grid spanning negative and positive times."""

    def __init__(self, times: np.ndarray, H: float):
        self.H = check_hurst(H)
        t = np.asarray(times, dtype=float)
        self.times = t
        self._nonzero = np.abs(t) > 0
        nz = t[self._nonzero]
        if nz.size > DENSE_LIMIT:
            raise ResourceError(
                f"two-sided grid of {nz.size} points exceeds the dense limit {DENSE_LIMIT}"
            )
        self._factor = cholesky_psd(two_sided_covariance_matrix(nz, self.H))

    def sample_batch(self, n_paths: int, rng) -> np.ndarray:
        out = np.zeros((n_paths, self.times.size))
        z = rng.standard_normal((n_paths, self._factor.shape[1]))
        out[:, self._nonzero] = z @ self._factor.T
        return out


# ---------------------------------------------------------------------------
# public single-path samplers
# ---------------------------------------------------------------------------

def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_fbm(grid: TimeGrid, H, seed=None) -> SampledPath:
    """Draw one exact fBm path on a grid anchored at 0."""
    h = check_hurst(H)
    if grid.start != 0:
        raise DomainError("sample_fbm requires grid.start = 0")
    rng = _as_rng(seed)
    if grid.count == 1:
        return SampledPath(grid, np.zeros(1), h)
    sampler = FbmSampler(grid.count - 1, h, grid.step)
    return SampledPath(grid, sampler.sample_batch(1, rng)[0], h)


def sample_degenerate_fbm(grid: TimeGrid, seed=None) -> SampledPath:
    """The H = 1 case: X(t) = N * t with a single standard normal N."""
    rng = _as_rng(seed)
    n = rng.standard_normal()
    return SampledPath(grid, n * grid.points, 1.0)


def sample_drifted_fbm(grid: TimeGrid, alpha, a, seed=None) -> SampledPath:
    """Path of sqrt(2) * B_alpha(t) - (1 + a) * |t|^alpha on a grid containing 0.

    B_alpha is fBm with Hurst index alpha/2.  Grids with negative times use the
    true two-sided field (dense Cholesky); one-sided grids use the fast sampler.
    """
    alpha = float(alpha)
    if not (0.0 < alpha <= 2.0):
        raise DomainError(f"alpha must lie in (0, 2], got {alpha}")
    if a <= 0:
        raise DomainError(f"a must be positive, got {a}")
    times = grid.points
    if not np.any(np.isclose(times, 0.0, atol=1e-12)):
        raise DomainError("grid must contain the point 0")
    rng = _as_rng(seed)
    hp = alpha / 2.0
    if alpha == 2.0:
        b = rng.standard_normal() * times
    elif grid.count == 1:
        b = np.zeros(1)
    elif times[0] >= 0:
        sampler = FbmSampler(grid.count - 1, hp, grid.step)
        b = sampler.sample_batch(1, rng)[0]
    else:
        sampler = TwoSidedFbmSampler(times, hp)
        b = sampler.sample_batch(1, rng)[0]
    values = math.sqrt(2.0) * b - (1.0 + a) * np.abs(times) ** alpha
    return SampledPath(grid, values, hp)
