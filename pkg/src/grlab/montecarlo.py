"""Monte Carlo estimation of exceedance probabilities for the reflected supremum.

Crude (exact-law) Monte Carlo over independent fBm paths.  The infinite
horizon is truncated at a multiple of the rescaled variance-maximizer location,
so the result is a lower bound whose truncation error is checked by doubling
the effective horizon.  Grid suprema bias every estimate low; the grid step is
the knob that controls it.

The chunked seeding scheme (fixed chunk size, one spawned seed per chunk)
makes results deterministic and independent of how chunks are scheduled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .asymptotics import std_normal_tail
from .constants import CHUNK, _chunk_rngs
from .errors import DomainError, InsufficientSamplesError, UnsupportedCaseError
from .fbm import FbmSampler
from .reflected import ProcessParams

DEFAULT_KAPPA = 4.0


@dataclass(frozen=True)
class TailEstimate:
    probability: float
    std_error: float
    n_samples: int
    ci_level: float
    horizon_used: float
    grid_step: float
    params: ProcessParams | None
    u: float
    metadata: dict = field(default_factory=dict)

    def ci_half_width(self) -> float:
        from scipy.stats import norm
        z = norm.ppf(0.5 + self.ci_level / 2.0)
        return z * self.std_error


@dataclass(frozen=True)
class RatioEstimate:
    numerator: TailEstimate
    denominator: TailEstimate
    ratio: float
    std_error: float


def _coupled_exceedance_counts(H, c, gammas, u, horizon, grid_step, n_samples, seed):
    """Counts of {sup W_gamma > u} for several gammas on the same sampled paths.

    Also returns the count of the joint event for the first two gammas (used
    by the ratio delta method).
    """
    n = horizon / grid_step
    n_steps = int(round(n))
    if not math.isclose(n_steps, n, rel_tol=1e-9, abs_tol=1e-9):
        raise DomainError(f"grid step {grid_step} does not divide the horizon {horizon}")
    times = grid_step * np.arange(n_steps + 1)
    sampler = None if H == 1.0 else FbmSampler(n_steps, H, grid_step)
    counts = np.zeros(len(gammas), dtype=np.int64)
    joint = 0
    cols = 4096
    for size, rng in _chunk_rngs(seed, n_samples):
        if sampler is None:
            x = rng.standard_normal(size)[:, None] * times
        else:
            x = sampler.sample_batch(size, rng)
        x -= c * times
        # stream the running infimum / suprema over column blocks so the work
        # arrays never grow to the full (paths, steps) size a second time
        running_inf = np.zeros(size)
        sups = np.full((len(gammas), size), -np.inf)
        for j in range(0, n_steps + 1, cols):
            xb = x[:, j:j + cols]
            inf_b = np.minimum.accumulate(xb, axis=1)
            np.minimum(inf_b, running_inf[:, None], out=inf_b)
            sup0_b = xb.max(axis=1)
            for i, g in enumerate(gammas):
                if g == 0.0:
                    np.maximum(sups[i], sup0_b, out=sups[i])
                else:
                    np.maximum(sups[i], (xb - g * inf_b).max(axis=1),
                               out=sups[i])
            running_inf = inf_b[:, -1].copy()
        hits = sups > u
        counts += hits.sum(axis=1)
        if len(gammas) >= 2:
            joint += int((hits[0] & hits[1]).sum())
    return counts, joint


def _tail_estimate(count, n_samples, u, horizon, grid_step, params, ci_level, metadata):
    p = count / n_samples
    se = math.sqrt(p * (1 - p) / n_samples)
    return TailEstimate(
        probability=p, std_error=se, n_samples=n_samples, ci_level=ci_level,
        horizon_used=horizon, grid_step=grid_step, params=params, u=u,
        metadata=metadata,
    )


def estimate_tail(params: ProcessParams, u, n_samples, grid_step,
                  seed=None, ci_level=0.95) -> TailEstimate:
    """Crude Monte Carlo estimate of P(sup_{[0,T]} W_gamma > u), T finite."""
    if params.is_infinite_horizon:
        raise DomainError("estimate_tail needs a finite horizon; "
                          "use estimate_tail_infinite")
    counts, _ = _coupled_exceedance_counts(
        params.hurst, params.c, [params.gamma], u,
        params.horizon, grid_step, n_samples, seed)
    return _tail_estimate(counts[0], n_samples, u, params.horizon, grid_step,
                          params, ci_level, {"biased_low": True})


def effective_horizon(params: ProcessParams, u, kappa=DEFAULT_KAPPA) -> float:
    """Truncation horizon: kappa times the rescaled variance-maximizer time u*t0."""
    if u <= 0:
        raise DomainError(f"u must be positive on the infinite horizon, got {u}")
    h = params.hurst
    return kappa * u * h / (params.c * (1 - h))


def estimate_tail_infinite(params: ProcessParams, u, n_samples, grid_step,
                           seed=None, kappa=DEFAULT_KAPPA,
                           ci_level=0.95) -> TailEstimate:
    """Truncated-horizon estimate of P(sup_{[0,inf)} W_gamma > u), gamma < 1.

    The result is a lower bound for the infinite-horizon probability; the
    truncation horizon and kappa are recorded so a doubling check can be run.
    """
    if not params.is_infinite_horizon:
        raise DomainError("params.horizon must be infinite; use estimate_tail otherwise")
    if params.gamma >= 1.0:
        raise DomainError("gamma must be < 1 on the infinite horizon")
    t_eff = effective_horizon(params, u, kappa)
    # round the horizon up to a whole number of grid steps
    t_eff = grid_step * math.ceil(t_eff / grid_step - 1e-9)
    counts, _ = _coupled_exceedance_counts(
        params.hurst, params.c, [params.gamma], u, t_eff, grid_step,
        n_samples, seed)
    meta = {"kappa": kappa, "effective_horizon": t_eff,
            "lower_bound": True, "biased_low": True}
    return _tail_estimate(counts[0], n_samples, u, t_eff, grid_step,
                          params, ci_level, meta)


def estimate_ratio(params: ProcessParams, u, n_samples, grid_step,
                   seed=None, kappa=DEFAULT_KAPPA,
                   ci_level=0.95) -> RatioEstimate:
    """Coupled estimate of psi_gamma(u) / psi_0(u) from the same sampled paths."""
    if params.is_infinite_horizon:
        horizon = grid_step * math.ceil(
            effective_horizon(params, u, kappa) / grid_step - 1e-9)
        meta = {"kappa": kappa, "effective_horizon": horizon, "lower_bound": True}
    else:
        horizon = params.horizon
        meta = {}
    counts, joint = _coupled_exceedance_counts(
        params.hurst, params.c, [params.gamma, 0.0], u, horizon, grid_step,
        n_samples, seed)
    if counts[1] == 0:
        raise InsufficientSamplesError(
            f"no exceedances of the gamma=0 denominator at u={u} in "
            f"{n_samples} samples; lower u or raise n_samples")
    meta = dict(meta, biased_low=True)
    num = _tail_estimate(counts[0], n_samples, u, horizon, grid_step,
                         params, ci_level, meta)
    den_params = ProcessParams(params.hurst, params.c, 0.0, params.horizon)
    den = _tail_estimate(counts[1], n_samples, u, horizon, grid_step,
                         den_params, ci_level, meta)
    pg, p0 = num.probability, den.probability
    p11 = joint / n_samples
    ratio = pg / p0
    # delta method on the coupled indicator pair
    var = ratio**2 * ((1 - pg) / pg + (1 - p0) / p0
                      - 2 * (p11 - pg * p0) / (pg * p0)) / n_samples
    return RatioEstimate(num, den, ratio, math.sqrt(max(var, 0.0)))


def exact_bm_oracles(u, c, gamma, T) -> float:
    """Exact Brownian-input (H = 1/2) exceedance probabilities.

    Supported: (gamma = 0, T = inf) -> exp(-2cu);
    (gamma in (0,1), T = inf) -> 1 - (1 - exp(-2cu))^{1/(1-gamma)};
    (gamma = 0, T finite) -> the reflection formula
    Psi((u + cT)/sqrt(T)) + exp(-2cu) * Psi((u - cT)/sqrt(T)).
    """
    if u < 0:
        raise DomainError(f"u must be nonnegative, got {u}")
    if c <= 0:
        raise DomainError(f"c must be positive, got {c}")
    if math.isinf(T):
        free = math.exp(-2.0 * c * u)
        if gamma == 0.0:
            return free
        if 0.0 < gamma < 1.0:
            return 1.0 - (1.0 - free) ** (1.0 / (1.0 - gamma))
        raise UnsupportedCaseError(
            f"no exact infinite-horizon value for gamma={gamma}")
    if gamma == 0.0:
        if T <= 0:
            raise DomainError(f"T must be positive, got {T}")
        rt = math.sqrt(T)
        return (std_normal_tail((u + c * T) / rt)
                + math.exp(-2.0 * c * u) * std_normal_tail((u - c * T) / rt))
    raise UnsupportedCaseError(
        "finite-horizon exact values are only available for gamma = 0")
