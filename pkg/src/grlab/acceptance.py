"""Executable acceptance criteria for the toolkit.

Each criterion returns a CriterionResult; the CLI `verify` subcommand and the
pytest acceptance module both run these.  Tolerances are pinned here, not
deferred to calibration.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import asymptotics, constants, fieldlab, montecarlo
from .asymptotics import ConstantProvider, std_normal_tail
from .constants import ConstantEstimate
from .fbm import FbmSampler
from .montecarlo import estimate_ratio, estimate_tail, estimate_tail_infinite
from .reflected import ProcessParams, reflect_values

SEED = 20240817


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    runtime_s: float


def _result(number, name, checks, started):
    """checks: list of (ok, description)."""
    passed = all(ok for ok, _ in checks)
    detail = "; ".join(("ok: " if ok else "FAIL: ") + msg for ok, msg in checks)
    return CriterionResult(number, name, passed, detail, time.perf_counter() - started)


def criterion_1_covariance_fidelity() -> CriterionResult:
    started = time.perf_counter()
    checks = []
    step = 2.0**-8
    n_inc = int(round(2.0 / step))
    i1, i2 = int(round(1.0 / step)), n_inc
    n = 100_000
    for k, h in enumerate((0.3, 0.5, 0.75)):
        sampler = FbmSampler(n_inc, h, step)
        prods = np.empty(n)
        done = 0
        for size, rng in constants._chunk_rngs([SEED, 1, k], n):
            x = sampler.sample_batch(size, rng)
            prods[done:done + size] = x[:, i1] * x[:, i2]
            done += size
        emp = prods.mean()
        se = prods.std(ddof=1) / math.sqrt(n)
        target = 0.5 * (2 ** (2 * h) + 1 - 1)
        checks.append((abs(emp - target) <= 3 * se,
                       f"H={h}: cov {emp:.5f} vs {target:.5f} (3SE={3 * se:.5f})"))
    elapsed = time.perf_counter() - started
    checks.append((elapsed < 30.0, f"runtime {elapsed:.1f}s < 30s"))
    return _result(1, "covariance fidelity", checks, started)


def _mc_tolerance(estimate, exact):
    return max(3 * estimate.std_error, 0.05 * exact)


def criterion_2_bm_infinite_horizon() -> CriterionResult:
    started = time.perf_counter()
    params = ProcessParams(0.5, 1.0, 0.0, math.inf)
    est = estimate_tail_infinite(params, 1.0, 100_000, 2.0**-10, seed=[SEED, 2])
    exact = math.exp(-2.0)
    tol = _mc_tolerance(est, exact)
    checks = [(abs(est.probability - exact) <= tol,
               f"psi_0,inf(1) = {est.probability:.5f} vs {exact:.5f} (tol {tol:.5f})")]
    elapsed = time.perf_counter() - started
    checks.append((elapsed < 120.0, f"runtime {elapsed:.1f}s < 2min"))
    return _result(2, "exact BM infinite horizon", checks, started)


def criterion_3_tax_identity() -> CriterionResult:
    started = time.perf_counter()
    params = ProcessParams(0.5, 1.0, 0.5, math.inf)
    # the reflected process drifts down at rate (1 - gamma) c, so its late
    # exceedances need a longer truncation window than the free process, and
    # the grid bias scales with sqrt(step): kappa = 12 and step 2^-11 bring
    # the estimator bias inside the pinned tolerance
    rat = estimate_ratio(params, 1.0, 100_000, 2.0**-11, seed=[SEED, 3],
                         kappa=12.0)
    exact = montecarlo.exact_bm_oracles(1.0, 1.0, 0.5, math.inf)
    tol = _mc_tolerance(rat.numerator, exact)
    exact_ratio = exact / math.exp(-2.0)
    checks = [
        (abs(rat.numerator.probability - exact) <= tol,
         f"psi_0.5,inf(1) = {rat.numerator.probability:.5f} vs {exact:.5f} (tol {tol:.5f})"),
        (abs(rat.ratio - exact_ratio) <= 3 * rat.std_error,
         f"ratio {rat.ratio:.4f} vs {exact_ratio:.4f} (3SE={3 * rat.std_error:.4f})"),
    ]
    return _result(3, "tax identity", checks, started)


def criterion_4_exact_constants() -> CriterionResult:
    started = time.perf_counter()
    checks = []
    for a in (0.5, 1.0, 3.0):
        p1 = constants.exact_constant(1, a)
        p2 = constants.exact_constant(2, a)
        ok1 = abs(p1 - (1 + 1 / a)) <= 1e-12
        ok2 = abs(p2 - 0.5 * (1 + math.sqrt(1 + 1 / a))) <= 1e-12
        checks.append((ok1 and ok2, f"P_1^{a}={p1:.12f}, P_2^{a}={p2:.12f}"))
    checks.append((abs(constants.exact_pickands(1) - 1.0) <= 1e-12, "H_1 = 1"))
    checks.append((abs(constants.exact_pickands(2) - 1 / math.sqrt(math.pi)) <= 1e-12,
                   "H_2 = 1/sqrt(pi)"))
    return _result(4, "exact constants", checks, started)


def criterion_5_simulated_constants() -> CriterionResult:
    started = time.perf_counter()
    checks = []
    runs = [
        ("piterbarg(1,1)", lambda: constants.piterbarg_limit(1, 1, seed=[SEED, 51]), 2.0),
        ("piterbarg(2,1)", lambda: constants.piterbarg_limit(2, 1, seed=[SEED, 52]),
         0.5 * (1 + math.sqrt(2))),
        ("pickands(1)", lambda: constants.pickands_limit(1, seed=[SEED, 53]), 1.0),
    ]
    for name, fn, target in runs:
        t0 = time.perf_counter()
        est = fn()
        dt = time.perf_counter() - t0
        ok = abs(est.estimate - target) <= 0.10 * target and dt < 300.0
        checks.append((ok, f"{name}: {est.estimate:.4f} vs {target:.4f} in {dt:.0f}s"))
    return _result(5, "simulated constants vs exact", checks, started)


def criterion_6_formula_identities() -> CriterionResult:
    started = time.perf_counter()
    checks = []
    rng = np.random.default_rng(SEED)
    ok_ratio = True
    worst = 0.0
    for _ in range(20):
        h = rng.uniform(0.05, 0.95)
        g = rng.uniform(0.05, 0.95)
        u = rng.uniform(0.5, 20.0)
        # the identity is structural: it holds for any positive constant values
        provider = ConstantProvider("simulation-backed", [
            ConstantEstimate("pickands-limit", 2 * h, None, (0.0, 16.0), 0.01,
                             float(rng.uniform(0.3, 1.5)), 0.0, 0),
            ConstantEstimate("piterbarg-limit", 2 * h, (1 - g) / g, (0.0, 16.0), 0.01,
                             float(rng.uniform(1.0, 3.0)), 0.0, 0),
        ])
        num = asymptotics.psi_gamma_inf(u, h, 1.0, g, provider)
        den = asymptotics.psi0_inf(u, h, 1.0, provider)
        target, _ = asymptotics.ratio_constant(h, g, math.inf, provider)
        err = abs(num.value / den.value - target)
        worst = max(worst, err)
        ok_ratio &= err <= 1e-10
    checks.append((ok_ratio, f"ratio identity, 20 triples, worst err {worst:.2e}"))

    v = asymptotics.psi0_inf(50.0, 0.5, 1.0).value
    rel = abs(v / math.exp(-100.0) - 1.0)
    checks.append((rel <= 1e-4, f"psi0_inf(50, 1/2, 1)/e^-100 - 1 = {rel:.2e}"))

    ok_simpl = True
    worst = 0.0
    for u, c, g in ((1.0, 1.0, 0.5), (2.0, 0.5, 0.2), (5.0, 2.0, 0.8)):
        v = asymptotics.psi_gamma_inf(u, 0.5, c, g).value
        ref = (2 * math.sqrt(2 * math.pi) * math.sqrt(c * u) / (1 - g)
               * std_normal_tail(2 * math.sqrt(c * u)))
        err = abs(v / ref - 1.0)
        worst = max(worst, err)
        ok_simpl &= err <= 1e-10
    checks.append((ok_simpl, f"H=1/2 simplified form, worst rel err {worst:.2e}"))
    return _result(6, "formula identities", checks, started)


def criterion_7_maximizer_oracle() -> CriterionResult:
    started = time.perf_counter()
    checks = []
    res = 1e-3
    grid = np.arange(0.0, 5.0 + res / 2, res)
    gamma = 0.5
    for h, c in ((0.3, 1.0), (0.5, 1.0), (0.5, 2.0), (0.75, 1.0)):
        best_val, best_s, best_t = -1.0, 0.0, 0.0
        for i in range(0, grid.size, 64):
            s_block = grid[i:i + 64]
            t = grid[None, :]
            s = s_block[:, None]
            mask = s <= t
            var = ((1 - gamma) * t ** (2 * h) + (gamma**2 - gamma) * s ** (2 * h)
                   + gamma * np.where(mask, t - s, 0.0) ** (2 * h))
            v = np.sqrt(np.maximum(var, 0.0)) / (1 + c * t - c * gamma * s)
            v = np.where(mask, v, -np.inf)
            j = np.unravel_index(np.argmax(v), v.shape)
            if v[j] > best_val:
                best_val = float(v[j])
                best_s, best_t = float(s_block[j[0]]), float(grid[j[1]])
        s0, t0, val = asymptotics.maximizer_Y(h, c)
        ok = (abs(best_s - s0) <= 2e-3 and abs(best_t - t0) <= 2e-3
              and abs(best_val - val) <= 1e-4)
        checks.append((ok, f"(H={h}, c={c}): grid argmax ({best_s:.3f}, {best_t:.3f}) "
                           f"val {best_val:.5f} vs ({s0}, {t0:.3f}) val {val:.5f}"))
    return _result(7, "maximizer oracle", checks, started)


def criterion_8_pathwise_properties() -> CriterionResult:
    started = time.perf_counter()
    n_paths = 10_000
    step = 2.0**-6
    n_inc = 128
    times = step * np.arange(n_inc + 1)
    coarse = slice(None, None, 2)
    viol_gamma = viol_nested = viol_grid = viol_det = 0
    sampler = FbmSampler(n_inc, 0.7, step)
    for size, rng in constants._chunk_rngs([SEED, 8], n_paths):
        x = sampler.sample_batch(size, rng)
        w1, _ = reflect_values(x, times, 1.0, 0.3)
        w2, _ = reflect_values(x, times, 1.0, 0.8)
        viol_gamma += int((w1 > w2 + 1e-12).any(axis=1).sum())
        s1, s2 = w1.max(axis=1), w2.max(axis=1)
        viol_nested += int(((s1 > 0.5) & ~(s2 > 0.5)).sum())
        viol_grid += int((s2[:] < w2[:, coarse].max(axis=1) - 1e-12).sum())
    p1 = FbmSampler(n_inc, 0.7, step).sample_batch(
        4, np.random.default_rng(np.random.SeedSequence([SEED, 88])))
    p2 = FbmSampler(n_inc, 0.7, step).sample_batch(
        4, np.random.default_rng(np.random.SeedSequence([SEED, 88])))
    viol_det += int(not np.array_equal(p1, p2))
    checks = [
        (viol_gamma == 0, f"gamma monotonicity violations: {viol_gamma}"),
        (viol_nested == 0, f"nested exceedance violations: {viol_nested}"),
        (viol_grid == 0, f"grid-refinement direction violations: {viol_grid}"),
        (viol_det == 0, f"seed determinism violations: {viol_det}"),
    ]
    return _result(8, "pathwise property suite", checks, started)


def criterion_9_field_lab() -> CriterionResult:
    started = time.perf_counter()
    checks = []
    rank1 = fieldlab.FieldSpec(S=1.0, T=1.0, s0=0.5, t0=0.5, b1=0.0, b2=0.0,
                               beta1=1.5, a1=0.0, a2=0.0)
    f = fieldlab.build_field(rank1, 16)
    est = fieldlab.estimate_field_tail(f, 2.0, 100_000, seed=[SEED, 9])
    target = std_normal_tail(2.0)
    checks.append((abs(est.probability - target) <= 3 * est.std_error,
                   f"rank-1 tail {est.probability:.5f} vs {target:.5f} "
                   f"(3SE={3 * est.std_error:.5f})"))

    provider = ConstantProvider("simulation-backed", [
        ConstantEstimate("pickands-limit", 1.5, None, (0.0, 16.0), 0.01, 0.9, 0.0, 0),
        ConstantEstimate("piterbarg-limit", 1.5, 2.0, (0.0, 16.0), 0.01, 1.6, 0.0, 0),
    ])
    interior = asymptotics.field_tail_mixed(3.0, 1.0, 1.0, 0.5, 1.0, 1.5,
                                            False, True, provider)
    boundary = asymptotics.field_tail_mixed(3.0, 1.0, 1.0, 0.5, 1.0, 1.5,
                                            False, False, provider)
    checks.append((abs(interior.value / boundary.value - 2.0) <= 1e-12,
                   f"interior/boundary theory ratio {interior.value / boundary.value:.12f}"))

    case_iv = asymptotics.field_tail_two_param(
        3.0, 1.0, 1.0, 1.0, 1.0, 1.5, 1.5, 1.0, 1.0, False, False)
    checks.append((abs(case_iv.value - std_normal_tail(3.0)) <= 1e-12,
                   f"case-iv theory {case_iv.value:.6e} vs Psi(3)"))
    return _result(9, "field lab", checks, started)


def criterion_10_trend_honesty() -> CriterionResult:
    started = time.perf_counter()
    checks = []
    # same truncation lesson as the tax-identity criterion: the reflected
    # numerator keeps exceeding long after the free process stops, so the
    # horizon multiplier must be generous for the ratio to bracket
    for u, step in ((1.0, 2.0**-12), (2.0, 2.0**-10)):
        params = ProcessParams(0.5, 1.0, 0.5, math.inf)
        rat = estimate_ratio(params, u, 100_000, step, seed=[SEED, 10, int(u)],
                             kappa=12.0)
        exact = (montecarlo.exact_bm_oracles(u, 1.0, 0.5, math.inf)
                 / math.exp(-2.0 * u))
        checks.append((abs(rat.ratio - exact) <= 3 * rat.std_error,
                       f"u={u}: ratio {rat.ratio:.4f} vs {exact:.4f} "
                       f"(3SE={3 * rat.std_error:.4f})"))
    prev = 1.0
    ok = True
    vals = []
    for g in (0.2, 0.5, 0.8):
        params = ProcessParams(0.5, 1.0, g, 1.0)
        rat = estimate_ratio(params, 1.0, 50_000, 2.0**-8, seed=[SEED, 101])
        ok &= rat.ratio >= max(prev, 1.0) - 1e-12
        prev = rat.ratio
        vals.append(rat.ratio)
    checks.append((ok, "finite-T coupled ratios nondecreasing in gamma: "
                       + ", ".join(f"{v:.4f}" for v in vals)))
    return _result(10, "asymptotic-trend honesty", checks, started)


CRITERIA = [
    criterion_1_covariance_fidelity,
    criterion_2_bm_infinite_horizon,
    criterion_3_tax_identity,
    criterion_4_exact_constants,
    criterion_5_simulated_constants,
    criterion_6_formula_identities,
    criterion_7_maximizer_oracle,
    criterion_8_pathwise_properties,
    criterion_9_field_lab,
    criterion_10_trend_honesty,
]


def run_all(numbers=None) -> list[CriterionResult]:
    results = []
    for i, fn in enumerate(CRITERIA, start=1):
        if numbers is not None and i not in numbers:
            continue
        results.append(fn())
    return results
