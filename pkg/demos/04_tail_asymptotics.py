"""Closed-form tail asymptotics and the reflected/free ratio.

The headline result the toolkit packages: the gamma-reflected supremum tail is
a constant multiple of the free tail,

    psi_gamma(u) / psi_0(u)  ->  M(H, gamma, T)   as u -> infinity,

with M given by a Piterbarg constant on the infinite horizon (exact 1/(1-gamma)
at H = 1/2), by 2/(2-gamma) at H = 1/2 on a finite horizon, and collapsing to 1
for smooth inputs (H > 1/2, finite T).  This script prints the formula values
and then checks the infinite-horizon Brownian ratio against coupled Monte Carlo.

Run:  python3 demos/04_tail_asymptotics.py   (about a minute)
"""
import math

from grlab import ProcessParams, psi0_inf, psi_gamma_inf, ratio_constant
from grlab.montecarlo import estimate_ratio, exact_bm_oracles

print("ratio constants M(H, gamma, T):")
print(f"{'H':>5} {'gamma':>6} {'T':>5} {'M':>8}")
for hurst, gamma, horizon in (
    (0.5, 0.25, math.inf), (0.5, 0.5, math.inf), (0.5, 0.75, math.inf),
    (0.5, 0.5, 1.0), (0.75, 0.5, 1.0), (0.75, 0.5, math.inf),
):
    try:
        value, prov = ratio_constant(hurst, gamma, horizon)
        shown = f"{value:.4f} ({prov})"
    except Exception as exc:
        shown = f"needs estimate ({type(exc).__name__})"
    t_label = "inf" if math.isinf(horizon) else f"{horizon:g}"
    print(f"{hurst:>5} {gamma:>6} {t_label:>5}  {shown}")

print()
print("asymptotic formula vs the exact Brownian law (H = 1/2, gamma = 0.5):")
print(f"{'u':>4} {'formula':>12} {'exact law':>12} {'ratio':>7}")
for u in (1.0, 2.0, 4.0, 8.0):
    formula = psi_gamma_inf(u, 0.5, 1.0, 0.5).value
    exact = exact_bm_oracles(u, 1.0, 0.5, math.inf)
    print(f"{u:>4} {formula:>12.3e} {exact:>12.3e} {formula / exact:>7.4f}")
print("(the u -> infinity statement: the ratio drifts to 1 as u grows)")

print()
print("coupled Monte Carlo ratio at u = 1 vs the limit constant:")
params = ProcessParams(0.5, 1.0, 0.5, math.inf)
est = estimate_ratio(params, 1.0, 50_000, 2.0**-10, seed=4)
limit, _ = ratio_constant(0.5, 0.5, math.inf)
exact_u1 = (exact_bm_oracles(1.0, 1.0, 0.5, math.inf)
            / exact_bm_oracles(1.0, 1.0, 0.0, math.inf))
print(f"  MC ratio      {est.ratio:.4f} +/- {est.std_error:.4f}")
print(f"  exact at u=1  {exact_u1:.4f}")
print(f"  u -> inf      {limit:.4f}")
