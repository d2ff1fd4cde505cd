"""Monte Carlo vs the exact Brownian-input laws.

For H = 1/2 every quantity the toolkit estimates has a closed form, which
makes the Brownian case the calibration bench for the whole pipeline:

    free supremum tail     P(sup (B - ct) > u)        = exp(-2cu)
    reflected ("tax") tail psi_gamma(u)               = 1 - (1 - e^{-2cu})^{1/(1-gamma)}
    finite horizon         reflection formula with two normal tails

Grid suprema are biased low, so the estimates should sit slightly under the
exact values and approach them as the grid step shrinks.

Run:  python3 demos/02_brownian_ground_truth.py   (about a minute)
"""
import math

from grlab import ProcessParams
from grlab.montecarlo import (
    estimate_tail,
    estimate_tail_infinite,
    exact_bm_oracles,
)

u, c, n = 1.0, 1.0, 50_000

print("infinite horizon, free process (gamma = 0):")
exact = exact_bm_oracles(u, c, 0.0, math.inf)
for step in (2.0**-6, 2.0**-8, 2.0**-10):
    params = ProcessParams(0.5, c, 0.0, math.inf)
    est = estimate_tail_infinite(params, u, n, step, seed=1)
    print(f"  step 2^{int(math.log2(step)):>4}: "
          f"{est.probability:.5f} +/- {est.std_error:.5f}   exact {exact:.5f}")

print()
print("infinite horizon, gamma = 0.5 (loss-carry-forward tax):")
exact = exact_bm_oracles(u, c, 0.5, math.inf)
for step in (2.0**-6, 2.0**-8, 2.0**-10):
    params = ProcessParams(0.5, c, 0.5, math.inf)
    est = estimate_tail_infinite(params, u, n, step, seed=2)
    print(f"  step 2^{int(math.log2(step)):>4}: "
          f"{est.probability:.5f} +/- {est.std_error:.5f}   exact {exact:.5f}")

print()
print("finite horizon T = 1, free process:")
exact = exact_bm_oracles(0.5, c, 0.0, 1.0)
for step in (2.0**-6, 2.0**-8, 2.0**-10):
    params = ProcessParams(0.5, c, 0.0, 1.0)
    est = estimate_tail(params, 0.5, n, step, seed=3)
    print(f"  step 2^{int(math.log2(step)):>4}: "
          f"{est.probability:.5f} +/- {est.std_error:.5f}   exact {exact:.5f}")
