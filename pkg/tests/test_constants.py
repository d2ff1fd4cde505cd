import math

import numpy as np
import pytest

from grlab.constants import (
    CHUNK,
    _chunk_rngs,
    exact_constant,
    exact_pickands,
    exact_piterbarg,
    pickands_limit,
    pickands_window,
    piterbarg_limit,
    piterbarg_window,
)
from grlab.errors import DomainError, UnsupportedCaseError

# E exp(sup_{[0,T]} sqrt(2) B(t) - t) for standard Brownian B, computed by
# quadrature from the known distribution of the drifted Brownian maximum:
# P(M_T > x) = Psi((x + T)/sqrt(2T)) + exp(-x) Psi((x - T)/sqrt(2T)).
BROWNIAN_WINDOW_MEAN = {2.0: 3.8490, 4.0: 5.9434, 8.0: 9.9883}


class TestExactValues:
    def test_piterbarg_alpha_one(self):
        for a in (0.25, 1.0, 4.0):
            assert exact_piterbarg(1, a) == pytest.approx(1 + 1 / a, abs=1e-14)

    def test_piterbarg_alpha_two(self):
        for a in (0.5, 1.0, 2.0):
            assert exact_piterbarg(2, a) == pytest.approx(
                0.5 * (1 + math.sqrt(1 + 1 / a)), abs=1e-14)

    def test_pickands(self):
        assert exact_pickands(1) == 1.0
        assert exact_pickands(2) == pytest.approx(1 / math.sqrt(math.pi), abs=1e-14)

    def test_exact_constant_alias(self):
        assert exact_constant(1, 2.0) == exact_piterbarg(1, 2.0)

    def test_no_closed_form_elsewhere(self):
        with pytest.raises(UnsupportedCaseError):
            exact_pickands(1.5)
        with pytest.raises(UnsupportedCaseError):
            exact_piterbarg(1.5, 1.0)

    def test_rejects_nonpositive_a(self):
        with pytest.raises(DomainError):
            exact_piterbarg(1, 0.0)


class TestChunkRngs:
    def test_sizes_cover_total(self):
        sizes = [size for size, _ in _chunk_rngs(0, 3 * CHUNK + 17)]
        assert sum(sizes) == 3 * CHUNK + 17
        assert sizes[:-1] == [CHUNK] * 3 and sizes[-1] == 17

    def test_streams_are_deterministic(self):
        a = [rng.standard_normal(4) for _, rng in _chunk_rngs(123, 2 * CHUNK)]
        b = [rng.standard_normal(4) for _, rng in _chunk_rngs(123, 2 * CHUNK)]
        assert all(np.array_equal(x, y) for x, y in zip(a, b))

    def test_prefix_streams_do_not_depend_on_total(self):
        # Chunk k's stream is a function of (seed, k) only, so adding samples
        # extends a run without disturbing the chunks already drawn.
        a = [rng.standard_normal(2) for _, rng in _chunk_rngs(5, 2 * CHUNK)]
        b = [rng.standard_normal(2) for _, rng in _chunk_rngs(5, 5 * CHUNK)]
        assert all(np.array_equal(x, y) for x, y in zip(a, b[:2]))

    def test_accepts_seed_sequence(self):
        ss = np.random.SeedSequence([1, 2])
        sizes = [size for size, _ in _chunk_rngs(ss, 10)]
        assert sizes == [10]


class TestWindows:
    def test_point_window_is_one(self):
        est = piterbarg_window(1.5, 1.0, 0.0, 0.0)
        assert est.estimate == 1.0 and est.std_error == 0.0

    def test_determinism(self):
        a = pickands_window(1, 2.0, n_samples=5_000, seed=7)
        b = pickands_window(1, 2.0, n_samples=5_000, seed=7)
        assert a.estimate == b.estimate and a.std_error == b.std_error

    def test_brownian_window_against_quadrature(self):
        # grid suprema bias the estimate low, so the check is one-sided plus
        # a bias allowance
        est = pickands_window(1, 2.0, grid_step=0.005, n_samples=60_000, seed=3)
        target = BROWNIAN_WINDOW_MEAN[2.0]
        assert est.estimate <= target + 3 * est.std_error
        assert est.estimate >= 0.90 * target

    def test_windows_grow_with_length(self):
        est = pickands_limit(1, ladder=(1.0, 2.0, 4.0), n_samples=20_000, seed=1)
        vals = est.metadata["window_estimates"]
        assert vals == sorted(vals)

    def test_alpha_two_window_converges_to_exact(self):
        # for alpha = 2 the sup is N^2/(2(1+a)) on {N > 0}, so even a modest
        # window is already near the limit (1 + sqrt(2))/2
        est = piterbarg_window(2, 1.0, 0.0, 8.0, n_samples=50_000, seed=5)
        assert est.estimate == pytest.approx(0.5 * (1 + math.sqrt(2)), rel=0.03)

    def test_two_sided_alpha_two_limit(self):
        # sup over R of sqrt(2) N t - (1+a) t^2 is N^2 / (2(1+a)), so the
        # two-sided constant is E exp(N^2/4) = sqrt(2) at a = 1
        est = piterbarg_limit(2, 1.0, "two-sided", ladder=(2.0, 4.0),
                              n_samples=50_000, seed=6)
        assert est.estimate == pytest.approx(math.sqrt(2.0), rel=0.03)

    def test_validation(self):
        with pytest.raises(DomainError):
            pickands_window(3.0, 2.0)
        with pytest.raises(DomainError):
            pickands_window(1, -1.0)
        with pytest.raises(DomainError):
            piterbarg_window(1, 1.0, -1.0, 2.0)
        with pytest.raises(DomainError):
            piterbarg_limit(1, 1.0, sidedness="sideways")
        with pytest.raises(DomainError):
            pickands_limit(1, ladder=(4.0,))
        with pytest.raises(DomainError):
            pickands_limit(1, ladder=(4.0, 2.0))


class TestLimits:
    def test_metadata_carries_ladder(self):
        est = piterbarg_limit(2, 1.0, ladder=(1.0, 2.0), n_samples=10_000, seed=2)
        assert est.metadata["ladder"] == [1.0, 2.0]
        assert len(est.metadata["window_estimates"]) == 2
        assert est.metadata["biased_low"]

    def test_pickands_limit_slope_brownian(self):
        # the Brownian window mean is T + 2 + o(1), so the fitted slope must
        # sit near 1 even at desk sample sizes
        est = pickands_limit(1, ladder=(2.0, 4.0, 8.0), grid_step=0.005,
                             n_samples=60_000, seed=8)
        assert est.estimate == pytest.approx(1.0, abs=0.2)

    def test_limit_determinism(self):
        a = piterbarg_limit(2, 0.5, ladder=(1.0, 2.0), n_samples=5_000, seed=3)
        b = piterbarg_limit(2, 0.5, ladder=(1.0, 2.0), n_samples=5_000, seed=3)
        assert a.estimate == b.estimate
