import math

import numpy as np
import pytest
from scipy.stats import norm

from grlab.asymptotics import (
    ConstantProvider,
    EXACT_PROVIDER,
    field_tail_mixed,
    field_tail_two_param,
    maximizer_Y,
    psi0_finite,
    psi0_inf,
    psi_gamma_finite,
    psi_gamma_inf,
    ratio_constant,
    std_normal_tail,
    variance_Y,
    variance_Z,
)
from grlab.constants import ConstantEstimate, exact_piterbarg
from grlab.errors import ConstantUnavailableError, DomainError, UnsupportedCaseError


def make_provider(entries):
    """simulation-backed provider from (kind, alpha, a, value) tuples."""
    return ConstantProvider("simulation-backed", [
        ConstantEstimate(kind, alpha, a, (0.0, 16.0), 0.01, value, 0.0, 0)
        for kind, alpha, a, value in entries
    ])


class TestStdNormalTail:
    def test_matches_scipy(self):
        x = np.array([-2.0, 0.0, 1.0, 5.0])
        assert np.allclose(std_normal_tail(x), norm.sf(x), rtol=1e-12)

    def test_far_tail_accuracy(self):
        # the erfc route stays accurate where 1 - cdf would underflow to junk
        assert std_normal_tail(38.0) == pytest.approx(norm.sf(38.0), rel=1e-10)


class TestInfiniteHorizon:
    def test_brownian_reduction(self):
        # at H = 1/2 the formula collapses to 2 sqrt(2 pi c u) Psi(2 sqrt(cu))
        for u, c in ((4.0, 1.0), (10.0, 0.5), (2.0, 3.0)):
            got = psi0_inf(u, 0.5, c).value
            ref = 2 * math.sqrt(2 * math.pi * c * u) * std_normal_tail(2 * math.sqrt(c * u))
            assert got == pytest.approx(ref, rel=1e-12)

    def test_brownian_limit_matches_exact_law(self):
        # the asymptotic approaches exp(-2cu) as u grows
        assert psi0_inf(50.0, 0.5, 1.0).value == pytest.approx(
            math.exp(-100.0), rel=1e-3)

    def test_reflected_brownian_ratio(self):
        # psi_gamma / psi_0 = P_1^{(1-gamma)/gamma} = 1/(1-gamma) at H = 1/2
        for g in (0.2, 0.5, 0.9):
            num = psi_gamma_inf(3.0, 0.5, 1.0, g).value
            den = psi0_inf(3.0, 0.5, 1.0).value
            assert num / den == pytest.approx(1.0 / (1.0 - g), rel=1e-12)

    def test_psi_argument_and_power(self):
        h, c, u = 0.75, 2.0, 5.0
        provider = make_provider([("pickands-limit", 1.5, None, 0.8)])
        v = psi0_inf(u, h, c, provider)
        assert v.psi_argument == pytest.approx(
            c**h * u ** (1 - h) / (h**h * (1 - h) ** (1 - h)))
        assert v.power_exponent == pytest.approx(1 / h - 1)
        assert v.value == pytest.approx(v.prefactor * std_normal_tail(v.psi_argument))

    def test_constant_provenance_recorded(self):
        provider = make_provider([
            ("pickands-limit", 1.4, None, 0.8),
            ("piterbarg-limit", 1.4, 1.0, 1.7),
        ])
        v = psi_gamma_inf(2.0, 0.7, 1.0, 0.5, provider)
        provs = {name: prov for name, _, prov in v.constants_used}
        assert set(provs.values()) == {"estimated"}

    def test_exact_only_refuses_unknown_alpha(self):
        with pytest.raises(ConstantUnavailableError):
            psi0_inf(2.0, 0.7, 1.0, EXACT_PROVIDER)

    def test_domain_validation(self):
        with pytest.raises(DomainError):
            psi0_inf(-1.0, 0.5, 1.0)
        with pytest.raises(DomainError):
            psi_gamma_inf(1.0, 0.5, 1.0, 1.0)
        with pytest.raises(DomainError):
            psi0_inf(1.0, 1.0, 1.0)


class TestFiniteHorizon:
    def test_brownian_prefactors(self):
        u, c, t = 2.0, 1.0, 1.0
        arg = (u + c * t) / t**0.5
        assert psi0_finite(u, 0.5, c, t).value == pytest.approx(
            2.0 * std_normal_tail(arg), rel=1e-12)
        for g in (0.3, 0.7):
            assert psi_gamma_finite(u, 0.5, c, g, t).value == pytest.approx(
                4.0 / (2.0 - g) * std_normal_tail(arg), rel=1e-12)
        assert psi_gamma_finite(u, 0.5, c, 1.0, t).value == pytest.approx(
            4.0 * std_normal_tail(arg), rel=1e-12)

    def test_high_hurst_prefactor_is_one(self):
        u, c, t = 2.0, 0.75, 1.5
        arg = (u + c * t) / t**0.75
        assert psi0_finite(u, 0.75, c, t).value == pytest.approx(
            std_normal_tail(arg), rel=1e-12)
        assert psi_gamma_finite(u, 0.75, c, 0.5, t).value == pytest.approx(
            std_normal_tail(arg), rel=1e-12)

    def test_low_hurst_uses_constants(self):
        provider = make_provider([
            ("pickands-limit", 0.6, None, 1.1),
            ("piterbarg-limit", 0.6, 1.0, 2.2),
        ])
        h = 0.3
        u, c, t = 2.0, 1.0, 1.0
        arg = (u + c * t) / t**h
        power = (1 - 2 * h) / h
        free = psi0_finite(u, h, c, t, provider)
        assert free.value == pytest.approx(
            2 ** (-1 / (2 * h)) / h * 1.1 * arg**power * std_normal_tail(arg),
            rel=1e-12)
        half = psi_gamma_finite(u, h, c, 0.5, t, provider)
        assert half.value == pytest.approx(free.value * 2.2, rel=1e-12)
        full = psi_gamma_finite(u, h, c, 1.0, t, provider)
        assert full.value == pytest.approx(
            2 ** (-1 / h) / h**2 * 1.1**2 * arg**power * std_normal_tail(arg),
            rel=1e-12)

    def test_rejects_infinite_horizon(self):
        with pytest.raises(DomainError):
            psi0_finite(1.0, 0.5, 1.0, math.inf)


class TestRatioConstant:
    def test_infinite_horizon_brownian(self):
        for g in (0.25, 0.5, 0.8):
            value, prov = ratio_constant(0.5, g, math.inf)
            assert value == pytest.approx(1.0 / (1.0 - g), rel=1e-12)
            assert prov == "exact"

    def test_finite_horizon_brownian(self):
        for g in (0.25, 0.5, 0.8):
            value, _ = ratio_constant(0.5, g, 1.0)
            assert value == pytest.approx(2.0 / (2.0 - g), rel=1e-12)
            assert value == pytest.approx(exact_piterbarg(1.0, (2 - g) / g), rel=1e-12)

    def test_finite_horizon_high_hurst_is_one(self):
        assert ratio_constant(0.75, 0.3, 1.0) == (1.0, "exact")

    def test_consistency_with_tail_formulas(self):
        provider = make_provider([
            ("pickands-limit", 1.2, None, 0.77),
            ("piterbarg-limit", 1.2, 1.5, 1.9),
        ])
        h, g, u = 0.6, 0.4, 7.0
        num = psi_gamma_inf(u, h, 1.0, g, provider).value
        den = psi0_inf(u, h, 1.0, provider).value
        target, _ = ratio_constant(h, g, math.inf, provider)
        assert num / den == pytest.approx(target, rel=1e-12)


class TestVarianceFunctions:
    def test_variance_z_free_case(self):
        assert variance_Z(0.7, 2.0, 0.7, 0.0) == pytest.approx(2.0**0.7)

    def test_variance_z_direct_form(self):
        h, g, s, t = 0.65, 0.4, 0.5, 2.0
        var = ((1 - g) * t ** (2 * h) + (g**2 - g) * s ** (2 * h)
               + g * (t - s) ** (2 * h))
        assert variance_Z(s, t, h, g) == pytest.approx(math.sqrt(var), rel=1e-12)

    def test_variance_y_normalization(self):
        h, g, c = 0.65, 0.4, 1.5
        s, t = 0.5, 2.0
        assert variance_Y(s, t, h, g, c) == pytest.approx(
            variance_Z(s, t, h, g) / (1 + c * t - c * g * s), rel=1e-12)

    def test_rejects_unordered_arguments(self):
        with pytest.raises(DomainError):
            variance_Z(2.0, 1.0, 0.5, 0.5)

    def test_maximizer_location_and_value(self):
        for h, c in ((0.3, 1.0), (0.5, 2.0), (0.8, 0.5)):
            s0, t0, value = maximizer_Y(h, c)
            assert s0 == 0.0
            assert t0 == pytest.approx(h / (c * (1 - h)))
            assert variance_Y(0.0, t0, h, 0.5, c) == pytest.approx(value, rel=1e-12)

    def test_maximizer_dominates_grid(self):
        h, c = 0.6, 1.0
        _, _, value = maximizer_Y(h, c)
        t = np.linspace(0.01, 10.0, 400)
        for frac in (0.0, 0.3, 0.9):
            assert value >= variance_Y(frac * t, t, h, 0.5, c).max() - 1e-12


class TestFieldTails:
    def test_mixed_interior_doubling(self):
        provider = make_provider([
            ("pickands-limit", 1.5, None, 0.9),
            ("piterbarg-limit", 1.5, 2.0, 1.6),
            ("piterbarg-twosided", 1.5, 2.0, 2.9),
        ])
        base = field_tail_mixed(3.0, 1.0, 1.0, 0.5, 1.0, 1.5, False, False, provider)
        t_int = field_tail_mixed(3.0, 1.0, 1.0, 0.5, 1.0, 1.5, False, True, provider)
        s_int = field_tail_mixed(3.0, 1.0, 1.0, 0.5, 1.0, 1.5, True, False, provider)
        assert t_int.value == pytest.approx(2.0 * base.value, rel=1e-12)
        assert s_int.value == pytest.approx(base.value * 2.9 / 1.6, rel=1e-12)

    def test_mixed_scaling_in_u(self):
        provider = make_provider([
            ("pickands-limit", 1.5, None, 0.9),
            ("piterbarg-limit", 1.5, 2.0, 1.6),
        ])
        beta = 1.5
        v1 = field_tail_mixed(2.0, 1.0, 1.0, 0.5, 1.0, beta, False, True, provider)
        v2 = field_tail_mixed(4.0, 1.0, 1.0, 0.5, 1.0, beta, False, True, provider)
        assert v2.prefactor / v1.prefactor == pytest.approx(
            2.0 ** (2 / beta - 1), rel=1e-12)

    def test_mixed_rejects_bad_beta(self):
        with pytest.raises(DomainError):
            field_tail_mixed(3.0, 1.0, 1.0, 0.5, 1.0, 2.5, False, False)

    def test_two_param_degenerate_case_is_point_tail(self):
        v = field_tail_two_param(3.0, 1.0, 1.0, 1.0, 1.0, 1.5, 1.5, 1.0, 1.0,
                                 True, True)
        assert v.value == pytest.approx(std_normal_tail(3.0), rel=1e-12)
        assert v.prefactor == 1.0

    def test_two_param_matched_exponents_brownian(self):
        # alpha_i = beta_i = 1 on the boundary: product of exact P_1 constants
        v = field_tail_two_param(2.0, 2.0, 3.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0,
                                 False, False)
        expected = exact_piterbarg(1, 0.5) * exact_piterbarg(1, 1 / 3)
        assert v.prefactor == pytest.approx(expected, rel=1e-12)

    def test_two_param_symmetric_cases_agree(self):
        # swapping the coordinate roles must swap the answer's structure
        provider = make_provider([
            ("pickands-limit", 1.0, None, 1.0),
            ("piterbarg-limit", 1.5, 2.0, 1.7),
        ])
        a = field_tail_two_param(3.0, 1.0, 1.0, 1.0, 2.0, 1.0, 1.5, 2.0, 1.5,
                                 False, False, provider)
        b = field_tail_two_param(3.0, 1.0, 1.0, 2.0, 1.0, 1.5, 1.0, 1.5, 2.0,
                                 False, False, provider)
        assert a.value == pytest.approx(b.value, rel=1e-12)

    def test_two_param_uncovered_combination(self):
        with pytest.raises(UnsupportedCaseError):
            field_tail_two_param(3.0, 1.0, 1.0, 1.0, 1.0, 1.8, 1.0, 1.5, 2.0,
                                 False, False)

    def test_two_param_interior_doubles_pickands_direction(self):
        v_b = field_tail_two_param(2.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 2.0, 2.0,
                                   False, False)
        v_i = field_tail_two_param(2.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 2.0, 2.0,
                                   True, False)
        assert v_i.value == pytest.approx(2.0 * v_b.value, rel=1e-12)
