"""Closed-form tail asymptotics for the reflected process and Gaussian fields.

Every evaluator returns an AsymptoticValue that separates the prefactor, the
argument handed to the normal survival function, and the provenance (exact or
simulation-estimated) of every Pickands/Piterbarg constant used.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfc, gamma as euler_gamma

from .constants import ConstantEstimate, exact_pickands, exact_piterbarg
from .errors import ConstantUnavailableError, DomainError, UnsupportedCaseError


def std_normal_tail(x):
    """Survival function of N(0,1) via erfc, accurate far into the tail."""
    out = 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class AsymptoticValue:
    """value = prefactor * Psi(psi_argument); the power term is inside the prefactor."""

    value: float
    prefactor: float
    psi_argument: float
    power_exponent: float
    constants_used: list[tuple[str, float, str]] = field(default_factory=list)


def _make(prefactor, psi_arg, power_exponent, constants_used):
    return AsymptoticValue(
        value=prefactor * std_normal_tail(psi_arg),
        prefactor=prefactor,
        psi_argument=psi_arg,
        power_exponent=power_exponent,
        constants_used=list(constants_used),
    )


class ConstantProvider:
    """Source of Pickands/Piterbarg constants for the asymptotic formulas.

    mode='exact-only' serves the closed forms (alpha in {1, 2}) and refuses
    anything else; mode='simulation-backed' additionally serves attached
    ConstantEstimate values, tagging them as estimated.
    """

    def __init__(self, mode: str = "exact-only",
                 estimates: list[ConstantEstimate] | None = None):
        if mode not in ("exact-only", "simulation-backed"):
            raise DomainError(f"unknown provider mode {mode!r}")
        if mode == "exact-only" and estimates:
            raise DomainError("exact-only providers cannot carry estimates")
        self.mode = mode
        self._estimates = list(estimates or [])

    def attach(self, estimate: ConstantEstimate):
        if self.mode != "simulation-backed":
            raise DomainError("cannot attach estimates to an exact-only provider")
        self._estimates.append(estimate)

    def _lookup(self, kind: str, alpha: float, a: float | None):
        for est in self._estimates:
            if est.kind != kind:
                continue
            if not math.isclose(est.alpha, alpha, rel_tol=1e-12, abs_tol=1e-12):
                continue
            if a is None and est.a is None:
                return est
            if a is not None and est.a is not None and math.isclose(est.a, a, rel_tol=1e-12):
                return est
        return None

    def pickands(self, alpha: float):
        """(value, provenance) for the Pickands constant H_alpha."""
        if alpha in (1.0, 2.0):
            return exact_pickands(alpha), "exact"
        est = self._lookup("pickands-limit", alpha, None)
        if est is not None:
            return est.estimate, "estimated"
        raise ConstantUnavailableError(
            f"Pickands constant at alpha={alpha} has no exact value"
            + ("" if self.mode == "simulation-backed" else " (exact-only mode)")
            + " and no attached estimate"
        )

    def piterbarg(self, alpha: float, a: float, two_sided: bool = False):
        """(value, provenance) for P_alpha^a (or its two-sided variant)."""
        if not two_sided and alpha in (1.0, 2.0):
            return exact_piterbarg(alpha, a), "exact"
        kind = "piterbarg-twosided" if two_sided else "piterbarg-limit"
        est = self._lookup(kind, alpha, a)
        if est is not None:
            return est.estimate, "estimated"
        name = ("two-sided " if two_sided else "") + f"Piterbarg constant (alpha={alpha}, a={a})"
        raise ConstantUnavailableError(
            f"{name} has no exact value"
            + ("" if self.mode == "simulation-backed" else " (exact-only mode)")
            + " and no attached estimate"
        )


EXACT_PROVIDER = ConstantProvider("exact-only")


def _check_inf_params(u, H, c):
    if not (0.0 < H < 1.0):
        raise DomainError(f"H must lie in (0, 1), got {H}")
    if u <= 0:
        raise DomainError(f"u must be positive, got {u}")
    if c <= 0:
        raise DomainError(f"c must be positive, got {c}")


def _inf_psi_argument(u, H, c):
    return c**H * u ** (1 - H) / (H**H * (1 - H) ** (1 - H))


def psi0_inf(u, H, c, provider: ConstantProvider = EXACT_PROVIDER) -> AsymptoticValue:
    """Infinite-horizon tail of the free drifted fBm supremum (gamma = 0)."""
    _check_inf_params(u, H, c)
    hval, hprov = provider.pickands(2 * H)
    arg = _inf_psi_argument(u, H, c)
    power = 1.0 / H - 1.0
    pref = (
        2 ** (0.5 - 1.0 / (2 * H))
        * math.sqrt(math.pi) / math.sqrt(H * (1 - H))
        * hval * arg**power
    )
    return _make(pref, arg, power, [(f"pickands({2 * H})", hval, hprov)])


def psi_gamma_inf(u, H, c, gamma,
                  provider: ConstantProvider = EXACT_PROVIDER) -> AsymptoticValue:
    """Infinite-horizon tail of the gamma-reflected supremum, gamma in (0, 1)."""
    _check_inf_params(u, H, c)
    if not (0.0 < gamma < 1.0):
        raise DomainError(f"gamma must lie in (0, 1), got {gamma}")
    hval, hprov = provider.pickands(2 * H)
    a = (1 - gamma) / gamma
    pval, pprov = provider.piterbarg(2 * H, a)
    arg = _inf_psi_argument(u, H, c)
    power = 1.0 / H - 1.0
    pref = (
        2 ** (0.5 - 1.0 / (2 * H))
        * math.sqrt(math.pi) / math.sqrt(H * (1 - H))
        * hval * pval * arg**power
    )
    return _make(pref, arg, power, [
        (f"pickands({2 * H})", hval, hprov),
        (f"piterbarg({2 * H}, {a})", pval, pprov),
    ])


def psi0_finite(u, H, c, T,
                provider: ConstantProvider = EXACT_PROVIDER) -> AsymptoticValue:
    """Finite-horizon tail of the free drifted fBm supremum (gamma = 0)."""
    if not (0.0 < H <= 1.0):
        raise DomainError(f"H must lie in (0, 1], got {H}")
    if T <= 0 or math.isinf(T):
        raise DomainError(f"T must be finite and positive, got {T}")
    if c <= 0:
        raise DomainError(f"c must be positive, got {c}")
    constants = []
    if H < 0.5:
        hval, hprov = provider.pickands(2 * H)
        d = 2 ** (-1.0 / (2 * H)) / H * hval
        constants.append((f"pickands({2 * H})", hval, hprov))
    elif H == 0.5:
        d = 2.0
    else:
        d = 1.0
    arg = (u + c * T) / T**H
    power = max(1 - 2 * H, 0.0) / H
    return _make(d * arg**power, arg, power, constants)


def psi_gamma_finite(u, H, c, gamma, T,
                     provider: ConstantProvider = EXACT_PROVIDER) -> AsymptoticValue:
    """Finite-horizon tail of the gamma-reflected supremum, gamma in (0, 1]."""
    if not (0.0 < H <= 1.0):
        raise DomainError(f"H must lie in (0, 1], got {H}")
    if not (0.0 < gamma <= 1.0):
        raise DomainError(f"gamma must lie in (0, 1], got {gamma}")
    if T <= 0 or math.isinf(T):
        raise DomainError(f"T must be finite and positive, got {T}")
    if c <= 0:
        raise DomainError(f"c must be positive, got {c}")
    constants = []
    if H < 0.5:
        hval, hprov = provider.pickands(2 * H)
        constants.append((f"pickands({2 * H})", hval, hprov))
        if gamma < 1.0:
            a = (1 - gamma) / gamma
            pval, pprov = provider.piterbarg(2 * H, a)
            constants.append((f"piterbarg({2 * H}, {a})", pval, pprov))
            d = 2 ** (-1.0 / (2 * H)) / H * hval * pval
        else:
            d = 2 ** (-1.0 / H) / H**2 * hval**2
    elif H == 0.5:
        d = 4.0 / (2 - gamma) if gamma < 1.0 else 4.0
    else:
        d = 1.0
    arg = (u + c * T) / T**H
    power = max(1 - 2 * H, 0.0) / H
    return _make(d * arg**power, arg, power, constants)


def ratio_constant(H, gamma, T,
                   provider: ConstantProvider = EXACT_PROVIDER):
    """Limit of psi_gamma / psi_0 as u grows; returns (value, provenance)."""
    if not (0.0 < H < 1.0):
        raise DomainError(f"H must lie in (0, 1), got {H}")
    if not (0.0 < gamma < 1.0):
        raise DomainError(f"gamma must lie in (0, 1), got {gamma}")
    if T <= 0:
        raise DomainError(f"T must be positive, got {T}")
    if math.isinf(T) or H < 0.5:
        value, prov = provider.piterbarg(2 * H, (1 - gamma) / gamma)
    elif H == 0.5:
        value, prov = exact_piterbarg(1.0, (2 - gamma) / gamma), "exact"
    else:
        value, prov = 1.0, "exact"
    return value, prov


# ---------------------------------------------------------------------------
# variance functions and the maximizer lemma
# ---------------------------------------------------------------------------

def variance_Z(s, t, H, gamma):
    """Standard deviation of X(t) - gamma*X(s) for 0 <= s <= t."""
    if np.any(np.asarray(s) > np.asarray(t)) or np.any(np.asarray(s) < 0):
        raise DomainError("variance_Z requires 0 <= s <= t")
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    var = (1 - gamma) * t ** (2 * H) + (gamma**2 - gamma) * s ** (2 * H) \
        + gamma * (t - s) ** (2 * H)
    out = np.sqrt(var)
    return out if out.ndim else float(out)


def variance_Y(s, t, H, gamma, c):
    """Standard deviation of the standardized ratio field Y(s, t)."""
    z = variance_Z(s, t, H, gamma)
    out = z / (1.0 + c * np.asarray(t, dtype=float) - c * gamma * np.asarray(s, dtype=float))
    return out if out.ndim else float(out)


def maximizer_Y(H, c):
    """Unique maximizer of variance_Y over {0 <= s <= t}: (0, H/(c(1-H)), value)."""
    if not (0.0 < H < 1.0):
        raise DomainError(f"H must lie in (0, 1), got {H}")
    if c <= 0:
        raise DomainError(f"c must be positive, got {c}")
    t0 = H / (c * (1 - H))
    value = H**H * (1 - H) ** (1 - H) / c**H
    return 0.0, t0, value


# ---------------------------------------------------------------------------
# non-homogeneous Gaussian field tails
# ---------------------------------------------------------------------------

def _p_hat(provider, beta, ratio, interior):
    val, prov = provider.piterbarg(beta, ratio, two_sided=interior)
    name = ("piterbarg-twosided" if interior else "piterbarg") + f"({beta}, {ratio})"
    return val, (name, val, prov)


def field_tail_mixed(u, b1, b2, a1, a2, beta, s0_interior, t0_interior,
                     provider: ConstantProvider = EXACT_PROVIDER) -> AsymptoticValue:
    """Tail of a 2-D field with a beta-power s-direction and quadratic t-direction.

    The value does not depend on the mixed-term rate b3; b3 only affects the
    validity region of the expansion.
    """
    if not (1.0 < beta < 2.0):
        raise DomainError(f"beta must lie in (1, 2), got {beta}")
    for name, val in (("b1", b1), ("b2", b2), ("a1", a1), ("a2", a2)):
        if val <= 0:
            raise DomainError(f"{name} must be positive, got {val}")
    if u <= 0:
        raise DomainError(f"u must be positive, got {u}")
    pval, prec = _p_hat(provider, beta, b1 / a1, s0_interior)
    hval, hprov = provider.pickands(beta)
    i2 = 2.0 if t0_interior else 1.0
    power = 2.0 / beta - 1.0
    pref = pval * i2 * hval * math.sqrt(math.pi) * a2 ** (1.0 / beta) \
        / (2.0 * math.sqrt(b2)) * u**power
    return _make(pref, u, power, [prec, (f"pickands({beta})", hval, hprov)])


def field_tail_two_param(u, a1, a2, b1, b2, alpha1, alpha2, beta1, beta2,
                         s0_interior, t0_interior,
                         provider: ConstantProvider = EXACT_PROVIDER) -> AsymptoticValue:
    """Tail of a 2-D field with separable power expansions in both directions.

    Dispatches on the comparison of the correlation exponents alpha_i against
    the standard-deviation exponents beta_i; combinations matching no covered
    case raise UnsupportedCaseError rather than guessing.  The case with the
    coordinate roles of (alpha1 = beta1, alpha2 < beta2) is handled by symmetry.
    """
    if u <= 0:
        raise DomainError(f"u must be positive, got {u}")
    for name, val in (("a1", a1), ("a2", a2), ("b1", b1), ("b2", b2),
                      ("beta1", beta1), ("beta2", beta2)):
        if val <= 0:
            raise DomainError(f"{name} must be positive, got {val}")
    for name, val in (("alpha1", alpha1), ("alpha2", alpha2)):
        if not (0.0 < val <= 2.0):
            raise DomainError(f"{name} must lie in (0, 2], got {val}")

    constants = []

    def pickands_factor(alpha, beta, a, b, interior):
        hval, hprov = provider.pickands(alpha)
        constants.append((f"pickands({alpha})", hval, hprov))
        i_hat = 2.0 if interior else 1.0
        return (hval * a ** (1.0 / alpha) * b ** (-1.0 / beta) * i_hat
                * euler_gamma(1.0 / beta + 1.0)), 2.0 / alpha - 2.0 / beta

    def piterbarg_factor(alpha, a, b, interior):
        pval, rec = _p_hat(provider, alpha, b / a, interior)
        constants.append(rec)
        return pval

    if alpha1 < beta1 and alpha2 < beta2:
        f1, p1 = pickands_factor(alpha1, beta1, a1, b1, s0_interior)
        f2, p2 = pickands_factor(alpha2, beta2, a2, b2, t0_interior)
        power = p1 + p2
        pref = f1 * f2 * u**power
    elif alpha1 < beta1 and alpha2 == beta2:
        f1, power = pickands_factor(alpha1, beta1, a1, b1, s0_interior)
        pref = f1 * piterbarg_factor(alpha2, a2, b2, t0_interior) * u**power
    elif alpha1 == beta1 and alpha2 < beta2:
        f2, power = pickands_factor(alpha2, beta2, a2, b2, t0_interior)
        pref = f2 * piterbarg_factor(alpha1, a1, b1, s0_interior) * u**power
    elif alpha1 == beta1 and alpha2 == beta2:
        power = 0.0
        pref = (piterbarg_factor(alpha1, a1, b1, s0_interior)
                * piterbarg_factor(alpha2, a2, b2, t0_interior))
    elif alpha1 > beta1 and alpha2 > beta2:
        power = 0.0
        pref = 1.0
    else:
        raise UnsupportedCaseError(
            f"exponent combination alpha=({alpha1}, {alpha2}), "
            f"beta=({beta1}, {beta2}) matches no covered case"
        )
    return _make(pref, u, power, constants)
