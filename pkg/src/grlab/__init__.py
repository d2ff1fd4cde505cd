"""grlab: simulation and verification toolkit for gamma-reflected processes
with fractional Brownian motion input.

Subpackages:
    fbm         exact fBm sampling (circulant embedding, Cholesky fallback)
    reflected   the gamma-reflected process, its supremum and surplus
    constants   Monte Carlo Pickands / Piterbarg constants and closed forms
    asymptotics closed-form tail formulas, variance functions, field tails
    montecarlo  tail / ratio estimation with exact Brownian oracles
    fieldlab    2-D Gaussian field builder and theory comparison
    acceptance  the executable acceptance criteria
    cli         command-line front end
"""

__version__ = "0.1.0"

from .errors import (
    ConstantUnavailableError,
    DiagnosticsError,
    DomainError,
    FieldBuildError,
    GrlabError,
    InsufficientSamplesError,
    ResourceError,
    UnsupportedCaseError,
)
from .fbm import (
    SampledPath,
    TimeGrid,
    fbm_covariance,
    sample_degenerate_fbm,
    sample_drifted_fbm,
    sample_fbm,
)
from .reflected import ProcessParams, ReflectedPath, reflect, supremum, surplus
from .constants import (
    ConstantEstimate,
    exact_constant,
    exact_pickands,
    exact_piterbarg,
    pickands_limit,
    pickands_window,
    piterbarg_limit,
    piterbarg_window,
)
from .asymptotics import (
    AsymptoticValue,
    ConstantProvider,
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
from .montecarlo import (
    RatioEstimate,
    TailEstimate,
    estimate_ratio,
    estimate_tail,
    estimate_tail_infinite,
    exact_bm_oracles,
)
from .fieldlab import FieldSpec, GridField, build_field, compare_to_theory, \
    estimate_field_tail, theory_value
