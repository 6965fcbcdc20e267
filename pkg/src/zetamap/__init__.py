"""Numerical laboratory for the Montgomery-inspired map x -> 1 - sinc(pi/x)^2 + 1/x."""

from .dynamics import (
    LARGE_X_EXPONENT,
    LARGE_X_SLOPE,
    LyapunovFunctionParams,
    MapParams,
    Trajectory,
    iterate,
    linear_step_large,
    linear_step_small,
    lyapunov_function_large,
    lyapunov_function_small,
    montgomery_kernel,
    sinc,
    step,
    step_derivative,
)
from .chaos import (
    BifurcationDiagram,
    ExponentialModel,
    Histogram,
    LyapunovSeries,
    bifurcation_scan,
    build_histogram,
    differential_entropy,
    exponential_mean,
    exponential_pdf,
    lyapunov_exponents,
    orbit_lyapunov,
    shannon_entropy,
)
from .zeta import (
    ErrorTable,
    PairCorrelation,
    SpacingEnsemble,
    ZeroTable,
    compare_model,
    error_table,
    harmonic_reference,
    load_zeros,
    normalized_spacings,
    pair_correlation_empirical,
    zero_density,
)
from .spectral import (
    DiscretizedOperator,
    SpacingStats,
    Spectrum,
    build_operator,
    eigenvalues,
    unfold_spectrum,
    wigner_surmise_gue,
)

__version__ = "0.1.0"
