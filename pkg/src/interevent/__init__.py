"""Superstatistics of interevent times.

A waiting time is drawn from an exponential whose characteristic time is
itself random: tau(eps) = tau0 * exp(beta * eps) with eps drawn from a
trap-depth weight.  The package evaluates the resulting mixture density and
survival function, computes fractional moments analytically or by saddle-point
and series approximations, simulates event streams, estimates moment curves
from data, and fits the moment laws and survival models used for data
collapse across datasets.
"""

from .core import (
    AsymptoticRangeWarning,
    Delta,
    DivergentMomentError,
    EventSeries,
    FitResult,
    IngestError,
    Laplace,
    ModelDomainError,
    ModelParams,
    NoFiniteMeanError,
    QMomentCurve,
    SeriesTruncationWarning,
    StretchedExp,
    Uniform,
    UnsupportedModelError,
)
from .densities import (
    Phase,
    PhaseLabel,
    characteristic_time,
    phase,
    ptd,
    ptd_tail,
    sojourn,
    tau_of_epsilon,
)
from .empirical import (
    DEFAULT_Q_GRID,
    IngestOptions,
    empirical_qmoments,
    empirical_sojourn,
    hmf_collapse,
    ingest,
    mf_collapse,
    mono_collapse,
    rescaled_log_moment,
    scale_q,
    transformed_moment,
)
from .fitting import (
    QExponential,
    StretchedSojourn,
    Weibull,
    fit_hmf,
    fit_mf,
    fit_monofractal,
    fit_sojourn,
)
from .moments import (
    HMFParams,
    MFParams,
    SaddlePointResult,
    Scales,
    SeriesMomentResult,
    conditional_moment,
    fd_relation,
    hmf_curve,
    hmf_exponent,
    iq_quadrature,
    log_iq_quadrature,
    log_moment_hmf,
    log_moment_mf,
    log_norm_moment,
    mf_curve,
    model_curve,
    moment,
    moment_delta,
    moment_gaussian,
    moment_hmf,
    moment_laplace,
    moment_mf,
    moment_stretched_series,
    moment_uniform,
    monofractal_curve,
    saddlepoint_iq,
    scales,
)
from .simulate import SimConfig, generate_series, sample_epsilon, sample_interevent

__version__ = "0.1.0"

__all__ = [
    "AsymptoticRangeWarning",
    "DEFAULT_Q_GRID",
    "Delta",
    "DivergentMomentError",
    "EventSeries",
    "FitResult",
    "HMFParams",
    "IngestError",
    "IngestOptions",
    "Laplace",
    "MFParams",
    "ModelDomainError",
    "ModelParams",
    "NoFiniteMeanError",
    "Phase",
    "PhaseLabel",
    "QExponential",
    "QMomentCurve",
    "SaddlePointResult",
    "Scales",
    "SeriesMomentResult",
    "SeriesTruncationWarning",
    "SimConfig",
    "StretchedExp",
    "StretchedSojourn",
    "Uniform",
    "UnsupportedModelError",
    "Weibull",
    "characteristic_time",
    "conditional_moment",
    "empirical_qmoments",
    "empirical_sojourn",
    "fd_relation",
    "fit_hmf",
    "fit_mf",
    "fit_monofractal",
    "fit_sojourn",
    "generate_series",
    "hmf_collapse",
    "hmf_curve",
    "hmf_exponent",
    "ingest",
    "iq_quadrature",
    "log_iq_quadrature",
    "log_moment_hmf",
    "log_moment_mf",
    "log_norm_moment",
    "mf_collapse",
    "mf_curve",
    "model_curve",
    "moment",
    "moment_delta",
    "moment_gaussian",
    "moment_hmf",
    "moment_laplace",
    "moment_mf",
    "moment_stretched_series",
    "moment_uniform",
    "mono_collapse",
    "monofractal_curve",
    "phase",
    "ptd",
    "ptd_tail",
    "rescaled_log_moment",
    "saddlepoint_iq",
    "sample_epsilon",
    "sample_interevent",
    "scale_q",
    "scales",
    "sojourn",
    "tau_of_epsilon",
    "transformed_moment",
    "__version__",
]
