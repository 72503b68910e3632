"""Cross-dependence analytics for bivariate AR(1) processes with symmetric
alpha-stable noise: analytic codifference/covariation series, closed-form
asymptotics and ratio limits, Monte Carlo validation, and ratio-based
estimation of the stability index."""

from ._backend import BACKEND
from .ar_model import (
    AsymptoticCase,
    CoeffMatrix,
    EigenStructure,
    StableAR1Model,
    case_for_lag,
    classify_case,
    eigen_structure,
    is_stable,
    simulate_path,
    theta_power,
)
from .asymptotics import (
    AsymptoticConstants,
    RatioSeries,
    Theorem1Report,
    asymptotic_cd,
    asymptotic_constants,
    asymptotic_cv,
    prediction_is_exact,
    ratio_series,
    theorem1_check,
)
from .errors import (
    AlphaOutOfRange,
    ComplexEigenvalues,
    ConfigError,
    InvalidMeasure,
    NonPositiveCharFn,
    StableAR2Error,
    UndefinedRatio,
    UnstableModel,
)
from .measures import (
    KIND_CD,
    KIND_CV,
    LagSpec,
    MeasureSeries,
    cross_codifference,
    cross_covariation,
    measure_series,
)
from .montecarlo import (
    AlphaEstimate,
    PathSample,
    alpha_from_ratio_curve,
    bootstrap_codifference,
    bootstrap_covariation,
    empirical_codifference,
    empirical_covariation,
    estimate_alpha,
)
from .stable_core import (
    SpectralMeasure,
    check_alpha,
    joint_char_function,
    sample_bivariate_stable,
    sample_standard_sas,
    signed_power,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AsymptoticCase",
    "CoeffMatrix",
    "EigenStructure",
    "StableAR1Model",
    "case_for_lag",
    "classify_case",
    "eigen_structure",
    "is_stable",
    "simulate_path",
    "theta_power",
    "AsymptoticConstants",
    "RatioSeries",
    "Theorem1Report",
    "asymptotic_cd",
    "asymptotic_constants",
    "asymptotic_cv",
    "prediction_is_exact",
    "ratio_series",
    "theorem1_check",
    "AlphaOutOfRange",
    "ComplexEigenvalues",
    "ConfigError",
    "InvalidMeasure",
    "NonPositiveCharFn",
    "StableAR2Error",
    "UndefinedRatio",
    "UnstableModel",
    "KIND_CD",
    "KIND_CV",
    "LagSpec",
    "MeasureSeries",
    "cross_codifference",
    "cross_covariation",
    "measure_series",
    "AlphaEstimate",
    "PathSample",
    "alpha_from_ratio_curve",
    "bootstrap_codifference",
    "bootstrap_covariation",
    "empirical_codifference",
    "empirical_covariation",
    "estimate_alpha",
    "SpectralMeasure",
    "check_alpha",
    "joint_char_function",
    "sample_bivariate_stable",
    "sample_standard_sas",
    "signed_power",
]
