"""Covariance estimation for functional data observed on overlapping bands."""

from ._core import (
    BandcovError,
    ConfigError,
    CovarianceEstimate,
    CvConfig,
    CvResult,
    DomainError,
    EstimatorConfig,
    Grid,
    InsufficientDataError,
    NumericError,
    ObservationSet,
    ParseError,
    PatchMode,
    Sample,
    estimate_covariance,
    patch_ranges,
    read_long_csv,
    rmse,
    simulate,
    solve_wahba,
)

__all__ = [
    "BandcovError",
    "ConfigError",
    "CovarianceEstimate",
    "CvConfig",
    "CvResult",
    "DomainError",
    "EstimatorConfig",
    "Grid",
    "InsufficientDataError",
    "NumericError",
    "ObservationSet",
    "ParseError",
    "PatchMode",
    "Sample",
    "estimate_covariance",
    "patch_ranges",
    "read_long_csv",
    "rmse",
    "simulate",
    "solve_wahba",
]
