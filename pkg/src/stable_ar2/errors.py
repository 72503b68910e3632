"""Exception types shared across the package."""


class StableAR2Error(Exception):
    """Base class for all package-specific errors."""


class ConfigError(StableAR2Error):
    """Malformed run configuration (bad key, missing field, bad value)."""


class InvalidMeasure(StableAR2Error):
    """Spectral measure violates its invariants (off-circle atom,
    non-positive weight, or missing antipodal partner)."""


class ComplexEigenvalues(StableAR2Error):
    """Coefficient matrix has complex eigenvalues; only real spectra
    are supported."""


class UnstableModel(StableAR2Error):
    """Coefficient matrix has an eigenvalue with modulus >= 1."""


class AlphaOutOfRange(StableAR2Error):
    """Stability index outside the admissible range for the requested
    operation."""


class NonPositiveCharFn(StableAR2Error):
    """An empirical characteristic-function value came out <= 0, so its
    logarithm is undefined (path too short or too heavy-tailed)."""


class UndefinedRatio(StableAR2Error):
    """Codifference/covariation ratio is undefined because the
    covariation is indistinguishable from zero."""
