"""Scalar and bivariate symmetric alpha-stable primitives.

A symmetric alpha-stable random vector on the plane is described by a
stability index ``alpha`` in (0, 2] and a finite symmetric spectral measure
on the unit circle; here the measure is restricted to finitely many atoms,
which turns every integral over the circle into an exact finite sum.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import AlphaOutOfRange, InvalidMeasure

_UNIT_TOL = 1e-12
_PAIR_TOL = 1e-12


def check_alpha(alpha: float, *, covariation: bool = False) -> float:
    """Validate a stability index.

    Codifference-style uses admit 0 < alpha <= 2; covariation-style uses
    require alpha > 1 (the signed-power exponent alpha - 1 must be positive).
    alpha = 2 is admitted in both so the Gaussian limit can be evaluated.
    """
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise AlphaOutOfRange("alpha must be finite")
    if covariation:
        if not 1.0 < alpha <= 2.0:
            raise AlphaOutOfRange(
                f"covariation requires 1 < alpha < 2, got alpha={alpha}"
            )
    elif not 0.0 < alpha <= 2.0:
        raise AlphaOutOfRange(f"alpha must lie in (0, 2], got alpha={alpha}")
    return alpha


def signed_power(a: float, p: float) -> float:
    """|a|**p * sign(a), the odd extension of the power function."""
    if p <= 0:
        raise ValueError(f"signed_power requires p > 0, got p={p}")
    if a > 0:
        return a ** p
    if a < 0:
        return -((-a) ** p)
    return 0.0


@dataclass(frozen=True)
class SpectralMeasure:
    """Finite symmetric atomic measure on the unit circle.

    ``atoms`` is an (k, 2) array of unit vectors, ``weights`` the matching
    positive masses.  Every atom must have its antipode present with equal
    weight; asymmetric input is rejected rather than silently symmetrized.
    """

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if atoms.ndim != 2 or atoms.shape[1] != 2 or atoms.shape[0] == 0:
            raise InvalidMeasure("atoms must be a non-empty (k, 2) array")
        if weights.shape != (atoms.shape[0],):
            raise InvalidMeasure("weights must match the number of atoms")
        if not (np.isfinite(atoms).all() and np.isfinite(weights).all()):
            raise InvalidMeasure("atoms and weights must be finite")
        radius = np.hypot(atoms[:, 0], atoms[:, 1])
        off = np.abs(radius - 1.0)
        if off.max() > _UNIT_TOL:
            k = int(off.argmax())
            raise InvalidMeasure(
                f"atom {k} is off the unit circle by {off[k]:.3e}"
            )
        if (weights <= 0).any():
            raise InvalidMeasure("all weights must be > 0")
        self._check_symmetry(atoms, weights)
        atoms.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)

    @staticmethod
    def _check_symmetry(atoms, weights):
        used = np.zeros(len(atoms), dtype=bool)
        for i in range(len(atoms)):
            if used[i]:
                continue
            match = -1
            for j in range(len(atoms)):
                if j == i or used[j]:
                    continue
                if (
                    abs(atoms[j, 0] + atoms[i, 0]) <= _PAIR_TOL
                    and abs(atoms[j, 1] + atoms[i, 1]) <= _PAIR_TOL
                    and abs(weights[j] - weights[i]) <= _PAIR_TOL
                ):
                    match = j
                    break
            if match < 0:
                raise InvalidMeasure(
                    f"measure is not symmetric: atom {tuple(atoms[i])} has no "
                    "antipodal partner of equal weight"
                )
            used[i] = used[match] = True

    @property
    def mass(self) -> float:
        return float(self.weights.sum())

    def scaled(self, c: float) -> "SpectralMeasure":
        """Same atoms with all weights multiplied by c > 0."""
        if c <= 0:
            raise InvalidMeasure("scale factor must be > 0")
        return SpectralMeasure(self.atoms.copy(), self.weights * c)

    def covariance(self) -> np.ndarray:
        """2 * sum of w * s s^T: the Gaussian covariance the measure induces
        at alpha = 2."""
        return 2.0 * (self.atoms.T * self.weights) @ self.atoms


def joint_char_function(measure: SpectralMeasure, alpha: float, theta) -> float:
    """exp(-sum_k w_k |theta . s_k|^alpha), real by symmetry of the measure."""
    alpha = check_alpha(alpha)
    t1, t2 = float(theta[0]), float(theta[1])
    proj = np.abs(t1 * measure.atoms[:, 0] + t2 * measure.atoms[:, 1])
    return float(np.exp(-np.dot(measure.weights, proj ** alpha)))


def sample_standard_sas(alpha: float, n: int, seed: int) -> np.ndarray:
    """n i.i.d. standard symmetric alpha-stable draws (char. fn exp(-|t|^alpha)).

    Chambers-Mallows-Stuck transform of a uniform angle and a standard
    exponential; deterministic for a fixed seed.
    """
    alpha = check_alpha(alpha)
    if n < 1:
        raise ValueError(f"need n >= 1, got n={n}")
    rng = np.random.default_rng(seed)
    phi = rng.uniform(-math.pi / 2.0, math.pi / 2.0, size=n)
    expw = rng.exponential(1.0, size=n)
    out = np.empty(n)
    _kernels.cms_transform(alpha, phi, expw, out)
    return out


def sample_bivariate_stable(
    measure: SpectralMeasure, alpha: float, n: int, seed: int
) -> np.ndarray:
    """n i.i.d. draws of the bivariate vector with the given spectral measure.

    For an atomic measure, Z = sum_k w_k^(1/alpha) * A_k * s_k with A_k
    independent standard symmetric alpha-stable scalars reproduces the target
    characteristic function; returns an (n, 2) array.
    """
    alpha = check_alpha(alpha)
    if n < 1:
        raise ValueError(f"need n >= 1, got n={n}")
    rng = np.random.default_rng(seed)
    k = len(measure.weights)
    phi = rng.uniform(-math.pi / 2.0, math.pi / 2.0, size=n * k)
    expw = rng.exponential(1.0, size=n * k)
    draws = np.empty(n * k)
    _kernels.cms_transform(alpha, phi, expw, draws)
    scaled = draws.reshape(n, k) * measure.weights ** (1.0 / alpha)
    return scaled @ measure.atoms
