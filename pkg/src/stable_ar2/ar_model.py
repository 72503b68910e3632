"""Bivariate AR(1) specification: stability, eigen-structure, closed-form
matrix powers and asymptotic case classification."""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .errors import ComplexEigenvalues, UnstableModel
from .stable_core import SpectralMeasure, check_alpha, sample_bivariate_stable

# eigenvalues closer than this (relative) are treated as equal; the distinct
# closed form divides by their difference and is unusable near coincidence
DEGENERACY_RTOL = 1e-9


@dataclass(frozen=True)
class CoeffMatrix:
    """Row-major entries of the 2x2 coefficient matrix."""

    a1: float
    a2: float
    a3: float
    a4: float

    def as_array(self) -> np.ndarray:
        return np.array([[self.a1, self.a2], [self.a3, self.a4]], dtype=float)

    @classmethod
    def from_array(cls, m) -> "CoeffMatrix":
        m = np.asarray(m, dtype=float)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])


@dataclass(frozen=True)
class EigenStructure:
    lambda1: float
    lambda2: float
    degenerate: bool

    @property
    def lam(self) -> float:
        """The repeated eigenvalue (mean of the two when nearly equal)."""
        return 0.5 * (self.lambda1 + self.lambda2)

    @property
    def spectral_radius(self) -> float:
        return max(abs(self.lambda1), abs(self.lambda2))

    @property
    def antisymmetric(self) -> bool:
        """lambda1 == -lambda2 (nonzero) within the degeneracy tolerance."""
        if self.degenerate:
            return False
        scale = max(1.0, abs(self.lambda1))
        return abs(self.lambda1 + self.lambda2) < DEGENERACY_RTOL * scale


class AsymptoticCase(Enum):
    """Asymptotic regime by eigenvalue layout (and lag parity for the
    sign-flipped pair)."""

    I = "I"      # |lambda1| > |lambda2|
    II = "II"    # |lambda1| < |lambda2|
    III = "III"  # lambda1 == lambda2
    IV = "IV"    # lambda1 == -lambda2, even lag
    V = "V"      # lambda1 == -lambda2, odd lag


def eigen_structure(theta: CoeffMatrix) -> EigenStructure:
    """Both roots of z^2 - (a1+a4) z + (a1 a4 - a2 a3).

    Raises ComplexEigenvalues when the discriminant is negative beyond
    tolerance; a near-zero discriminant is flagged degenerate.
    """
    tr = theta.a1 + theta.a4
    disc = (theta.a1 - theta.a4) ** 2 + 4.0 * theta.a2 * theta.a3
    eps = DEGENERACY_RTOL * max(1.0, abs(theta.a1) + abs(theta.a4))
    # the discriminant itself carries rounding noise of this order, so an
    # exactly repeated eigenvalue can come out slightly negative
    noise = 64.0 * np.finfo(float).eps * (
        (theta.a1 - theta.a4) ** 2 + 4.0 * abs(theta.a2) * abs(theta.a3)
    )
    cut = max(eps * eps, noise)
    if disc < -cut:
        raise ComplexEigenvalues(
            f"discriminant {disc:.3e} < 0: eigenvalues are complex"
        )
    if disc <= cut:
        lam = 0.5 * tr
        return EigenStructure(lam, lam, True)
    root = math.sqrt(disc)
    return EigenStructure(0.5 * (tr - root), 0.5 * (tr + root), False)


def is_stable(theta: CoeffMatrix) -> bool:
    """True iff every eigenvalue (real or complex) has modulus < 1."""
    tr = theta.a1 + theta.a4
    det = theta.a1 * theta.a4 - theta.a2 * theta.a3
    disc = (theta.a1 - theta.a4) ** 2 + 4.0 * theta.a2 * theta.a3
    if disc < 0.0:
        return det < 1.0  # complex pair: |lambda|^2 = det
    root = math.sqrt(disc)
    return max(abs(0.5 * (tr - root)), abs(0.5 * (tr + root))) < 1.0


def theta_power(theta: CoeffMatrix, j: int) -> CoeffMatrix:
    """j-th matrix power through the eigen closed forms (j >= 0)."""
    if j < 0:
        raise ValueError("power must be >= 0")
    if j == 0:
        return CoeffMatrix(1.0, 0.0, 0.0, 1.0)
    eig = eigen_structure(theta)
    if eig.degenerate:
        lam = eig.lam
        f = j * lam ** (j - 1)
        g = (j - 1) * lam ** j
        return CoeffMatrix(
            f * theta.a1 - g, f * theta.a2, f * theta.a3, f * theta.a4 - g
        )
    l1, l2 = eig.lambda1, eig.lambda2
    inv_d = 1.0 / (l2 - l1)
    diag = (l2 * l1 ** j - l1 * l2 ** j) * inv_d
    off = (l2 ** j - l1 ** j) * inv_d
    return CoeffMatrix(
        diag + off * theta.a1, off * theta.a2, off * theta.a3, diag + off * theta.a4
    )


def classify_case(eig: EigenStructure, h_parity: str) -> AsymptoticCase:
    """Map an eigen layout (plus lag parity) onto its asymptotic case."""
    if h_parity not in ("even", "odd"):
        raise ValueError(f"h_parity must be 'even' or 'odd', got {h_parity!r}")
    if eig.degenerate:
        return AsymptoticCase.III
    if eig.antisymmetric:
        return AsymptoticCase.IV if h_parity == "even" else AsymptoticCase.V
    if abs(eig.lambda1) > abs(eig.lambda2):
        return AsymptoticCase.I
    return AsymptoticCase.II


def case_for_lag(eig: EigenStructure, h: int) -> AsymptoticCase:
    return classify_case(eig, "even" if h % 2 == 0 else "odd")


@dataclass(frozen=True)
class StableAR1Model:
    """Bivariate AR(1) driven by i.i.d. symmetric alpha-stable noise.

    Construction validates the stability index, checks that the eigenvalues
    of the coefficient matrix are real, and that the recursion is stable.
    """

    theta: CoeffMatrix
    alpha: float
    noise: SpectralMeasure

    def __post_init__(self):
        check_alpha(self.alpha)
        eig = eigen_structure(self.theta)  # raises on complex spectrum
        if eig.spectral_radius >= 1.0:
            raise UnstableModel(
                f"spectral radius {eig.spectral_radius:.6g} >= 1"
            )

    @property
    def eig(self) -> EigenStructure:
        return eigen_structure(self.theta)

    def scaled_noise(self, c: float) -> "StableAR1Model":
        return StableAR1Model(self.theta, self.alpha, self.noise.scaled(c))


def default_burn_in(eig: EigenStructure, tol: float = 1e-12) -> int:
    """Steps until the zero-start transient decays below tol."""
    rho = eig.spectral_radius
    if rho < 1e-300:
        return 1
    return max(1, math.ceil(math.log(tol) / math.log(rho)))


def simulate_path(
    model: StableAR1Model, n: int, burn_in: int | None = None, seed: int = 0
) -> np.ndarray:
    """n observations of the stationary solution as an (n, 2) array.

    Runs the recursion from the zero state and discards ``burn_in`` steps
    (default: enough for a 1e-12 relative transient).  Exact given the noise
    draws, and reproducible for a fixed seed.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got n={n}")
    if burn_in is None:
        burn_in = default_burn_in(model.eig)
    if burn_in < 0:
        raise ValueError("burn_in must be >= 0")
    noise = sample_bivariate_stable(model.noise, model.alpha, n + burn_in, seed)
    z1 = np.ascontiguousarray(noise[:, 0])
    z2 = np.ascontiguousarray(noise[:, 1])
    x1 = np.empty(n)
    x2 = np.empty(n)
    t = model.theta
    _kernels.ar1_recursion(t.a1, t.a2, t.a3, t.a4, z1, z2, burn_in, x1, x2)
    return np.column_stack((x1, x2))
