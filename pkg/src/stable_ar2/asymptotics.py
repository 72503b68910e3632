"""Closed-form asymptotics: model constants, large-lag predictions for both
dependence measures, the ratio curves, and the limit check (codifference /
covariation -> alpha on the lagging side, -> 0 on the leading side)."""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .ar_model import (
    AsymptoticCase,
    EigenStructure,
    StableAR1Model,
    case_for_lag,
)
from .errors import UndefinedRatio
from .measures import (
    KIND_CD,
    KIND_CV,
    LagSpec,
    _Envelope,
    _atom_arrays,
    _geo_tail,
    _geo_tail_quad,
    cross_codifference,
    cross_covariation,
)
from .stable_core import check_alpha, signed_power

_K = _kernels

# constant name -> (f selector, g selector) for sum_j int f * g^<alpha-1>
_DISTINCT_PAIRS = {
    "d1": (_K.DISTINCT_ROW1_L1, _K.DISTINCT_ROW2),
    "d2": (_K.DISTINCT_ROW1_L2, _K.DISTINCT_ROW2),
    "d4": (_K.DISTINCT_ROW2_L1, _K.DISTINCT_ROW1),
    "d5": (_K.DISTINCT_ROW2_L2, _K.DISTINCT_ROW1),
    "d7": (_K.DISTINCT_ROW1, _K.DISTINCT_ROW2_L1),
    "d8": (_K.DISTINCT_ROW1, _K.DISTINCT_ROW2_L2),
}
_ANTISYM_PAIRS = {
    "d10": (_K.DISTINCT_ROW1, _K.DISTINCT_ROW2),
    "d11": (_K.DISTINCT_ROW1, _K.DISTINCT_ROW2_LDIFF),
}
_REPEATED_PAIRS = {
    "d3": (_K.REPEATED_SLOPE1, _K.REPEATED_ROW2),
    "e3": (_K.REPEATED_ROW1, _K.REPEATED_ROW2),
    "d6": (_K.REPEATED_SLOPE2, _K.REPEATED_ROW1),
    "d9": (_K.REPEATED_ROW1, _K.REPEATED_SLOPE2),
}


@dataclass(frozen=True)
class AsymptoticConstants:
    """Leading coefficients of the large-lag behavior; entries not applicable
    to the model's eigen layout stay None."""

    alpha: float
    eig: EigenStructure
    d1: float | None = None
    d2: float | None = None
    d3: float | None = None
    d4: float | None = None
    d5: float | None = None
    d6: float | None = None
    d7: float | None = None
    d8: float | None = None
    d9: float | None = None
    d10: float | None = None
    d11: float | None = None
    e3: float | None = None
    tail_bound: float = 0.0

    def as_dict(self) -> dict:
        keys = ("d1", "d2", "d3", "d4", "d5", "d6", "d7", "d8", "d9", "d10", "d11", "e3")
        return {k: getattr(self, k) for k in keys if getattr(self, k) is not None}


def _pair_tail_bound(env: _Envelope, alpha: float, fsel: int, gsel: int, nterms: int) -> float:
    r = env.rho ** alpha
    if not env.degenerate:
        gf = env.g_parts[fsel]
        gg = env.g_parts[gsel]
        return env.mass * gf * gg ** (alpha - 1.0) * _geo_tail(r, nterms)
    # row and slope envelopes are both <= K * j * |lam|^(j-1) for j >= 1
    kf = env.k_row1 if fsel in (_K.REPEATED_ROW1, _K.REPEATED_SLOPE1) else env.k_row2
    kg = env.k_row1 if gsel in (_K.REPEATED_ROW1, _K.REPEATED_SLOPE1) else env.k_row2
    front = kf * kg ** (alpha - 1.0) * env.rho ** (-alpha)
    return env.mass * front * _geo_tail_quad(r, nterms, 0)


def _pair_value(model, eig, fsel, gsel, tol):
    # the envelope bounds are symmetric in the eigen labels, so a relabeled
    # eig (same eigenvalue set) keeps the tail certificate valid
    env = _Envelope(model)
    nterms = 8
    while _pair_tail_bound(env, model.alpha, fsel, gsel, nterms) > tol:
        nterms *= 2
        if nterms > 50_000_000:
            raise RuntimeError("constant series did not converge")
    s1, s2, w, p, q = _atom_arrays(model)
    if eig.degenerate:
        value = _kernels.pair_series_repeated(
            fsel, gsel, nterms, model.alpha, eig.lam, s1, s2, w, p, q
        )
    else:
        value = _kernels.pair_series_distinct(
            fsel, gsel, nterms, model.alpha, eig.lambda1, eig.lambda2, s1, s2, w, p, q
        )
    return value, _pair_tail_bound(env, model.alpha, fsel, gsel, nterms)


def asymptotic_constants(
    model: StableAR1Model, eig: EigenStructure | None = None, tol: float = 1e-12
) -> AsymptoticConstants:
    """Every constant applicable to the model's eigen layout, each an
    absolutely convergent series truncated with certified tail < tol.

    ``eig`` can be supplied explicitly (e.g. with the eigenvalues relabeled);
    by default it is derived from the coefficient matrix.
    """
    check_alpha(model.alpha, covariation=True)
    if eig is None:
        eig = model.eig
    if eig.degenerate and abs(eig.lam) < 1e-12:
        raise ValueError(
            "asymptotic constants are undefined for a zero eigenvalue "
            "(the series terminates after two terms; use the measures directly)"
        )
    values: dict[str, float] = {}
    worst = 0.0
    if eig.degenerate:
        pairs = _REPEATED_PAIRS
    else:
        pairs = dict(_DISTINCT_PAIRS)
        if eig.antisymmetric:
            pairs.update(_ANTISYM_PAIRS)
    for name, (fsel, gsel) in pairs.items():
        value, bound = _pair_value(model, eig, fsel, gsel, tol)
        values[name] = value
        worst = max(worst, bound)
    return AsymptoticConstants(alpha=model.alpha, eig=eig, tail_bound=worst, **values)


def asymptotic_cd(constants: AsymptoticConstants, eig: EigenStructure, lag: LagSpec) -> float:
    """Leading-order codifference prediction at the given lag."""
    case = case_for_lag(eig, lag.h)
    a = constants.alpha
    h = lag.h
    if lag.minus:
        if case is AsymptoticCase.I:
            return a * constants.d1 * eig.lambda1 ** h
        if case is AsymptoticCase.II:
            return a * constants.d2 * eig.lambda2 ** h
        if case is AsymptoticCase.III:
            return a * constants.d3 * h * eig.lam ** h
        if case is AsymptoticCase.IV:
            return a * (constants.d1 + constants.d2) * eig.lambda1 ** h
        return a * (constants.d1 - constants.d2) * eig.lambda1 ** h
    if case is AsymptoticCase.I:
        return a * constants.d4 * eig.lambda1 ** h
    if case is AsymptoticCase.II:
        return a * constants.d5 * eig.lambda2 ** h
    if case is AsymptoticCase.III:
        return a * constants.d6 * h * eig.lam ** h
    if case is AsymptoticCase.IV:
        return a * (constants.d4 + constants.d5) * eig.lambda1 ** h
    return a * (constants.d4 - constants.d5) * eig.lambda1 ** h


def asymptotic_cv(constants: AsymptoticConstants, eig: EigenStructure, lag: LagSpec) -> float:
    """Leading-order covariation prediction; exact (not just asymptotic) for
    the sign-flipped eigenvalue pair on the lagging side and both
    sign-flipped cases on the leading side."""
    case = case_for_lag(eig, lag.h)
    a = constants.alpha
    h = lag.h
    if lag.minus:
        if case is AsymptoticCase.I:
            return constants.d1 * eig.lambda1 ** h
        if case is AsymptoticCase.II:
            return constants.d2 * eig.lambda2 ** h
        if case is AsymptoticCase.III:
            return constants.d3 * h * eig.lam ** h
        if case is AsymptoticCase.IV:
            return (constants.d1 + constants.d2) * eig.lambda1 ** h
        return (constants.d1 - constants.d2) * eig.lambda1 ** h
    if case is AsymptoticCase.I:
        return constants.d7 * signed_power(eig.lambda1 ** h, a - 1.0)
    if case is AsymptoticCase.II:
        return constants.d8 * signed_power(eig.lambda2 ** h, a - 1.0)
    if case is AsymptoticCase.III:
        return constants.d9 * signed_power(h * eig.lam ** h, a - 1.0)
    if case is AsymptoticCase.IV:
        return constants.d10 * signed_power(eig.lambda1 ** h, a - 1.0)
    return constants.d11 * signed_power(eig.lambda1 ** h, a - 1.0)


def prediction_is_exact(kind: str, direction: str, case: AsymptoticCase) -> bool:
    """Whether the prediction formula is an identity at every lag rather than
    a large-lag equivalence."""
    if kind == KIND_CV and case in (AsymptoticCase.IV, AsymptoticCase.V):
        return True
    return False


@dataclass(frozen=True)
class RatioSeries:
    """Per-lag codifference/covariation ratios in both directions, with
    explicit definedness masks (a ratio is undefined where the covariation is
    numerically indistinguishable from zero)."""

    alpha: float
    lags: np.ndarray
    r_minus: np.ndarray
    r_plus: np.ndarray
    minus_defined: np.ndarray
    plus_defined: np.ndarray


def ratio_series(model: StableAR1Model, h_max: int, tol: float = 1e-12) -> RatioSeries:
    """Per-lag ratios with relative accuracy ~tol.

    Both measures shrink geometrically in h, so a fixed absolute truncation
    tolerance would swamp the large-h ratios; each lag is evaluated twice,
    first to gauge the scale and then to a tolerance proportional to it.
    Entries with |covariation| below tol times the curve's largest magnitude
    are flagged undefined (the guard exists to catch identically-zero
    covariation, e.g. independent components, where the ratio limit is
    meaningless).
    """
    check_alpha(model.alpha, covariation=True)
    out = {}
    for direction in ("minus", "plus"):
        cd = np.empty(h_max + 1)
        cv = np.empty(h_max + 1)
        for h in range(h_max + 1):
            lag = LagSpec(h, direction)
            coarse = cross_covariation(model, lag, tol=1e-12)
            tol_h = max(abs(coarse) * tol * 0.25, 1e-280)
            cv[h] = cross_covariation(model, lag, tol=tol_h)
            cd[h] = cross_codifference(model, lag, tol=tol_h)
        scale = np.max(np.abs(cv))
        if scale == 0.0:
            defined = np.zeros(h_max + 1, dtype=bool)
        else:
            defined = np.abs(cv) >= tol * scale
        ratio = np.full(h_max + 1, np.nan)
        np.divide(cd, cv, out=ratio, where=defined)
        out[direction] = (ratio, defined)
    return RatioSeries(
        alpha=model.alpha,
        lags=np.arange(h_max + 1),
        r_minus=out["minus"][0],
        r_plus=out["plus"][0],
        minus_defined=out["minus"][1],
        plus_defined=out["plus"][1],
    )


@dataclass(frozen=True)
class Theorem1Report:
    """Distance of the ratio curves from their limits at the last lag."""

    alpha: float
    h_max: int
    tol: float
    minus_gap: float        # |r_minus(h_max)/alpha - 1|
    plus_value: float       # |r_plus(h_max)|
    plus_decay: float       # |r_plus(h_max)| / |r_plus(1)| (nan if undefined)
    minus_passed: bool
    plus_passed: bool

    @property
    def passed(self) -> bool:
        return self.minus_passed and self.plus_passed


def theorem1_check(model: StableAR1Model, h_max: int = 40, tol: float = 0.02) -> Theorem1Report:
    """Check that r_minus(h_max)/alpha is within tol of 1 and |r_plus(h_max)|
    is within tol of 0."""
    series = ratio_series(model, h_max, tol=1e-12)
    if not (series.minus_defined[h_max] and series.plus_defined[h_max]):
        raise UndefinedRatio(
            "covariation numerically zero at the checked lag; the ratio limit "
            "hypothesis does not hold for this model"
        )
    minus_gap = abs(series.r_minus[h_max] / model.alpha - 1.0)
    plus_value = abs(series.r_plus[h_max])
    if h_max >= 1 and series.plus_defined[1] and series.r_plus[1] != 0.0:
        plus_decay = plus_value / abs(series.r_plus[1])
    else:
        plus_decay = math.nan
    return Theorem1Report(
        alpha=model.alpha,
        h_max=h_max,
        tol=tol,
        minus_gap=minus_gap,
        plus_value=plus_value,
        plus_decay=plus_decay,
        minus_passed=bool(minus_gap <= tol),
        plus_passed=bool(plus_value <= tol),
    )
