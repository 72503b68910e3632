"""Analytic cross-codifference and cross-covariation series.

Both measures are infinite sums over the moving-average expansion of the
process.  The truncation point is chosen from closed-form geometric (or
j-geometric) envelopes of the summands, so the discarded tail is provably
below the requested tolerance; double precision, compensated accumulation,
fixed summation order.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .ar_model import StableAR1Model
from .stable_core import check_alpha

H_CAP = 10 ** 6  # beyond this use the asymptotic formulas instead
_NTERMS_CAP = 50_000_000

KIND_CD = "cd"
KIND_CV = "cv"
_DIRECTIONS = ("minus", "plus")


@dataclass(frozen=True)
class LagSpec:
    """Nonnegative lag plus the side of the second component: ``minus``
    compares X1(t) with X2(t-h), ``plus`` with X2(t+h)."""

    h: int
    direction: str = "minus"

    def __post_init__(self):
        if self.h < 0:
            raise ValueError(f"lag must be >= 0, got {self.h}")
        if self.h > H_CAP:
            raise ValueError(f"lag {self.h} exceeds cap {H_CAP}")
        if self.direction not in _DIRECTIONS:
            raise ValueError(f"direction must be 'minus' or 'plus', got {self.direction!r}")

    @property
    def minus(self) -> bool:
        return self.direction == "minus"


@dataclass(frozen=True)
class MeasureSeries:
    kind: str
    direction: str
    lags: np.ndarray
    values: np.ndarray
    truncation_j: int      # largest series index summed across the batch
    tail_bound: float      # largest certified tail across the batch
    tol: float


class _Envelope:
    """Geometric bounds on |row(m) . s| used for the certified tails."""

    def __init__(self, model: StableAR1Model):
        t = model.theta
        eig = model.eig
        atoms = model.noise.atoms
        s1 = atoms[:, 0]
        s2 = atoms[:, 1]
        p = t.a1 * s1 + t.a2 * s2
        q = t.a3 * s1 + t.a4 * s2
        self.mass = model.noise.mass
        self.degenerate = eig.degenerate
        self.rho = eig.spectral_radius
        if eig.degenerate:
            lam = eig.lam
            # |row(m).s| <= K * m * |lam|^(m-1) for m >= 1
            self.k_row1 = float(np.max(np.abs(p) + abs(lam) * np.abs(s1)))
            self.k_row2 = float(np.max(np.abs(q) + abs(lam) * np.abs(s2)))
        else:
            l1, l2 = eig.lambda1, eig.lambda2
            inv_d = 1.0 / (l2 - l1)
            c11 = np.abs((l2 * s1 - p) * inv_d)
            c12 = np.abs((p - l1 * s1) * inv_d)
            c21 = np.abs((l2 * s2 - q) * inv_d)
            c22 = np.abs((q - l1 * s2) * inv_d)
            # |row(m).s| <= G * rho^m
            self.g_row1 = float(np.max(c11 + c12))
            self.g_row2 = float(np.max(c21 + c22))
            # per-eigencomponent bounds for the constants' tails; symmetric in
            # the two components so they stay valid if the eigenvalues are
            # relabeled by the caller
            part1 = max(float(c11.max()), float(c12.max()))
            part2 = max(float(c21.max()), float(c22.max()))
            self.g_parts = {
                _kernels.DISTINCT_ROW1_L1: part1,
                _kernels.DISTINCT_ROW1_L2: part1,
                _kernels.DISTINCT_ROW1: self.g_row1,
                _kernels.DISTINCT_ROW2_L1: part2,
                _kernels.DISTINCT_ROW2_L2: part2,
                _kernels.DISTINCT_ROW2: self.g_row2,
                _kernels.DISTINCT_ROW2_LDIFF: self.g_row2,
            }


def _geo_tail(r: float, nterms: int) -> float:
    # sum_{j > nterms} r^j
    return r ** (nterms + 1) / (1.0 - r)


def _geo_tail_quad(r: float, nterms: int, shift: int) -> float:
    # sum_{j > nterms} (j + shift)^2 r^j
    b = nterms + 1 + shift
    u = 1.0 - r
    return r ** (nterms + 1) * (b * b / u + 2.0 * b * r / (u * u) + r * (1.0 + r) / u ** 3)


def _series_tail_bound(env: _Envelope, kind: str, minus: bool, alpha: float,
                       h: int, nterms: int) -> float:
    if env.rho < 1e-12:
        return 0.0  # nilpotent: the series terminates exactly
    r = env.rho ** alpha
    if not env.degenerate:
        gp, gq = (env.g_row1, env.g_row2) if minus else (env.g_row2, env.g_row1)
        if kind == KIND_CD:
            if alpha > 1.0:
                front = (alpha + 1.0) * gp ** alpha * env.rho ** (alpha * h) \
                    + alpha * gp * gq ** (alpha - 1.0) * env.rho ** h
            else:
                front = 2.0 * gp ** alpha * env.rho ** (alpha * h)
        else:
            hexp = h if minus else (alpha - 1.0) * h
            front = env.g_row1 * env.g_row2 ** (alpha - 1.0) * env.rho ** hexp
        return env.mass * front * _geo_tail(r, nterms)
    lam = env.rho
    kp, kq = (env.k_row1, env.k_row2) if minus else (env.k_row2, env.k_row1)
    if kind == KIND_CD:
        if alpha > 1.0:
            front = (alpha + 1.0) * kp ** alpha * lam ** (alpha * (h - 1)) \
                + alpha * kp * kq ** (alpha - 1.0) * lam ** (h - alpha)
        else:
            front = 2.0 * kp ** alpha * lam ** (alpha * (h - 1))
    elif minus:
        front = env.k_row1 * env.k_row2 ** (alpha - 1.0) * lam ** (h - alpha)
    else:
        front = env.k_row1 * env.k_row2 ** (alpha - 1.0) * lam ** ((alpha - 1.0) * h - alpha)
    return env.mass * front * _geo_tail_quad(r, nterms, h)


def _plan_truncation(env, kind, minus, alpha, h, tol):
    if env.rho < 1e-12:
        return 2, 0.0
    nterms = 8
    while _series_tail_bound(env, kind, minus, alpha, h, nterms) > tol:
        nterms *= 2
        if nterms > _NTERMS_CAP:
            raise RuntimeError("certified truncation did not converge")
    return nterms, _series_tail_bound(env, kind, minus, alpha, h, nterms)


def _atom_arrays(model: StableAR1Model):
    t = model.theta
    atoms = model.noise.atoms
    s1 = np.ascontiguousarray(atoms[:, 0])
    s2 = np.ascontiguousarray(atoms[:, 1])
    w = np.ascontiguousarray(model.noise.weights)
    p = t.a1 * s1 + t.a2 * s2
    q = t.a3 * s1 + t.a4 * s2
    return s1, s2, w, p, q


def _evaluate(model: StableAR1Model, kind: str, minus: bool, h: int, nterms: int) -> float:
    s1, s2, w, p, q = _atom_arrays(model)
    kcode = _kernels.KIND_CD if kind == KIND_CD else _kernels.KIND_CV
    eig = model.eig
    if eig.degenerate:
        return _kernels.series_repeated(
            kcode, minus, h, nterms, model.alpha, eig.lam, s1, s2, w, p, q
        )
    return _kernels.series_distinct(
        kcode, minus, h, nterms, model.alpha, eig.lambda1, eig.lambda2, s1, s2, w, p, q
    )


def _check_kind_alpha(kind: str, alpha: float):
    if kind == KIND_CV:
        check_alpha(alpha, covariation=True)
    elif kind == KIND_CD:
        check_alpha(alpha)
    else:
        raise ValueError(f"kind must be 'cd' or 'cv', got {kind!r}")


def cross_codifference(model: StableAR1Model, lag: LagSpec, tol: float = 1e-10) -> float:
    """Cross-codifference of X1(t) against X2(t -/+ h), certified to tol."""
    value, _, _ = _measure_with_diagnostics(model, KIND_CD, lag, tol)
    return value


def cross_covariation(model: StableAR1Model, lag: LagSpec, tol: float = 1e-10) -> float:
    """Cross-covariation of X1(t) on X2(t -/+ h), certified to tol.

    Only defined for alpha > 1; raises AlphaOutOfRange otherwise.
    """
    value, _, _ = _measure_with_diagnostics(model, KIND_CV, lag, tol)
    return value


def _measure_with_diagnostics(model, kind, lag, tol):
    _check_kind_alpha(kind, model.alpha)
    if tol <= 0:
        raise ValueError("tol must be > 0")
    env = _Envelope(model)
    nterms, bound = _plan_truncation(env, kind, lag.minus, model.alpha, lag.h, tol)
    return _evaluate(model, kind, lag.minus, lag.h, nterms), nterms, bound


def measure_series(
    model: StableAR1Model, kind: str, direction: str, h_max: int, tol: float = 1e-10
) -> MeasureSeries:
    """Values for h = 0..h_max in one direction, with shared truncation
    diagnostics (worst truncation index and worst certified tail)."""
    _check_kind_alpha(kind, model.alpha)
    lags = np.arange(h_max + 1)
    values = np.empty(h_max + 1)
    worst_n = 0
    worst_bound = 0.0
    for h in lags:
        values[h], nterms, bound = _measure_with_diagnostics(
            model, kind, LagSpec(int(h), direction), tol
        )
        worst_n = max(worst_n, nterms)
        worst_bound = max(worst_bound, bound)
    return MeasureSeries(kind, direction, lags, values, worst_n, worst_bound, tol)
