"""Hot numeric kernels, in numba and numpy flavors.

Every public name at the bottom of this module is bound to one of the two
implementations according to :mod:`stable_ar2._backend`.  Both flavors are
importable directly (``IMPLEMENTATIONS``) so tests and benchmarks can compare
them regardless of the active backend.

Conventions shared by the series kernels
----------------------------------------
For a 2x2 coefficient matrix with rows ``(a1, a2)`` and ``(a3, a4)`` and a
unit-circle atom ``(s1, s2)`` we precompute::

    p = a1*s1 + a2*s2      (first row of the matrix applied to the atom)
    q = a3*s1 + a4*s2      (second row)

With distinct real eigenvalues ``lam1 != lam2`` the m-step response splits
into eigen-components::

    row1(m).s = lam1^m*(lam2*s1 - p)/(lam2-lam1) + lam2^m*(p - lam1*s1)/(lam2-lam1)
    row2(m).s = lam1^m*(lam2*s2 - q)/(lam2-lam1) + lam2^m*(q - lam1*s2)/(lam2-lam1)

With a repeated eigenvalue ``lam`` the response at m >= 1 is::

    row1(m).s = m*lam^(m-1)*p - (m-1)*lam^m*s1      (identity row at m = 0)
    row2(m).s = m*lam^(m-1)*q - (m-1)*lam^m*s2

and shifting the power index by h splits each row into a level part (the row
itself at index j) plus h times a slope part ``lam^(j-1)*(p - lam*s1)`` /
``lam^(j-1)*(q - lam*s2)``.

Series terms:

* codifference (kind=0):   |u|^a + |v|^a - |u - v|^a
* covariation  (kind=1):   x * sgn(y)|y|^(a-1) with x the first-component
  coefficient and y the lagged-component coefficient

where ``u`` (and ``y`` or ``x`` depending on direction) carries the power
``h + j`` and the other factor the power ``j``.
"""

import math

import numpy as np

from ._backend import NUMBA_ENABLED

# selector codes for the eigen-pair series (model constants)
DISTINCT_ROW1_L1 = 0
DISTINCT_ROW1_L2 = 1
DISTINCT_ROW1 = 2
DISTINCT_ROW2_L1 = 3
DISTINCT_ROW2_L2 = 4
DISTINCT_ROW2 = 5
DISTINCT_ROW2_LDIFF = 6

REPEATED_ROW1 = 0
REPEATED_SLOPE1 = 1
REPEATED_ROW2 = 2
REPEATED_SLOPE2 = 3

KIND_CD = 0
KIND_CV = 1


# ---------------------------------------------------------------------------
# scalar helpers (compiled by numba for the jit flavor)
# ---------------------------------------------------------------------------

def _signed_pow(x, power):
    if x > 0.0:
        return x ** power
    if x < 0.0:
        return -((-x) ** power)
    return 0.0


def _cd_term(u, v, alpha):
    # |u|^a + |v|^a - |u-v|^a, rearranged through expm1/log1p when one
    # argument dominates: the naive form cancels catastrophically there.
    au = abs(u)
    av = abs(v)
    if au == 0.0 or av == 0.0:
        return 0.0
    if au <= 0.5 * av:
        return au ** alpha - av ** alpha * math.expm1(alpha * math.log1p(-u / v))
    if av <= 0.5 * au:
        return av ** alpha - au ** alpha * math.expm1(alpha * math.log1p(-v / u))
    return au ** alpha + av ** alpha - abs(u - v) ** alpha


# ---------------------------------------------------------------------------
# loop flavor (source of the numba kernels; also usable un-jitted)
# ---------------------------------------------------------------------------

def _make_loop_impls(signed_pow, cd_term, decorate):
    def series_distinct(kind, minus, h, nterms, alpha, lam1, lam2, s1, s2, w, p, q):
        inv_d = 1.0 / (lam2 - lam1)
        am1 = alpha - 1.0
        natoms = s1.shape[0]
        pj1 = 1.0
        pj2 = 1.0
        ph1 = lam1 ** h
        ph2 = lam2 ** h
        total = 0.0
        comp = 0.0
        for _j in range(nterms + 1):
            for k in range(natoms):
                c11 = (lam2 * s1[k] - p[k]) * inv_d
                c12 = (p[k] - lam1 * s1[k]) * inv_d
                c21 = (lam2 * s2[k] - q[k]) * inv_d
                c22 = (q[k] - lam1 * s2[k]) * inv_d
                r1j = pj1 * c11 + pj2 * c12
                r2j = pj1 * c21 + pj2 * c22
                if minus:
                    u = ph1 * c11 + ph2 * c12
                    v = r2j
                else:
                    u = ph1 * c21 + ph2 * c22
                    v = r1j
                if kind == 0:
                    term = w[k] * cd_term(u, v, alpha)
                elif minus:
                    term = w[k] * u * signed_pow(v, am1)
                else:
                    term = w[k] * v * signed_pow(u, am1)
                y = term - comp
                t = total + y
                comp = (t - total) - y
                total = t
            pj1 *= lam1
            pj2 *= lam2
            ph1 *= lam1
            ph2 *= lam2
        return total

    def series_repeated(kind, minus, h, nterms, alpha, lam, s1, s2, w, p, q):
        am1 = alpha - 1.0
        natoms = s1.shape[0]
        pj = 1.0
        pjm1 = 0.0  # lam^(j-1); defined from j = 1 on
        pm = lam ** h
        pm1 = lam ** (h - 1) if h >= 1 else 0.0
        total = 0.0
        comp = 0.0
        for j in range(nterms + 1):
            m = h + j
            for k in range(natoms):
                if j == 0:
                    r1j = s1[k]
                    r2j = s2[k]
                else:
                    r1j = j * pjm1 * p[k] - (j - 1) * pj * s1[k]
                    r2j = j * pjm1 * q[k] - (j - 1) * pj * s2[k]
                if m == 0:
                    r1m = s1[k]
                    r2m = s2[k]
                else:
                    r1m = m * pm1 * p[k] - (m - 1) * pm * s1[k]
                    r2m = m * pm1 * q[k] - (m - 1) * pm * s2[k]
                if minus:
                    u = r1m
                    v = r2j
                else:
                    u = r2m
                    v = r1j
                if kind == 0:
                    term = w[k] * cd_term(u, v, alpha)
                elif minus:
                    term = w[k] * u * signed_pow(v, am1)
                else:
                    term = w[k] * v * signed_pow(u, am1)
                y = term - comp
                t = total + y
                comp = (t - total) - y
                total = t
            pjm1 = pj
            pj *= lam
            pm1 = pm
            pm *= lam
        return total

    def pair_series_distinct(fsel, gsel, nterms, alpha, lam1, lam2, s1, s2, w, p, q):
        inv_d = 1.0 / (lam2 - lam1)
        am1 = alpha - 1.0
        natoms = s1.shape[0]
        pj1 = 1.0
        pj2 = 1.0
        total = 0.0
        comp = 0.0
        for _j in range(nterms + 1):
            for k in range(natoms):
                r1a = pj1 * (lam2 * s1[k] - p[k]) * inv_d
                r1b = pj2 * (p[k] - lam1 * s1[k]) * inv_d
                r2a = pj1 * (lam2 * s2[k] - q[k]) * inv_d
                r2b = pj2 * (q[k] - lam1 * s2[k]) * inv_d
                if fsel == 0:
                    f = r1a
                elif fsel == 1:
                    f = r1b
                elif fsel == 2:
                    f = r1a + r1b
                elif fsel == 3:
                    f = r2a
                elif fsel == 4:
                    f = r2b
                elif fsel == 5:
                    f = r2a + r2b
                else:
                    f = r2a - r2b
                if gsel == 0:
                    g = r1a
                elif gsel == 1:
                    g = r1b
                elif gsel == 2:
                    g = r1a + r1b
                elif gsel == 3:
                    g = r2a
                elif gsel == 4:
                    g = r2b
                elif gsel == 5:
                    g = r2a + r2b
                else:
                    g = r2a - r2b
                term = w[k] * f * signed_pow(g, am1)
                y = term - comp
                t = total + y
                comp = (t - total) - y
                total = t
            pj1 *= lam1
            pj2 *= lam2
        return total

    def pair_series_repeated(fsel, gsel, nterms, alpha, lam, s1, s2, w, p, q):
        am1 = alpha - 1.0
        natoms = s1.shape[0]
        pj = 1.0
        pjm1 = 1.0 / lam  # slope terms carry lam^(j-1) from j = 0 on
        total = 0.0
        comp = 0.0
        for j in range(nterms + 1):
            for k in range(natoms):
                if j == 0:
                    row1 = s1[k]
                    row2 = s2[k]
                else:
                    row1 = j * pjm1 * p[k] - (j - 1) * pj * s1[k]
                    row2 = j * pjm1 * q[k] - (j - 1) * pj * s2[k]
                slope1 = pjm1 * (p[k] - lam * s1[k])
                slope2 = pjm1 * (q[k] - lam * s2[k])
                if fsel == 0:
                    f = row1
                elif fsel == 1:
                    f = slope1
                elif fsel == 2:
                    f = row2
                else:
                    f = slope2
                if gsel == 0:
                    g = row1
                elif gsel == 1:
                    g = slope1
                elif gsel == 2:
                    g = row2
                else:
                    g = slope2
                term = w[k] * f * signed_pow(g, am1)
                y = term - comp
                t = total + y
                comp = (t - total) - y
                total = t
            pjm1 = pj
            pj *= lam
        return total

    def ar1_recursion(a1, a2, a3, a4, z1, z2, burn, out1, out2):
        x1 = 0.0
        x2 = 0.0
        n = z1.shape[0]
        for t in range(n):
            nx1 = a1 * x1 + a2 * x2 + z1[t]
            nx2 = a3 * x1 + a4 * x2 + z2[t]
            x1 = nx1
            x2 = nx2
            if t >= burn:
                out1[t - burn] = x1
                out2[t - burn] = x2

    def cms_transform(alpha, phi, expw, out):
        inv_a = 1.0 / alpha
        tilt = (1.0 - alpha) * inv_a
        n = phi.shape[0]
        for i in range(n):
            ph = phi[i]
            out[i] = (
                math.sin(alpha * ph)
                / math.cos(ph) ** inv_a
                * (math.cos((alpha - 1.0) * ph) / expw[i]) ** tilt
            )

    return {
        "series_distinct": decorate(series_distinct),
        "series_repeated": decorate(series_repeated),
        "pair_series_distinct": decorate(pair_series_distinct),
        "pair_series_repeated": decorate(pair_series_repeated),
        "ar1_recursion": decorate(ar1_recursion),
        "cms_transform": decorate(cms_transform),
    }


# ---------------------------------------------------------------------------
# numpy flavor
# ---------------------------------------------------------------------------

def _cd_terms_np(u, v, alpha):
    au = np.abs(u)
    av = np.abs(v)
    with np.errstate(invalid="ignore"):
        out = au ** alpha + av ** alpha - np.abs(u - v) ** alpha
    m1 = (au <= 0.5 * av) & (av > 0.0)
    if m1.any():
        t = u[m1] / v[m1]
        out[m1] = au[m1] ** alpha - av[m1] ** alpha * np.expm1(alpha * np.log1p(-t))
    m2 = (av <= 0.5 * au) & (au > 0.0) & ~m1
    if m2.any():
        t = v[m2] / u[m2]
        out[m2] = av[m2] ** alpha - au[m2] ** alpha * np.expm1(alpha * np.log1p(-t))
    out[(au == 0.0) | (av == 0.0)] = 0.0
    return out


def _signed_pow_np(x, power):
    return np.sign(x) * np.abs(x) ** power


def _distinct_rows_np(h, nterms, lam1, lam2, s1, s2, p, q):
    # eigen-component coefficient tables, shape (nterms+1, natoms) each
    inv_d = 1.0 / (lam2 - lam1)
    j = np.arange(nterms + 1)
    pj1 = lam1 ** j
    pj2 = lam2 ** j
    c11 = (lam2 * s1 - p) * inv_d
    c12 = (p - lam1 * s1) * inv_d
    c21 = (lam2 * s2 - q) * inv_d
    c22 = (q - lam1 * s2) * inv_d
    r1a_j = np.outer(pj1, c11)
    r1b_j = np.outer(pj2, c12)
    r2a_j = np.outer(pj1, c21)
    r2b_j = np.outer(pj2, c22)
    sh1 = lam1 ** int(h)
    sh2 = lam2 ** int(h)
    return (r1a_j, r1b_j, r2a_j, r2b_j, sh1 * r1a_j, sh2 * r1b_j, sh1 * r2a_j, sh2 * r2b_j)


def _repeated_rows_np(h, nterms, lam, s1, s2, p, q):
    j = np.arange(nterms + 1)
    m = j + int(h)
    pj = lam ** j
    pjm1 = np.empty(nterms + 1)
    pjm1[0] = 0.0
    pjm1[1:] = pj[:-1]
    pm = lam ** m
    pm1 = np.empty(nterms + 1)
    if h >= 1:
        pm1[:] = lam ** (m - 1)
    else:
        pm1[0] = 0.0
        pm1[1:] = pm[:-1]

    r1j = np.outer(j * pjm1, p) - np.outer((j - 1) * pj, s1)
    r2j = np.outer(j * pjm1, q) - np.outer((j - 1) * pj, s2)
    r1j[0] = s1
    r2j[0] = s2
    r1m = np.outer(m * pm1, p) - np.outer((m - 1) * pm, s1)
    r2m = np.outer(m * pm1, q) - np.outer((m - 1) * pm, s2)
    if h == 0:
        r1m[0] = s1
        r2m[0] = s2
    return r1j, r2j, r1m, r2m


def _series_distinct_np(kind, minus, h, nterms, alpha, lam1, lam2, s1, s2, w, p, q):
    r1a_j, r1b_j, r2a_j, r2b_j, r1a_m, r1b_m, r2a_m, r2b_m = _distinct_rows_np(
        h, nterms, lam1, lam2, s1, s2, p, q
    )
    if minus:
        u = r1a_m + r1b_m
        v = r2a_j + r2b_j
    else:
        u = r2a_m + r2b_m
        v = r1a_j + r1b_j
    if kind == KIND_CD:
        terms = w * _cd_terms_np(u, v, alpha)
    elif minus:
        terms = w * u * _signed_pow_np(v, alpha - 1.0)
    else:
        terms = w * v * _signed_pow_np(u, alpha - 1.0)
    return math.fsum(terms.ravel())


def _series_repeated_np(kind, minus, h, nterms, alpha, lam, s1, s2, w, p, q):
    r1j, r2j, r1m, r2m = _repeated_rows_np(h, nterms, lam, s1, s2, p, q)
    if minus:
        u, v = r1m, r2j
    else:
        u, v = r2m, r1j
    if kind == KIND_CD:
        terms = w * _cd_terms_np(u, v, alpha)
    elif minus:
        terms = w * u * _signed_pow_np(v, alpha - 1.0)
    else:
        terms = w * v * _signed_pow_np(u, alpha - 1.0)
    return math.fsum(terms.ravel())


def _pair_series_distinct_np(fsel, gsel, nterms, alpha, lam1, lam2, s1, s2, w, p, q):
    r1a, r1b, r2a, r2b, _, _, _, _ = _distinct_rows_np(0, nterms, lam1, lam2, s1, s2, p, q)
    table = {
        DISTINCT_ROW1_L1: r1a,
        DISTINCT_ROW1_L2: r1b,
        DISTINCT_ROW1: r1a + r1b,
        DISTINCT_ROW2_L1: r2a,
        DISTINCT_ROW2_L2: r2b,
        DISTINCT_ROW2: r2a + r2b,
        DISTINCT_ROW2_LDIFF: r2a - r2b,
    }
    terms = w * table[fsel] * _signed_pow_np(table[gsel], alpha - 1.0)
    return math.fsum(terms.ravel())


def _pair_series_repeated_np(fsel, gsel, nterms, alpha, lam, s1, s2, w, p, q):
    j = np.arange(nterms + 1)
    pj = lam ** j
    pjm1 = lam ** (j - 1)  # integer exponents; includes lam^(-1) at j = 0
    row1 = np.outer(j * pjm1, p) - np.outer((j - 1) * pj, s1)
    row2 = np.outer(j * pjm1, q) - np.outer((j - 1) * pj, s2)
    row1[0] = s1
    row2[0] = s2
    slope1 = np.outer(pjm1, p - lam * s1)
    slope2 = np.outer(pjm1, q - lam * s2)
    table = {
        REPEATED_ROW1: row1,
        REPEATED_SLOPE1: slope1,
        REPEATED_ROW2: row2,
        REPEATED_SLOPE2: slope2,
    }
    terms = w * table[fsel] * _signed_pow_np(table[gsel], alpha - 1.0)
    return math.fsum(terms.ravel())


def _ar1_recursion_np(a1, a2, a3, a4, z1, z2, burn, out1, out2):
    # scalar recursion on python floats: same operation order as the jitted
    # loop, so both backends agree bit for bit
    x1 = 0.0
    x2 = 0.0
    n = z1.shape[0]
    for t in range(n):
        nx1 = a1 * x1 + a2 * x2 + z1[t]
        nx2 = a3 * x1 + a4 * x2 + z2[t]
        x1 = nx1
        x2 = nx2
        if t >= burn:
            out1[t - burn] = x1
            out2[t - burn] = x2


def _cms_transform_np(alpha, phi, expw, out):
    inv_a = 1.0 / alpha
    tilt = (1.0 - alpha) * inv_a
    np.multiply(
        np.sin(alpha * phi) / np.cos(phi) ** inv_a,
        (np.cos((alpha - 1.0) * phi) / expw) ** tilt,
        out=out,
    )


_NUMPY_IMPLS = {
    "series_distinct": _series_distinct_np,
    "series_repeated": _series_repeated_np,
    "pair_series_distinct": _pair_series_distinct_np,
    "pair_series_repeated": _pair_series_repeated_np,
    "ar1_recursion": _ar1_recursion_np,
    "cms_transform": _cms_transform_np,
}

IMPLEMENTATIONS = {"numpy": _NUMPY_IMPLS}

if NUMBA_ENABLED:
    from numba import njit

    _jit = njit(cache=True, fastmath=False)
    _signed_pow_jit = _jit(_signed_pow)
    _cd_term_jit = _jit(_cd_term)
    IMPLEMENTATIONS["numba"] = _make_loop_impls(_signed_pow_jit, _cd_term_jit, _jit)

_ACTIVE = IMPLEMENTATIONS["numba"] if NUMBA_ENABLED else IMPLEMENTATIONS["numpy"]

series_distinct = _ACTIVE["series_distinct"]
series_repeated = _ACTIVE["series_repeated"]
pair_series_distinct = _ACTIVE["pair_series_distinct"]
pair_series_repeated = _ACTIVE["pair_series_repeated"]
ar1_recursion = _ACTIVE["ar1_recursion"]
cms_transform = _ACTIVE["cms_transform"]
