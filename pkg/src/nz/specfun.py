"""Self-contained special functions used throughout the package.

Everything here is a deterministic pure function of its arguments:
incomplete gamma functions (series / continued-fraction split), Bessel
functions J0, J1, J2 (one shared series/asymptotic kernel), and the
generalized Laguerre polynomials via the stable three-term recurrence.

Target accuracy
---------------
gamma_upper / gamma_lower : relative error <= 1e-12 on s in (0, 50],
    x in [0, 1e4] (values below the double-precision floor underflow to 0).
gamma_complete            : relative error <= 1e-13 on (0, 171.6];
    overflows to ``inf`` beyond the double range, like ``numpy``.
bessel_j1                 : absolute error <= 1e-12 for x <= 20 and
    relative (to the oscillation envelope) <= 1e-10 up to x ~ 1e8.

Out-of-domain arguments raise ``ValueError``, never a silent NaN.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "gamma_complete",
    "gamma_upper",
    "gamma_lower",
    "bessel_j0",
    "bessel_j1",
    "bessel_j2",
    "laguerre",
]

_MAX_ITER = 600
_EPS = 2.2e-16
_TINY_EXPONENT = -745.0  # exp() underflows to 0 below this


def gamma_complete(s: float) -> float:
    """Complete gamma function Gamma(s) for s > 0.

    Returns ``inf`` when the value exceeds the double range (s > 171.62).
    """
    s = float(s)
    if s <= 0.0 or math.isnan(s):
        raise ValueError(f"gamma_complete requires s > 0, got {s}")
    try:
        return math.gamma(s)
    except OverflowError:
        return math.inf


def _log_prefactor(s: float, x: float) -> float:
    """log(x^s e^-x) evaluated without forming the overflow-prone product."""
    return s * math.log(x) - x


def _lower_series(s: float, x: float) -> float:
    """Regularized lower incomplete gamma P(s, x) by power series.

    Valid (and used) for x < s + 1 where the series converges quickly and
    P stays well away from 1, so Q = 1 - P loses no precision.
    """
    if x == 0.0:
        return 0.0
    log_pre = _log_prefactor(s, x) - math.lgamma(s + 1.0)
    if log_pre < _TINY_EXPONENT:
        return 0.0
    term = 1.0
    total = 1.0
    a = s
    for _ in range(_MAX_ITER):
        a += 1.0
        term *= x / a
        total += term
        if abs(term) < _EPS * abs(total):
            return total * math.exp(log_pre)
    raise ArithmeticError(f"lower-gamma series failed to converge (s={s}, x={x})")


def _upper_cf(s: float, x: float) -> float:
    """Unnormalized Gamma(s, x) by modified-Lentz continued fraction.

    Used for x >= s + 1.
    """
    log_pre = _log_prefactor(s, x)
    if log_pre < _TINY_EXPONENT:
        return 0.0
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b if b != 0.0 else 1.0 / tiny
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return math.exp(log_pre) * h
    raise ArithmeticError(f"upper-gamma continued fraction failed (s={s}, x={x})")


def gamma_upper(s: float, x: float) -> float:
    """Upper incomplete gamma Gamma(s, x) = int_x^inf t^(s-1) e^-t dt.

    Series for x < s + 1, continued fraction otherwise, so the relative
    accuracy is uniform over the supported range.  Values smaller than
    the double-precision floor return exactly 0.0.
    """
    s = float(s)
    x = float(x)
    if s <= 0.0 or math.isnan(s):
        raise ValueError(f"gamma_upper requires s > 0, got s={s}")
    if x < 0.0 or math.isnan(x):
        raise ValueError(f"gamma_upper requires x >= 0, got x={x}")
    if x == 0.0:
        return gamma_complete(s)
    if x < s + 1.0:
        return gamma_complete(s) * (1.0 - _lower_series(s, x))
    return _upper_cf(s, x)


def gamma_lower(s: float, x: float) -> float:
    """Lower incomplete gamma gamma(s, x) = Gamma(s) - Gamma(s, x).

    Computed directly from the power series when x < s + 1, which keeps it
    accurate where the subtraction Gamma(s) - Gamma(s, x) would cancel
    catastrophically (x << 1).
    """
    s = float(s)
    x = float(x)
    if s <= 0.0 or math.isnan(s):
        raise ValueError(f"gamma_lower requires s > 0, got s={s}")
    if x < 0.0 or math.isnan(x):
        raise ValueError(f"gamma_lower requires x >= 0, got x={x}")
    if x == 0.0:
        return 0.0
    if x < s + 1.0:
        return gamma_complete(s) * _lower_series(s, x)
    return gamma_complete(s) - _upper_cf(s, x)


# ---------------------------------------------------------------------------
# Bessel functions J0, J1, J2: one kernel, series below _J_SERIES_CUT and the
# Hankel asymptotic expansion above.  The series is accumulated in extended
# precision (long double) because alternating-term cancellation near the
# crossover costs ~5 digits in plain doubles.
# ---------------------------------------------------------------------------

_J_SERIES_CUT = 16.0
_SQRT_HALF = math.sqrt(0.5)


def _jn_series(n: int, x: np.ndarray) -> np.ndarray:
    xl = x.astype(np.longdouble)
    half = xl / 2.0
    q = half * half
    term = half**n / math.factorial(n)
    total = term.copy()
    for m in range(1, 120):
        term = -term * q / (m * (m + n))
        total += term
        if np.all(np.abs(term) <= 1e-22 * (np.abs(total) + 1e-30)):
            break
    return total.astype(np.float64)


def _jn_asymptotic(n: int, x: np.ndarray) -> np.ndarray:
    """Hankel expansion J_n ~ sqrt(2/(pi x)) [P cos(chi) - Q sin(chi)].

    chi = x - (2n+1) pi/4 is never formed by subtraction: the phase shift is
    applied through exact angle-addition identities, so no accuracy is lost
    to argument rounding even at x ~ 1e8.
    """
    mu = 4.0 * n * n
    inv8x = 1.0 / (8.0 * x)
    p = np.ones_like(x)
    q = np.zeros_like(x)
    c = np.ones_like(x)
    live = np.ones_like(x, dtype=bool)
    prev = np.full_like(x, np.inf)
    for k in range(1, 40):
        c = c * (mu - (2 * k - 1) ** 2) * inv8x / k
        mag = np.abs(c)
        # stop per element once terms start growing (optimal truncation)
        live &= mag < prev
        prev = np.where(live, mag, prev)
        contrib = np.where(live, c, 0.0)
        if k % 2 == 0:
            p += contrib if k % 4 == 0 else -contrib
        else:
            q += contrib if k % 4 == 1 else -contrib
        if not np.any(live) or np.all(mag[live] < 1e-18):
            break
    sin_x = np.sin(x)
    cos_x = np.cos(x)
    # chi = x - (2n+1) pi/4 for n = 0, 1, 2
    if n == 0:
        cos_chi = _SQRT_HALF * (cos_x + sin_x)
        sin_chi = _SQRT_HALF * (sin_x - cos_x)
    elif n == 1:
        cos_chi = _SQRT_HALF * (sin_x - cos_x)
        sin_chi = -_SQRT_HALF * (sin_x + cos_x)
    elif n == 2:
        cos_chi = -_SQRT_HALF * (cos_x + sin_x)
        sin_chi = _SQRT_HALF * (cos_x - sin_x)
    else:  # pragma: no cover - only orders 0..2 are exposed
        chi = x - (2 * n + 1) * math.pi / 4.0
        cos_chi, sin_chi = np.cos(chi), np.sin(chi)
    return np.sqrt(2.0 / (math.pi * x)) * (p * cos_chi - q * sin_chi)


def _bessel_jn(n: int, x) -> np.ndarray | float:
    scalar = np.isscalar(x) or getattr(x, "ndim", 0) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if np.any(arr < 0.0) or np.any(np.isnan(arr)):
        raise ValueError(f"bessel_j{n} requires x >= 0")
    out = np.empty_like(arr)
    small = arr <= _J_SERIES_CUT
    if np.any(small):
        out[small] = _jn_series(n, arr[small])
    if np.any(~small):
        out[~small] = _jn_asymptotic(n, arr[~small])
    return float(out[0]) if scalar else out


def bessel_j0(x):
    """Bessel function J0(x) for x >= 0 (scalar or array)."""
    return _bessel_jn(0, x)


def bessel_j1(x):
    """Bessel function J1(x) for x >= 0 (scalar or array)."""
    return _bessel_jn(1, x)


def bessel_j2(x):
    """Bessel function J2(x) for x >= 0 (scalar or array)."""
    return _bessel_jn(2, x)


def laguerre(degree: int, order: float, x):
    """Generalized Laguerre polynomial L_degree^order(x).

    Three-term recurrence
        (m+1) L_{m+1} = (2m + order + 1 - x) L_m - (m + order) L_{m-1},
    stable for the small degrees (<= 10) needed here.  ``x`` may be a
    scalar or an array.
    """
    if degree < 0 or degree != int(degree):
        raise ValueError(f"laguerre degree must be a non-negative integer, got {degree}")
    degree = int(degree)
    xarr = np.asarray(x, dtype=np.float64)
    prev = np.ones_like(xarr)
    if degree == 0:
        return float(prev) if xarr.ndim == 0 else prev
    cur = order + 1.0 - xarr
    for m in range(1, degree):
        prev, cur = cur, ((2 * m + order + 1.0 - xarr) * cur - (m + order) * prev) / (m + 1.0)
    return float(cur) if xarr.ndim == 0 else cur
