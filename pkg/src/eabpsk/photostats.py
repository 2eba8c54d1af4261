"""Photodetection probability models and the special functions behind them.

Counting statistics over M signal-idler modes follow a negative binomial
law with a per-mode mean; balanced photocurrent receivers are handled with
a Gaussian model. Both CDFs are built on internal special functions
(log-gamma, regularized incomplete beta and gamma) so that accuracy and
iteration behavior are pinned down in one place.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, InvalidParameterError

_LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_SQRT2 = math.sqrt(2.0)

# Asymptotic series coefficients B_{2k} / (2k (2k-1)) for log-gamma.
_STIRLING_COEFFS = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    7.0 / 1092.0,
)

_CF_TINY = 1e-300
_CF_TOL = 1e-15
_CF_MAX_ITER = 300
_SERIES_MAX_ITER = 600

# Summation is exact enough below this count; the incomplete-beta identity
# takes over above it so tail evaluation stays O(1).
_CDF_SUM_LIMIT = 64


def log_gamma(z: float) -> float:
    """Natural log of the gamma function for z > 0.

    Asymptotic series after shifting the argument above 12; absolute error
    stays below 1e-13 on the log scale over the domain used here.
    """
    if z <= 0.0 or math.isnan(z):
        raise InvalidParameterError(f"log_gamma requires z > 0, got z={z}")
    shift = 0.0
    while z < 12.0:
        shift -= math.log(z)
        z += 1.0
    inv = 1.0 / z
    inv2 = inv * inv
    series = 0.0
    power = inv
    for c in _STIRLING_COEFFS:
        series += c * power
        power *= inv2
    return shift + (z - 0.5) * math.log(z) - z + _LN_SQRT_2PI + series


def _reg_lower_gamma_series(a: float, x: float) -> float:
    # P(a, x) for x < a + 1
    if x == 0.0:
        return 0.0
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(_SERIES_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _CF_TOL:
            return total * math.exp(-x + a * math.log(x) - log_gamma(a))
    raise ConvergenceError(f"incomplete gamma series stalled at a={a}, x={x}")


def _reg_upper_gamma_cf(a: float, x: float) -> float:
    # Q(a, x) for x >= a + 1, modified Lentz continued fraction
    b = x + 1.0 - a
    c = 1.0 / _CF_TINY
    d = 1.0 / b
    h = d
    for i in range(1, _SERIES_MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = b + an / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_TOL:
            return h * math.exp(-x + a * math.log(x) - log_gamma(a))
    raise ConvergenceError(f"incomplete gamma fraction stalled at a={a}, x={x}")


def erf(x: float) -> float:
    """Error function, accurate to about 1e-15 absolute."""
    if x == 0.0:
        return 0.0
    if x < 0.0:
        return -erf(-x)
    xsq = x * x
    if xsq < 1.5:
        return _reg_lower_gamma_series(0.5, xsq)
    return 1.0 - _reg_upper_gamma_cf(0.5, xsq)


def erfc(x: float) -> float:
    """Complementary error function, accurate in the far tail."""
    if x < 0.0:
        return 2.0 - erfc(-x)
    xsq = x * x
    if xsq < 1.5:
        return 1.0 - _reg_lower_gamma_series(0.5, xsq)
    return _reg_upper_gamma_cf(0.5, xsq)


def std_normal_cdf(z: float) -> float:
    return 0.5 * erfc(-z / _SQRT2)


def reg_inc_beta(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta I_x(a, b) by Lentz continued fraction.

    Uses the symmetry switch at x > (a+1)/(a+b+2) so the fraction always
    runs on its fast side. Absolute error at most 1e-12.
    """
    if not (a > 0.0 and b > 0.0):
        raise InvalidParameterError(f"reg_inc_beta requires a, b > 0, got a={a}, b={b}")
    if not (0.0 <= x <= 1.0):
        raise InvalidParameterError(f"reg_inc_beta requires 0 <= x <= 1, got x={x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    front = math.exp(
        log_gamma(a + b) - log_gamma(a) - log_gamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(x, a, b) / a
    return 1.0 - front * _beta_cf(1.0 - x, b, a) / b


def _beta_cf(x: float, a: float, b: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_TOL:
            return h
    raise ConvergenceError(
        f"incomplete beta fraction stalled at x={x}, a={a}, b={b}"
    )


@dataclass(frozen=True)
class NegBinParams:
    """Counting distribution for M modes with a common per-mode mean."""

    modes: int
    mean_per_mode: float

    def __post_init__(self) -> None:
        if not isinstance(self.modes, int) or self.modes < 1:
            raise InvalidParameterError(
                f"modes must be a positive integer, got modes={self.modes}"
            )
        if not (self.mean_per_mode >= 0.0):
            raise InvalidParameterError(
                f"mean_per_mode must be >= 0, got mean_per_mode={self.mean_per_mode}"
            )


@dataclass(frozen=True)
class GaussianParams:
    """Total-count (or photocurrent) Gaussian model over all modes.

    std = 0 is allowed only as the zero-signal degenerate guard; the CDF
    then becomes a step at the mean.
    """

    mean: float
    std: float

    def __post_init__(self) -> None:
        if not (self.std >= 0.0):
            raise InvalidParameterError(f"std must be >= 0, got std={self.std}")


def _check_count(n: int) -> int:
    if isinstance(n, float):
        if not n.is_integer():
            raise InvalidParameterError(f"count n must be an integer, got n={n}")
        n = int(n)
    if not isinstance(n, int):
        raise InvalidParameterError(f"count n must be an integer, got n={n!r}")
    if n < 0:
        raise InvalidParameterError(f"count n must be >= 0, got n={n}")
    return n


def nb_pmf(n: int, p: NegBinParams) -> float:
    """P(N = n) for the M-mode counting distribution, computed in log space."""
    n = _check_count(n)
    m = p.modes
    nbar = p.mean_per_mode
    if nbar == 0.0:
        return 1.0 if n == 0 else 0.0
    log_p = (
        log_gamma(n + m) - log_gamma(m) - log_gamma(n + 1.0)
        + n * (math.log(nbar) - math.log1p(nbar))
        - m * math.log1p(nbar)
    )
    return min(1.0, math.exp(log_p))


def nb_cdf(n: int, p: NegBinParams) -> float:
    """P(N <= n), by direct summation for small n and the identity
    P(N <= n) = I_q(M, n+1) with q = 1/(1+mean) above the summation limit."""
    n = _check_count(n)
    nbar = p.mean_per_mode
    if nbar == 0.0:
        return 1.0
    if n <= _CDF_SUM_LIMIT:
        return min(1.0, math.fsum(nb_pmf(k, p) for k in range(n + 1)))
    q = 1.0 / (1.0 + nbar)
    return reg_inc_beta(q, float(p.modes), n + 1.0)


def gaussian_cdf(x: float, g: GaussianParams) -> float:
    """P(X <= x) under the Gaussian model; a step function when std = 0."""
    if g.std == 0.0:
        if x < g.mean:
            return 0.0
        if x == g.mean:
            return 0.5
        return 1.0
    return std_normal_cdf((x - g.mean) / g.std)
