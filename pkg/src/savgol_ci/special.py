"""Special functions for the normal and F distributions.

Scalar, pure-Python implementations: the diagnostics only ever need a
handful of evaluations, and keeping them here avoids a hard dependency
on a statistics library for three functions.
"""

import math

__all__ = [
    "norm_cdf",
    "norm_ppf",
    "betainc",
    "f_cdf",
    "f_sf",
    "f_ppf",
]

_SQRT2 = math.sqrt(2.0)

# Rational approximation to the inverse normal CDF (P. J. Acklam), good to
# about 1.2e-9 relative before refinement.
_A = (
    -3.969683028665376e01,
    2.209460984245205e02,
    -2.759285104469687e02,
    1.383577518672690e02,
    -3.066479806614716e01,
    2.506628277459239e00,
)
_B = (
    -5.447609879822406e01,
    1.615858368580409e02,
    -1.556989798598866e02,
    6.680131188771972e01,
    -1.328068155288572e01,
)
_C = (
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e00,
    -2.549732539343734e00,
    4.374664141464968e00,
    2.938163982698783e00,
)
_D = (
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e00,
    3.754408661907416e00,
)
_P_LOW = 0.02425


def norm_cdf(x):
    """Standard normal CDF."""
    return 0.5 * math.erfc(-x / _SQRT2)


def _norm_ppf_initial(p):
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
        den = (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        return num / den
    if p > 1.0 - _P_LOW:
        return -_norm_ppf_initial(1.0 - p)
    q = p - 0.5
    r = q * q
    num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
    den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
    return num / den


def norm_ppf(p):
    """Inverse of the standard normal CDF.

    Starts from a rational approximation and applies Halley steps
    against ``math.erfc``, which brings the result to within a few ulps.
    """
    p = float(p)
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    if p == 0.0:
        return -math.inf
    if p == 1.0:
        return math.inf
    if p > 0.5:
        # work in the lower tail where erfc keeps full relative precision
        return -norm_ppf(1.0 - p)
    x = _norm_ppf_initial(p)
    for _ in range(2):
        e = 0.5 * math.erfc(-x / _SQRT2) - p
        u = e * math.sqrt(2.0 * math.pi) * math.exp(0.5 * x * x)
        x = x - u / (1.0 + 0.5 * x * u)
    return x


def _betacf(a, b, x, tol=1e-15, max_iter=10000):
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    tiny = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for k in range(1, max_iter + 1):
        k2 = 2 * k
        aa = k * (b - k) * x / ((qam + k2) * (a + k2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + k) * (qab + k) * x / ((a + k2) * (qap + k2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < tol:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def betainc(a, b, x):
    """Regularized incomplete beta function I_x(a, b) for a, b > 0."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return float(x)
    log_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _betacf(a, b, x) / a
    return 1.0 - math.exp(log_front) * _betacf(b, a, 1.0 - x) / b


def _f_to_beta(x, d1, d2):
    return d1 * x / (d1 * x + d2)


def f_cdf(x, d1, d2):
    """CDF of the F distribution with (d1, d2) degrees of freedom."""
    if d1 <= 0 or d2 <= 0:
        raise ValueError("degrees of freedom must be positive")
    if x <= 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    # use the complementary form when it is the smaller tail
    t = _f_to_beta(x, d1, d2)
    if t > 0.5:
        return 1.0 - betainc(d2 / 2.0, d1 / 2.0, d2 / (d1 * x + d2))
    return betainc(d1 / 2.0, d2 / 2.0, t)


def f_sf(x, d1, d2):
    """Survival function 1 - CDF of the F distribution, without cancellation."""
    if x <= 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    return betainc(d2 / 2.0, d1 / 2.0, d2 / (d1 * x + d2))


def f_ppf(p, d1, d2, tol=1e-13):
    """Quantile of the F distribution, by bisection on the CDF in log space."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    lo, hi = -1.0, 1.0
    while f_cdf(math.exp(lo), d1, d2) > p:
        lo *= 2.0
    while f_cdf(math.exp(hi), d1, d2) < p:
        hi *= 2.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f_cdf(math.exp(mid), d1, d2) < p:
            lo = mid
        else:
            hi = mid
    return math.exp(0.5 * (lo + hi))
