"""Special functions: log-Gamma, lower incomplete gamma, Pochhammer symbol and
the Gauss hypergeometric value ``2F1(r+1, (r+1)alpha; r+2; z)`` for ``z <= 0``.
"""

import math

import mpmath

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 100_000


def ln_gamma(x: float) -> float:
    """Natural log of the Gamma function for ``x > 0``."""
    if not x > 0:
        raise ValueError(f"ln_gamma needs x > 0, got {x}")
    return math.lgamma(x)


def _gamma_series(k: float, s: float) -> float:
    # sum_{j>=0} s^j / (k (k+1) ... (k+j)); times s^k e^{-s} gives gamma(k, s)
    term = 1.0 / k
    total = term
    ap = k
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= s / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total
    raise ArithmeticError(f"incomplete gamma series did not converge (k={k}, s={s})")


def _gamma_contfrac(k: float, s: float) -> float:
    # modified Lentz for Gamma(k, s) e^{s} s^{-k}
    b = s + 1.0 - k
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - k)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"incomplete gamma continued fraction did not converge (k={k}, s={s})")


def _check_gamma_args(k: float, s: float) -> None:
    if not k > 0:
        raise ValueError(f"incomplete gamma needs k > 0, got {k}")
    if not s >= 0:
        raise ValueError(f"incomplete gamma needs s >= 0, got {s}")


def regularized_lower_gamma(k: float, s: float) -> float:
    """P(k, s) = gamma(k, s) / Gamma(k).

    Series below ``s = k + 1``, continued fraction for the complement above.
    Small values keep full relative accuracy, which is what the Poisson
    tail ``P(Poisson(mu) >= m) = P(m, mu)`` needs when ``mu`` is tiny.
    """
    _check_gamma_args(k, s)
    if s == 0:
        return 0.0
    log_pref = k * math.log(s) - s - math.lgamma(k)
    if s < k + 1.0:
        return math.exp(log_pref) * _gamma_series(k, s)
    return -math.expm1(log_pref + math.log(_gamma_contfrac(k, s)))


def regularized_upper_gamma(k: float, s: float) -> float:
    """Q(k, s) = 1 - P(k, s), accurate when small."""
    _check_gamma_args(k, s)
    if s == 0:
        return 1.0
    log_pref = k * math.log(s) - s - math.lgamma(k)
    if s < k + 1.0:
        return -math.expm1(log_pref + math.log(_gamma_series(k, s)))
    return math.exp(log_pref) * _gamma_contfrac(k, s)


def lower_incomplete_gamma(k: float, s: float) -> float:
    """gamma(k, s) = integral of e^{-u} u^{k-1} over [0, s]."""
    _check_gamma_args(k, s)
    if s == 0:
        return 0.0
    if s < k + 1.0:
        return math.exp(k * math.log(s) - s) * _gamma_series(k, s)
    return math.exp(math.lgamma(k)) * regularized_lower_gamma(k, s)


def pochhammer(b: float, k: int) -> float:
    """Rising factorial b (b+1) ... (b+k-1); 1 for k = 0."""
    if k < 0:
        raise ValueError(f"pochhammer needs k >= 0, got {k}")
    out = 1.0
    for j in range(k):
        out *= b + j
    return out


def _check_hyp_args(r: int, alpha: float, z: float) -> None:
    if r < 0 or int(r) != r:
        raise ValueError(f"r must be a nonnegative integer, got {r}")
    if not alpha > 1:
        raise ValueError(f"alpha must exceed 1, got {alpha}")
    if not z <= 0:
        raise ValueError(f"z must be <= 0, got {z}")


def hyp2f1_series(r: int, alpha: float, z: float) -> float:
    """2F1(r+1, (r+1)alpha; r+2; z) for -1 < z <= 0 by power series.

    The series is summed after the Pfaff transformation
    ``2F1(a, b; c; z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1))``: the new argument
    lies in [0, 1/2), so the sum converges geometrically and without the
    cancellation the alternating series in ``z`` suffers near ``z = -1``.
    """
    _check_hyp_args(r, alpha, z)
    if not z > -1:
        raise ValueError(f"series route needs -1 < z <= 0, got {z}")
    if z == 0:
        return 1.0
    a = r + 1.0
    bb = (r + 2.0) - (r + 1.0) * alpha
    c = r + 2.0
    x = z / (z - 1.0)
    term = 1.0
    total = 1.0
    j = 0
    while True:
        term *= (a + j) * (bb + j) / ((c + j) * (j + 1.0)) * x
        j += 1
        if term == 0.0:
            break
        total += term
        # once j exceeds |bb| the terms keep one sign and shrink geometrically
        if j > abs(bb) + 1 and abs(term) < abs(total) * 1e-15:
            break
        if j > _MAX_ITER:
            raise ArithmeticError("hypergeometric series did not converge")
    return (1.0 - z) ** (-a) * total


def gamma_sum_integral(r: int, k: float, a: float, c: float) -> mpmath.mpf:
    """(1/r!) * integral_0^1 t^r (a + c t)^{-k} dt for c > 0, k > r + 1.

    Closed form from r-fold integration by parts:
    a^{r+1-k} / (c^{r+1} (k-r-1)_{r+1})
      - sum_{m=1}^{r+1} (a+c)^{m-k} / ((r+1-m)! c^m (k-m)_m).
    The two parts nearly cancel when c/a is small, so the sum runs in
    extended precision with enough guard digits for the cancellation.
    """
    if not c > 0:
        raise ValueError(f"Gamma-sum form needs c > 0, got {c}")
    if not a > 0:
        raise ValueError(f"Gamma-sum form needs a > 0, got {a}")
    if not k > r + 1:
        raise ValueError(f"Gamma-sum form needs k > r + 1, got k={k}, r={r}")
    lost = (max(0.0, (r + 1) * math.log10(a / c))
            + math.log10(math.gamma(r + 2.0))
            + max(0.0, math.lgamma(k - r - 1) / math.log(10)))
    dps = 30 + int(math.ceil(lost))
    with mpmath.workdps(dps):
        A = mpmath.mpf(a)
        C = mpmath.mpf(c)
        K = mpmath.mpf(k)
        total = A ** (r + 1 - K) / (C ** (r + 1) * mpmath.rf(K - r - 1, r + 1))
        for m in range(1, r + 2):
            total -= (A + C) ** (m - K) / (mpmath.factorial(r + 1 - m) * C**m * mpmath.rf(K - m, m))
        return +total


def hyp2f1_gamma_sum(r: int, alpha: float, z: float) -> float:
    """2F1(r+1, (r+1)alpha; r+2; z) for z < 0 via the Gamma finite sum.

    Uses ``2F1 = (r+1)! * (1/r!) int_0^1 t^r (1 - z t)^{-(r+1)alpha} dt``,
    i.e. the integral with level 1 and drift ``-z``.
    """
    _check_hyp_args(r, alpha, z)
    if z == 0:
        return 1.0
    val = gamma_sum_integral(r, (r + 1) * alpha, 1.0, -z)
    return float(val * mpmath.factorial(r + 1))


def hyp2f1_ruin(r: int, alpha: float, z: float) -> float:
    """2F1(r+1, (r+1)alpha; r+2; z) for alpha > 1 and z <= 0.

    Power series for ``-1 < z <= 0``; the exact Gamma finite sum for
    ``z <= -1``.
    """
    _check_hyp_args(r, alpha, z)
    if z > -1:
        return hyp2f1_series(r, alpha, z)
    return hyp2f1_gamma_sum(r, alpha, z)
