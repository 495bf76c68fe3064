"""
The binomial kernels that every EWL series reduces to.

Expanding (1 - e^(-w))^a binomially turns

    K(a, p, s; lo, hi) = ∫_lo^hi w^(p-1) e^(-s w) (1 - e^(-w))^a dw

into Σ_k (-1)^k C(a, k) (k + s)^(-p) [incomplete gamma of p between (k + s) lo and (k + s) hi], which is the inner
sum of the moment, residual-life, inequality and entropy formulas. The binomial sum cancels badly once a is large,
and converges slowly when a + p is small, so each kernel is summed as a series only when that is predicted to be
both accurate and cheap; otherwise (or if the attempt fails) it is integrated directly.
"""
import math

import numpy as np
from core_data_modules.logging import Logger
from scipy import integrate
from scipy.special import gammainc, gammaincc, gammaln

from src.common.errors import NonConvergenceError
from src.moments.series_stats import SeriesEvents
from src.special.series import truncated_sum

log = Logger(__name__)

_EPSILON = np.finfo(float).eps
_INTEGRAL_REL_TOL = 1e-11
_INTEGRAL_LIMIT = 200


class KernelTails:
    UPPER = "upper"
    LOWER = "lower"


class _BinomialCoefficients:
    """C(a, k) for increasing k, by C(a, k + 1) = C(a, k) (a - k) / (k + 1)."""
    def __init__(self, a):
        self._a = a
        self._k = 0
        self._value = 1.0

    def __call__(self, k):
        assert k >= self._k, f"Binomial coefficients must be requested in increasing order ({k} < {self._k})"
        while self._k < k:
            self._value *= (self._a - self._k) / (self._k + 1)
            self._k += 1
        return self._value


def _log1mexp(w):
    """log(1 - e^(-w)) for a scalar w > 0."""
    if w < math.log(2.0):
        return math.log(-math.expm1(-w))
    return math.log1p(-math.exp(-w))


def _log_regularized_gamma(p, z, tail):
    if tail == KernelTails.UPPER:
        value = gammaincc(p, z)
    else:
        value = gammainc(p, z)
    return math.log(value) if value > 0 else -math.inf


def _log_largest_binomial(a):
    if a <= 1:
        return 0.0
    return float(gammaln(a + 1) - 2 * gammaln(a / 2 + 1))


def _series_is_viable(a, p, x, tail, policy):
    # Rounding in the largest term must stay below the requested tolerance.
    if a > 0 and _log_largest_binomial(a) > math.log(policy.rel_tol / _EPSILON):
        return False
    if float(a).is_integer() and a >= 0:
        return True

    # Terms fall off like k^-(a + 1 + p), or geometrically in the upper tail of a positive limit.
    exponent = a + 1 + p
    needed = math.inf if exponent <= 0 else policy.rel_tol ** (-1.0 / exponent)
    if tail == KernelTails.UPPER and x > 0:
        needed = min(needed, -math.log(policy.rel_tol) / x)
    return needed + policy.stagnation_window <= policy.max_terms_per_index


def _integrate(integrand, lo, hi, centre):
    if math.isinf(hi):
        centre = max(centre, lo)
        head, _ = integrate.quad(integrand, lo, centre, epsabs=0.0, epsrel=_INTEGRAL_REL_TOL,
                                 limit=_INTEGRAL_LIMIT) if centre > lo else (0.0, 0.0)
        tail, _ = integrate.quad(integrand, centre, math.inf, epsabs=0.0, epsrel=_INTEGRAL_REL_TOL,
                                 limit=_INTEGRAL_LIMIT)
        return head + tail

    points = [centre] if lo < centre < hi else None
    value, _ = integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=_INTEGRAL_REL_TOL, limit=_INTEGRAL_LIMIT,
                              points=points)
    return value


def _peak_location(a, p, shift):
    return 1.0 + math.log1p(max(a, 0.0)) + (p / shift if shift > 0 else p)


def _limits(x, tail):
    return (x, math.inf) if tail == KernelTails.UPPER else (0.0, x)


def _binomial_kernel_integral(a, p, shift, x, tail):
    def integrand(w):
        if w <= 0:
            return 0.0
        return math.exp((p - 1) * math.log(w) - shift * w + a * _log1mexp(w))

    lo, hi = _limits(x, tail)
    return _integrate(integrand, lo, hi, _peak_location(a, p, shift))


def _binomial_kernel_series(a, p, shift, x, tail, policy):
    coefficients = _BinomialCoefficients(a)
    log_gamma_p = float(gammaln(p))

    def term(k):
        c = coefficients(k)
        if c == 0:
            return 0.0
        log_weight = log_gamma_p - p * math.log(k + shift) + _log_regularized_gamma(p, (k + shift) * x, tail)
        sign = 1.0 if k % 2 == 0 else -1.0
        return sign * c * math.exp(log_weight)

    return truncated_sum(term, policy).value


def binomial_kernel(a, p, shift, x, tail, policy, stats=None):
    """
    K(a, p, s; x, ∞) (tail=UPPER) or K(a, p, s; 0, x) (tail=LOWER), where
    K(a, p, s; lo, hi) = ∫_lo^hi w^(p-1) e^(-s w) (1 - e^(-w))^a dw.

    :param a: Binomial exponent; a + p > 0 is needed for the integral to exist.
    :type a: float
    :param p: Power of w, > 0.
    :type p: float
    :param shift: Exponential rate s > 0.
    :type shift: float
    :param x: Finite limit of the integral, >= 0.
    :type x: float
    :param tail: KernelTails.UPPER or KernelTails.LOWER.
    :type tail: str
    :param policy: Truncation rules for the binomial series.
    :type policy: src.special.configuration.SeriesPolicy
    :param stats: Stats to record integral fallbacks in.
    :type stats: src.moments.series_stats.SeriesStats | None
    :rtype: float
    """
    if tail == KernelTails.LOWER and x == 0:
        return 0.0
    if _series_is_viable(a, p, x, tail, policy):
        try:
            return _binomial_kernel_series(a, p, shift, x, tail, policy)
        except NonConvergenceError as e:
            log.debug(f"Binomial kernel series failed for a={a}, p={p} ({e}); integrating instead")

    if stats is not None:
        stats.add_event(SeriesEvents.INNER_SUM_INTEGRATED)
    return _binomial_kernel_integral(a, p, shift, x, tail)


def _survival_kernel_integral(a, p, x):
    def integrand(w):
        if w <= 0:
            return 0.0
        return math.exp((p - 1) * math.log(w)) * -math.expm1(a * _log1mexp(w))

    return _integrate(integrand, 0.0, x, _peak_location(a, p, 1.0))


def _survival_kernel_series(a, p, x, policy):
    coefficients = _BinomialCoefficients(a)
    log_gamma_p = float(gammaln(p))

    def term(i):
        c = coefficients(i)
        if c == 0:
            return 0.0
        log_weight = log_gamma_p - p * math.log(i) + _log_regularized_gamma(p, i * x, KernelTails.LOWER)
        sign = 1.0 if i % 2 == 1 else -1.0
        return sign * c * math.exp(log_weight)

    return truncated_sum(term, policy, start=1).value


def survival_kernel(a, p, x, policy, stats=None):
    """
    ∫_0^x w^(p-1) (1 - (1 - e^(-w))^a) dw, whose binomial series is Σ_{i>=1} (-1)^(i+1) C(a, i) i^(-p) γ(p; i x).

    :param a: Exponent, > 0.
    :type a: float
    :param p: Power of w, > 0.
    :type p: float
    :param x: Upper limit, >= 0.
    :type x: float
    :param policy: Truncation rules for the binomial series.
    :type policy: src.special.configuration.SeriesPolicy
    :param stats: Stats to record integral fallbacks in.
    :type stats: src.moments.series_stats.SeriesStats | None
    :rtype: float
    """
    if x == 0:
        return 0.0
    if _series_is_viable(a, p, x, KernelTails.LOWER, policy):
        try:
            return _survival_kernel_series(a, p, x, policy)
        except NonConvergenceError as e:
            log.debug(f"Survival kernel series failed for a={a}, p={p} ({e}); integrating instead")

    if stats is not None:
        stats.add_event(SeriesEvents.INNER_SUM_INTEGRATED)
    return _survival_kernel_integral(a, p, x)
