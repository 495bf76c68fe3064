"""
Mean deviations, the Bonferroni and Lorenz curves, the scaled total time on test (TTT) transform and the Gini index.
"""
import math

from core_data_modules.logging import Logger
from scipy import integrate

from src.common.errors import NonConvergenceError
from src.ewl_core.distribution import cdf, quantile, survival
from src.moments.configuration import QuadraturePolicy
from src.moments.kernel import KernelTails, survival_kernel
from src.moments.moments import partial_moment, raw_moment
from src.moments.quadrature import integrate_against_density, integrate_over_support, support_upper_limit
from src.moments.series_stats import SeriesEvents
from src.special.configuration import SeriesPolicy
from src.special.series import truncated_sum

log = Logger(__name__)

_NEGLIGIBLE_FRACTION = 1e-3


def _lower_first_moment(p, x, policy, stats):
    """I(x) = ∫_0^x y f(y) dy."""
    return partial_moment(p, 1, x, KernelTails.LOWER, policy, stats).value


def mean_deviations(p, policy=None, stats=None):
    """
    Mean absolute deviations about the mean μ and the median M:

        δ1 = 2 μ F(μ) - 2 I(μ),   δ2 = μ - 2 I(M),   where I(x) = ∫_0^x y f(y) dy.

    :param p: Distribution parameters.
    :type p: src.ewl_core.params.EwlParams
    :param policy: Truncation rules for the series.
    :type policy: src.special.configuration.SeriesPolicy | None
    :param stats: Stats to record series events in.
    :type stats: src.moments.series_stats.SeriesStats | None
    :return: (δ1, δ2).
    :rtype: (float, float)
    """
    mean = raw_moment(p, 1, policy, stats).value
    median = float(quantile(p, 0.5))
    delta_mean = 2 * mean * cdf(p, mean) - 2 * _lower_first_moment(p, mean, policy, stats)
    delta_median = mean - 2 * _lower_first_moment(p, median, policy, stats)
    # Cancellation can leave tiny negative values when a deviation is near 0.
    return max(delta_mean, 0.0), max(delta_median, 0.0)


def mean_deviations_quadrature(p, quadrature_policy=None):
    mean = integrate_against_density(p, lambda y: y, policy=quadrature_policy).value
    median = float(quantile(p, 0.5))
    delta_mean = integrate_against_density(p, lambda y: abs(y - mean), policy=quadrature_policy).value
    delta_median = integrate_against_density(p, lambda y: abs(y - median), policy=quadrature_policy).value
    return delta_mean, delta_median


def _validate_point(x, name):
    if not x > 0:
        raise ValueError(f"{name} is only defined here for x > 0, but got x={x}")


def lorenz(p, x, policy=None, stats=None):
    """
    Lorenz curve L_F[F(x)] = (1/μ) ∫_0^x y f(y) dy.

    :rtype: float
    """
    _validate_point(x, "The Lorenz curve")
    if math.isinf(x):
        return 1.0
    mean = raw_moment(p, 1, policy, stats).value
    return min(_lower_first_moment(p, x, policy, stats) / mean, 1.0)


def bonferroni(p, x, policy=None, stats=None):
    """
    Bonferroni curve B_F[F(x)] = (1 / (μ F(x))) ∫_0^x y f(y) dy, so that L_F = B_F F.

    :param p: Distribution parameters.
    :type p: src.ewl_core.params.EwlParams
    :param x: Point, > 0.
    :type x: float
    :rtype: float
    """
    _validate_point(x, "The Bonferroni curve")
    if math.isinf(x):
        return 1.0
    f = cdf(p, x)
    if f <= 0:
        raise ValueError(f"Distribution function underflows at x={x}; the Bonferroni curve is undefined there")
    mean = raw_moment(p, 1, policy, stats).value
    return _lower_first_moment(p, x, policy, stats) / (mean * f)


def lorenz_quadrature(p, x, quadrature_policy=None):
    mean = integrate_against_density(p, lambda y: y, policy=quadrature_policy).value
    return integrate_against_density(p, lambda y: y, 0.0, x, quadrature_policy).value / mean


def bonferroni_quadrature(p, x, quadrature_policy=None):
    return lorenz_quadrature(p, x, quadrature_policy) / cdf(p, x)


def _integrated_survival_series(p, t, policy, stats):
    """
    ∫_0^t S(u) du from the expansion S = (1 / -log(1 - θ)) Σ_{k>=1} (θ^k / k) (1 - G^(αk)):

        (1 / -log(1 - θ)) Σ_k (θ^k / k) (1 / (γβ)) Σ_{i>=1} (-1)^(i+1) C(αk, i) i^(-1/γ) γ(1/γ; i (βt)^γ).
    """
    x = math.exp(p.gamma_ * (math.log(p.beta) + math.log(t)))
    shape = 1.0 / p.gamma_
    log_theta = math.log(p.theta)
    first_term = []

    def term(k):
        log_weight = k * log_theta - math.log(k)
        # Each kernel is bounded by t γβ.
        if k > 1 and log_weight + math.log(t) < math.log(_NEGLIGIBLE_FRACTION * policy.rel_tol * first_term[0]):
            return 0.0
        value = math.exp(log_weight) * survival_kernel(p.alpha * k, shape, x, policy, stats) / (p.gamma_ * p.beta)
        if k == 1:
            first_term.append(max(value, 1e-300))
        return value

    result = truncated_sum(term, policy, start=1)
    return result.value / -math.log1p(-p.theta)


def integrated_survival(p, t, policy=None, stats=None):
    """
    ∫_0^t S(u) du, by series with a quadrature fallback.

    :rtype: float
    """
    policy = SeriesPolicy.from_environment() if policy is None else policy
    try:
        value = _integrated_survival_series(p, t, policy, stats)
        if stats is not None:
            stats.add_event(SeriesEvents.SERIES_CONVERGED)
        return value
    except NonConvergenceError as e:
        log.debug(f"Integrated survival series at t={t} did not converge ({e}); using quadrature")
        if stats is not None:
            stats.add_event(SeriesEvents.SERIES_FELL_BACK_TO_QUADRATURE)
        return integrated_survival_quadrature(p, t)


def integrated_survival_quadrature(p, t, quadrature_policy=None):
    value, _ = integrate_over_support(p, lambda u: float(survival(p, u)), 0.0, t, quadrature_policy)
    return value


def scaled_ttt(p, t, policy=None, stats=None):
    """
    Scaled total time on test transform S_F[F(t)] = (1/μ) ∫_0^t S(u) du.

    :param p: Distribution parameters.
    :type p: src.ewl_core.params.EwlParams
    :param t: Time, > 0.
    :type t: float
    :param policy: Truncation rules for the series.
    :type policy: src.special.configuration.SeriesPolicy | None
    :param stats: Stats to record series events in.
    :type stats: src.moments.series_stats.SeriesStats | None
    :rtype: float
    """
    _validate_point(t, "The scaled TTT transform")
    if math.isinf(t):
        return 1.0
    mean = raw_moment(p, 1, policy, stats).value
    return min(max(integrated_survival(p, t, policy, stats) / mean, 0.0), 1.0)


def scaled_ttt_quadrature(p, t, quadrature_policy=None):
    mean = integrate_against_density(p, lambda y: y, policy=quadrature_policy).value
    return integrated_survival_quadrature(p, t, quadrature_policy) / mean


def gini(p, policy=None, stats=None, quadrature_policy=None):
    """
    Gini index G = 1 - ∫_0^1 S_F[F(t)] dF(t), integrating the scaled TTT transform over the probability scale.

    :rtype: float
    """
    if quadrature_policy is None:
        quadrature_policy = QuadraturePolicy()
    policy = SeriesPolicy.from_environment() if policy is None else policy
    mean = raw_moment(p, 1, policy, stats).value

    def integrand(xi):
        return min(integrated_survival(p, float(quantile(p, xi)), policy, stats) / mean, 1.0)

    # The transform is smooth in ξ; splitting near 1 keeps the far tail resolved.
    head, _ = integrate.quad(integrand, 0.0, 0.9, epsabs=0.0, epsrel=1e-8, limit=quadrature_policy.limit)
    tail, _ = integrate.quad(integrand, 0.9, 1.0, epsabs=0.0, epsrel=1e-8, limit=quadrature_policy.limit)
    return min(max(1.0 - head - tail, 0.0), 1.0)


def gini_quadrature(p, quadrature_policy=None):
    """G = 1 - (1/μ) ∫_0^∞ S(y)^2 dy."""
    mean = integrate_against_density(p, lambda y: y, policy=quadrature_policy).value
    hi = support_upper_limit(p, 0.0, quadrature_policy)
    value, _ = integrate_over_support(p, lambda y: float(survival(p, y)) ** 2, 0.0, hi, quadrature_policy)
    return 1.0 - value / mean
