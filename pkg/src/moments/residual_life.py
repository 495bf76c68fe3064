"""
Residual life Y - t | Y > t and reversed residual life t - Y | Y <= t.

Both are binomial combinations of the partial moments of Y, so they share the series (and the quadrature fallback)
of `src.moments.moments.partial_moment`.
"""
import math

from scipy.special import comb

from src.ewl_core.distribution import cdf, survival
from src.moments.kernel import KernelTails
from src.moments.moments import partial_moment
from src.moments.quadrature import integrate_against_density, support_upper_limit


def _validate_order(r):
    if int(r) != r or r < 1:
        raise ValueError(f"Residual moment order must be a positive integer, but got {r}")


def _validate_time(t):
    if not (math.isfinite(t) and t > 0):
        raise ValueError(f"Residual life is only defined here for finite t > 0, but got t={t}")


def residual_moment(p, r, t, policy=None, stats=None):
    """
    r'th moment of the residual life, m_r(t) = E[(Y - t)^r | Y > t]
    = (1 / S(t)) Σ_{i=0}^{r} C(r, i) (-t)^(r-i) ∫_t^∞ y^i f(y) dy.

    :param p: Distribution parameters.
    :type p: src.ewl_core.params.EwlParams
    :param r: Order, >= 1.
    :type r: int
    :param t: Age, > 0.
    :type t: float
    :param policy: Truncation rules for the series.
    :type policy: src.special.configuration.SeriesPolicy | None
    :param stats: Stats to record series events in.
    :type stats: src.moments.series_stats.SeriesStats | None
    :rtype: float
    """
    _validate_order(r)
    _validate_time(t)
    s = survival(p, t)
    if s <= 0:
        raise ValueError(f"Survival probability underflows at t={t}; the residual life is undefined there")

    total = 0.0
    for i in range(int(r) + 1):
        upper_moment = s if i == 0 else partial_moment(p, i, t, KernelTails.UPPER, policy, stats).value
        total += comb(r, i, exact=True) * (-t) ** (r - i) * upper_moment
    return total / s


def residual_moment_quadrature(p, r, t, quadrature_policy=None):
    _validate_order(r)
    _validate_time(t)
    s = survival(p, t)
    hi = support_upper_limit(p, t, quadrature_policy)
    return integrate_against_density(p, lambda y: (y - t) ** r, t, hi, quadrature_policy).value / s


def mean_residual_life(p, t, policy=None, stats=None):
    """
    Mean residual life m(t) = E[Y - t | Y > t] = (1 / S(t)) ∫_t^∞ y f(y) dy - t.
    """
    _validate_time(t)
    s = survival(p, t)
    if s <= 0:
        raise ValueError(f"Survival probability underflows at t={t}; the mean residual life is undefined there")
    return partial_moment(p, 1, t, KernelTails.UPPER, policy, stats).value / s - t


def residual_variance(p, t, policy=None, stats=None):
    """Var(Y - t | Y > t) = m_2(t) - m_1(t)^2."""
    m1 = mean_residual_life(p, t, policy, stats)
    m2 = residual_moment(p, 2, t, policy, stats)
    return m2 - m1 ** 2


def reversed_residual_moment(p, r, t, policy=None, stats=None):
    """
    r'th moment of the reversed residual life, μ_r(t) = E[(t - Y)^r | Y <= t]
    = (1 / F(t)) Σ_{i=0}^{r} C(r, i) t^(r-i) (-1)^i ∫_0^t y^i f(y) dy.

    :param p: Distribution parameters.
    :type p: src.ewl_core.params.EwlParams
    :param r: Order, >= 1.
    :type r: int
    :param t: Age, > 0.
    :type t: float
    :rtype: float
    """
    _validate_order(r)
    _validate_time(t)
    f = cdf(p, t)
    if f <= 0:
        raise ValueError(f"Distribution function underflows at t={t}; the reversed residual life is undefined there")

    total = 0.0
    for i in range(int(r) + 1):
        lower_moment = f if i == 0 else partial_moment(p, i, t, KernelTails.LOWER, policy, stats).value
        total += comb(r, i, exact=True) * t ** (r - i) * (-1) ** i * lower_moment
    return total / f


def reversed_residual_moment_quadrature(p, r, t, quadrature_policy=None):
    _validate_order(r)
    _validate_time(t)
    f = cdf(p, t)
    return integrate_against_density(p, lambda y: (t - y) ** r, 0.0, t, quadrature_policy).value / f


def reversed_residual_variance(p, t, policy=None, stats=None):
    """Var(t - Y | Y <= t) = μ_2(t) - μ_1(t)^2."""
    mu1 = reversed_residual_moment(p, 1, t, policy, stats)
    mu2 = reversed_residual_moment(p, 2, t, policy, stats)
    return mu2 - mu1 ** 2
