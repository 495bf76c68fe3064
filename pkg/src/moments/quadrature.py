import math

import numpy as np
from scipy import integrate

from src.ewl_core.distribution import log_pdf, quantile, survival, upper_quantile
from src.moments.configuration import QuadraturePolicy
from src.moments.moment_result import MomentMethods, MomentResult

_BREAKPOINT_PROBABILITIES = np.array([1e-8, 1e-4, 0.01, 0.1, 0.5, 0.9, 0.99, 0.9999])


def support_upper_limit(p, lo=0.0, policy=None):
    """
    :return: Upper integration limit for integrals over (lo, ∞): the quantile whose survival probability is
             `policy.tail_probability` times S(lo).
    :rtype: float
    """
    if policy is None:
        policy = QuadraturePolicy()
    tail = policy.tail_probability
    if lo > 0:
        tail = min(tail, tail * survival(p, lo))
    tail = max(tail, 1e-300)
    return max(upper_quantile(p, tail), lo)


def integrate_over_support(p, integrand, lo, hi, policy=None):
    """
    Integrates `integrand` over [lo, hi] adaptively, splitting the range at a fixed set of quantiles of p so that
    each piece sees one scale of the density.

    :param p: Distribution whose quantiles place the breakpoints.
    :type p: src.ewl_core.params.EwlParams
    :param integrand: Scalar function of y.
    :type integrand: callable of float -> float
    :param lo: Lower limit.
    :type lo: float
    :param hi: Upper limit.
    :type hi: float
    :param policy: Quadrature settings.
    :type policy: QuadraturePolicy | None
    :return: (integral, estimated absolute error)
    :rtype: (float, float)
    """
    if policy is None:
        policy = QuadraturePolicy()
    if hi <= lo:
        return 0.0, 0.0

    edges = [lo] + [float(x) for x in quantile(p, _BREAKPOINT_PROBABILITIES) if lo < x < hi] + [hi]
    total = 0.0
    error = 0.0
    for a, b in zip(edges, edges[1:]):
        value, abserr = integrate.quad(integrand, a, b, epsabs=0.0, epsrel=policy.rel_tol, limit=policy.limit)
        total += value
        error += abserr
    return total, error


def integrate_against_density(p, g, lo=0.0, hi=None, policy=None):
    """
    :return: ∫_lo^hi g(y) f(y) dy as a quadrature MomentResult. `hi` defaults to the far-tail quantile.
    :rtype: src.moments.moment_result.MomentResult
    """
    if hi is None:
        hi = support_upper_limit(p, lo, policy)

    def integrand(y):
        return g(y) * math.exp(log_pdf(p, y))

    value, error = integrate_over_support(p, integrand, lo, hi, policy)
    return MomentResult(value, MomentMethods.QUADRATURE, 0, error)
