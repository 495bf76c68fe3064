import math
from dataclasses import replace

from core_data_modules.logging import Logger
from scipy.special import gammaln

from src.common.errors import NonConvergenceError
from src.ewl_core.distribution import log_pdf
from src.moments.configuration import QuadraturePolicy
from src.moments.kernel import KernelTails, binomial_kernel
from src.moments.quadrature import integrate_over_support, support_upper_limit
from src.moments.series_stats import SeriesEvents
from src.special.configuration import SeriesPolicy
from src.special.series import truncated_sum

log = Logger(__name__)

_NEGLIGIBLE_FRACTION = 1e-3
_SMALLEST_TAIL = 1e-300


def _validate_renyi_order(p, r):
    if not (r > 0 and r != 1):
        raise ValueError(f"Rényi entropy order must be > 0 and != 1, but got r={r}")
    if not r * (p.gamma_ - 1) + 1 > 0:
        raise ValueError(f"Rényi entropy of order {r} needs r(γ - 1) + 1 > 0, but γ={p.gamma_}")
    if not r * (p.alpha * p.gamma_ - 1) + 1 > 0:
        raise ValueError(f"f^r is not integrable at the origin for r={r}, α={p.alpha}, γ={p.gamma_} "
                         f"(needs r(αγ - 1) + 1 > 0)")


def _density_power_integral_series(p, r, policy, stats):
    """
    ∫_0^∞ f(y)^r dy, expanding (1 - θ G^α)^(-r) as a negative binomial series:

        (αθ / -log(1 - θ))^r (γβ)^(r-1) Σ_j [Γ(r + j) / (j! Γ(r))] θ^j K(α(r + j) - r, (r(γ - 1) + 1)/γ, r; 0, ∞).
    """
    shape = (r * (p.gamma_ - 1) + 1) / p.gamma_
    log_theta = math.log(p.theta)
    log_gamma_r = float(gammaln(r))
    # K(a, q, r; 0, ∞) <= Γ(q) r^-q once a >= 0.
    log_bound = float(gammaln(shape)) - shape * math.log(r)
    first_term = []

    def term(j):
        a = p.alpha * (r + j) - r
        log_weight = float(gammaln(r + j) - gammaln(j + 1)) - log_gamma_r + j * log_theta
        if j > 0 and a >= 0 and \
                log_weight + log_bound < math.log(_NEGLIGIBLE_FRACTION * policy.rel_tol * first_term[0]):
            return 0.0
        value = math.exp(log_weight) * binomial_kernel(a, shape, r, 0.0, KernelTails.UPPER, policy, stats)
        if j == 0:
            first_term.append(max(value, 1e-300))
        return value

    result = truncated_sum(term, policy)
    log_prefactor = (r * (math.log(p.alpha) + log_theta - math.log(-math.log1p(-p.theta)))
                     + (r - 1) * (math.log(p.gamma_) + math.log(p.beta)))
    return math.exp(log_prefactor) * result.value


def density_power_integral_quadrature(p, r, quadrature_policy=None):
    """
    ∫_0^∞ f(y)^r dy by adaptive quadrature. f^r falls off like S^r in the upper tail, so for r < 1 the range is cut
    where S^r, rather than S, reaches the policy's tail probability.
    """
    policy = QuadraturePolicy() if quadrature_policy is None else quadrature_policy
    if r < 1:
        policy = replace(policy, tail_probability=max(policy.tail_probability ** (1 / r), _SMALLEST_TAIL))
    hi = support_upper_limit(p, 0.0, policy)
    value, _ = integrate_over_support(p, lambda y: math.exp(r * log_pdf(p, y)), 0.0, hi, policy)
    return value


def renyi_entropy(p, r, policy=None, stats=None):
    """
    Rényi entropy I_R(r) = log(∫ f(y)^r dy) / (1 - r).

    :param p: Distribution parameters.
    :type p: src.ewl_core.params.EwlParams
    :param r: Order, > 0 and != 1.
    :type r: float
    :param policy: Truncation rules for the series.
    :type policy: src.special.configuration.SeriesPolicy | None
    :param stats: Stats to record series events in.
    :type stats: src.moments.series_stats.SeriesStats | None
    :rtype: float
    """
    _validate_renyi_order(p, r)
    policy = SeriesPolicy.from_environment() if policy is None else policy
    try:
        integral = _density_power_integral_series(p, r, policy, stats)
        if stats is not None:
            stats.add_event(SeriesEvents.SERIES_CONVERGED)
    except NonConvergenceError as e:
        log.debug(f"Rényi entropy series for r={r} did not converge ({e}); using quadrature")
        if stats is not None:
            stats.add_event(SeriesEvents.SERIES_FELL_BACK_TO_QUADRATURE)
        integral = density_power_integral_quadrature(p, r)
    return math.log(integral) / (1 - r)


def renyi_entropy_quadrature(p, r, quadrature_policy=None):
    _validate_renyi_order(p, r)
    return math.log(density_power_integral_quadrature(p, r, quadrature_policy)) / (1 - r)


def shannon_entropy(p, quadrature_policy=None):
    """
    Shannon entropy E[-log f(Y)], by quadrature of -f log f.

    :param p: Distribution parameters.
    :type p: src.ewl_core.params.EwlParams
    :rtype: float
    """
    def integrand(y):
        log_density = float(log_pdf(p, y))
        if math.isinf(log_density):
            return 0.0
        return -math.exp(log_density) * log_density

    hi = support_upper_limit(p, 0.0, quadrature_policy)
    value, _ = integrate_over_support(p, integrand, 0.0, hi, quadrature_policy)
    return value
