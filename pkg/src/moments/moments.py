import math

from core_data_modules.logging import Logger
from scipy.special import gammaln

from src.common.errors import NonConvergenceError
from src.moments.kernel import KernelTails, binomial_kernel
from src.moments.moment_result import MomentMethods, MomentResult
from src.moments.quadrature import integrate_against_density, support_upper_limit
from src.moments.series_stats import SeriesEvents
from src.special.configuration import SeriesPolicy
from src.special.series import truncated_sum

log = Logger(__name__)

# Outer terms whose upper bound is below this fraction of rel_tol times the first term are not evaluated.
_NEGLIGIBLE_FRACTION = 1e-3


def _policy_or_default(policy):
    return SeriesPolicy.from_environment() if policy is None else policy


def _kernel_limit(p, y):
    if y == 0:
        return 0.0
    if math.isinf(y):
        return math.inf
    return math.exp(p.gamma_ * (math.log(p.beta) + math.log(y)))


def _partial_moment_series(p, i, y, tail, policy, stats):
    """
    ∫ y^i f(y) dy over (y, ∞) or (0, y) from the mixture expansion

        f = (αθ / -log(1 - θ)) Σ_j θ^j γβ^γ y^(γ-1) e^(-(βy)^γ) (1 - e^(-(βy)^γ))^((j+1)α - 1),

    which gives (αθ β^-i / -log(1 - θ)) Σ_j θ^j K((j+1)α - 1, 1 + i/γ, 1; ...).
    """
    shape = 1.0 + i / p.gamma_
    x = _kernel_limit(p, y)
    if tail == KernelTails.LOWER and x == 0:
        return MomentResult(0.0, MomentMethods.SERIES, 1, 0.0)
    log_theta = math.log(p.theta)
    log_prefactor = math.log(p.alpha) + log_theta - math.log(-math.log1p(-p.theta)) - i * math.log(p.beta)
    log_bound = float(gammaln(shape))
    first_term = []
    inner_integrals_before = 0 if stats is None else stats.event_counts[SeriesEvents.INNER_SUM_INTEGRATED]

    def term(j):
        a = (j + 1) * p.alpha - 1
        log_weight = j * log_theta
        if j > 0 and a >= 0 and \
                log_weight + log_bound < math.log(_NEGLIGIBLE_FRACTION * policy.rel_tol * first_term[0]):
            return 0.0
        value = math.exp(log_weight) * binomial_kernel(a, shape, 1.0, x, tail, policy, stats)
        if j == 0:
            first_term.append(max(value, 1e-300))
        return value

    result = truncated_sum(term, policy)
    prefactor = math.exp(log_prefactor)
    inner_integrals = 0 if stats is None else \
        stats.event_counts[SeriesEvents.INNER_SUM_INTEGRATED] - inner_integrals_before
    return MomentResult(prefactor * result.value, MomentMethods.SERIES, result.terms_used,
                        prefactor * result.est_error, inner_integrals)


def partial_moment_quadrature(p, i, y, tail, quadrature_policy=None):
    """Quadrature twin of `partial_moment`."""
    if tail == KernelTails.UPPER:
        return integrate_against_density(p, lambda v: v ** i, y, support_upper_limit(p, y, quadrature_policy),
                                         quadrature_policy)
    return integrate_against_density(p, lambda v: v ** i, 0.0, y, quadrature_policy)


def partial_moment(p, i, y, tail, policy=None, stats=None, quadrature_policy=None):
    """
    Partial moment ∫_y^∞ v^i f(v) dv (tail=UPPER) or ∫_0^y v^i f(v) dv (tail=LOWER).

    Evaluated by the mixture series; if that does not converge, falls back to quadrature and says so in the
    result's `method`.

    :param p: Distribution parameters.
    :type p: src.ewl_core.params.EwlParams
    :param i: Power, >= 0.
    :type i: int
    :param y: Limit, >= 0 (0 with tail=UPPER gives the full moment).
    :type y: float
    :param tail: src.moments.kernel.KernelTails.UPPER or LOWER.
    :type tail: str
    :rtype: src.moments.moment_result.MomentResult
    """
    policy = _policy_or_default(policy)
    try:
        result = _partial_moment_series(p, i, y, tail, policy, stats)
        if stats is not None:
            stats.add_event(SeriesEvents.SERIES_CONVERGED)
        return result
    except NonConvergenceError as e:
        log.debug(f"Partial moment series (i={i}, y={y}, {tail}) did not converge ({e}); using quadrature")
        if stats is not None:
            stats.add_event(SeriesEvents.SERIES_FELL_BACK_TO_QUADRATURE)
        return partial_moment_quadrature(p, i, y, tail, quadrature_policy)


def raw_moment(p, k, policy=None, stats=None):
    """
    k'th raw moment E(Y^k) = (αθ Γ(1 + k/γ) / (β^k log(1 - θ))) Σ_n Σ_j (-1)^(j+1) C(nα - 1, j) θ^(n-1)
    (j + 1)^-(1 + k/γ).

    :param p: Distribution parameters.
    :type p: src.ewl_core.params.EwlParams
    :param k: Order, >= 1.
    :type k: int
    :param policy: Truncation rules; defaults to SeriesPolicy.from_environment().
    :type policy: src.special.configuration.SeriesPolicy | None
    :param stats: Stats to record series/quadrature events in.
    :type stats: src.moments.series_stats.SeriesStats | None
    :rtype: src.moments.moment_result.MomentResult
    """
    if int(k) != k or k < 1:
        raise ValueError(f"Moment order must be a positive integer, but got {k}")
    return partial_moment(p, int(k), 0.0, KernelTails.UPPER, policy, stats)


def raw_moment_quadrature(p, k, quadrature_policy=None):
    return integrate_against_density(p, lambda y: y ** k, policy=quadrature_policy)


def mean_and_variance(p, policy=None, stats=None):
    """
    :return: (E(Y), Var(Y)).
    :rtype: (float, float)
    """
    mean = raw_moment(p, 1, policy, stats).value
    second = raw_moment(p, 2, policy, stats).value
    variance = second - mean ** 2
    if variance <= 0:
        log.warning(f"Variance from raw moments was not positive ({variance}); integrating (y - mean)^2 f instead")
        variance = integrate_against_density(p, lambda y: (y - mean) ** 2).value
    return mean, variance


def _mgf_radius(p):
    if math.isclose(p.gamma_, 1.0, rel_tol=1e-12):
        return p.beta
    return 0.0 if p.gamma_ < 1 else math.inf


def mgf(p, t, policy=None, stats=None):
    """
    Moment generating function M(t) = Σ_k t^k E(Y^k) / k!.

    The series has radius 0 for γ < 1 (the tail is heavier than exponential) and radius β for γ = 1; outside that
    region a NonConvergenceError is raised.

    :param p: Distribution parameters.
    :type p: src.ewl_core.params.EwlParams
    :param t: Argument.
    :type t: float
    :rtype: float
    """
    if t == 0:
        return 1.0
    policy = _policy_or_default(policy)
    radius = _mgf_radius(p)
    if abs(t) >= radius:
        raise NonConvergenceError(f"The moment generating function series does not converge at t={t} "
                                  f"(radius {radius} for gamma={p.gamma_}, beta={p.beta})")

    log_abs_t = math.log(abs(t))

    def term(k):
        if k == 0:
            return 1.0
        sign = -1.0 if (t < 0 and k % 2 == 1) else 1.0
        moment = raw_moment(p, k, policy, stats).value
        if moment <= 0:
            # E(Y^k) underflowed.
            return 0.0
        return sign * math.exp(k * log_abs_t - float(gammaln(k + 1)) + math.log(moment))

    return truncated_sum(term, policy).value


def mgf_quadrature(p, t, quadrature_policy=None):
    return integrate_against_density(p, lambda y: math.exp(t * y), policy=quadrature_policy).value
