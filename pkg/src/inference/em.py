"""
EM algorithm for the EWL family.

The latent variable is the logarithmic count Z behind each observation. Given the current parameters, the E-step
computes z_i = E[Z | Y = y_i] = 1 / (1 - θG(y_i)^α), and the complete-data expected log-likelihood is

    Q = Σz log θ - n log(-log(1 - θ)) + n log α + n log γ + nγ log β + (γ - 1) Σ log y - Σu + Σ(zα - 1) log G.

Each cycle maximises Q one coordinate at a time: α in closed form, β and γ by one-dimensional root solves, and θ by
solving z̄ = -θ / ((1 - θ) log(1 - θ)).
"""
import math

import numpy as np
from core_data_modules.logging import Logger
from scipy import optimize
from scipy.special import expit, logit

from src.common.errors import InitError, NonConvergenceError
from src.ewl_core.exponentiated_weibull import weibull_kernel
from src.ewl_core.params import EwlParams
from src.inference.configuration import MIN_OBSERVATIONS, THETA_MAX, THETA_MIN, EmConfig
from src.inference.fit_result import FitMethods, FitResult, akaike_information_criterion
from src.inference.fit_stats import FitEvents
from src.inference.information import standard_errors_or_none
from src.inference.likelihood import family_loglik, from_unconstrained, to_unconstrained, validate_data
from src.submodels.families import EWL, free_parameters, restrict

log = Logger(__name__)

_MAX_BRACKET_EXPANSIONS = 60

# Each accepted over-relaxed step multiplies the next step length by this; a rejected one resets it to 1.
_RELAXATION_GROWTH = 1.5
_MAX_RELAXATION = 1e4


def e_step(data, p):
    """
    :param data: Observed lifetimes.
    :type data: iterable of float
    :param p: Current parameters.
    :type p: src.ewl_core.params.EwlParams
    :return: z_i = E[Z | Y = y_i] = 1 / (1 - θ (1 - e^(-(βy_i)^γ))^α), each >= 1.
    :rtype: numpy.ndarray
    """
    y = validate_data(data)
    _, _, log_g = weibull_kernel(p.beta, p.gamma_, y)
    return 1 / -np.expm1(math.log(p.theta) + p.alpha * log_g)


def expected_complete_loglik(y, z, p):
    """Q(p | z), the conditional expectation of the complete-data log-likelihood."""
    n = len(y)
    _, u, log_g = weibull_kernel(p.beta, p.gamma_, y)
    return float(np.sum(z) * math.log(p.theta) - n * math.log(-math.log1p(-p.theta))
                 + n * math.log(p.alpha) + n * math.log(p.gamma_) + n * p.gamma_ * math.log(p.beta)
                 + (p.gamma_ - 1) * np.sum(np.log(y)) - np.sum(u) + np.sum((z * p.alpha - 1) * log_g))


def _alpha_step(y, z, p):
    _, _, log_g = weibull_kernel(p.beta, p.gamma_, y)
    return -len(y) / float(np.sum(z * log_g))


def _scale_equation(y, z, p):
    def equation(log_beta):
        _, u, _ = weibull_kernel(math.exp(log_beta), p.gamma_, y)
        with np.errstate(over="ignore"):
            u_over_expm1 = np.where(u > 0, u / np.expm1(u), 1.0)
        return float(len(y) - np.sum(u) + np.sum((z * p.alpha - 1) * u_over_expm1))

    return equation


def _shape_equation(y, z, p):
    ell = math.log(p.beta) + np.log(y)

    def equation(log_gamma):
        gamma_ = math.exp(log_gamma)
        _, u, _ = weibull_kernel(p.beta, gamma_, y)
        with np.errstate(over="ignore"):
            u_over_expm1 = np.where(u > 0, u / np.expm1(u), 1.0)
        return float(len(y) / gamma_ + np.sum(ell) - np.sum(u * ell) + np.sum((z * p.alpha - 1) * u_over_expm1 * ell))

    return equation


def _bracket_root(equation, x0):
    step = 1.0
    lo, hi = x0 - step, x0 + step
    f_lo, f_hi = equation(lo), equation(hi)
    for _ in range(_MAX_BRACKET_EXPANSIONS):
        if np.sign(f_lo) != np.sign(f_hi):
            return lo, hi
        step *= 2
        lo, hi = x0 - step, x0 + step
        f_lo, f_hi = equation(lo), equation(hi)
    raise NonConvergenceError(f"Could not bracket a root around {x0}")


def _conditional_step(y, z, p, name, equation, cfg, stats):
    """
    Moves coordinate `name` (beta or gamma) to the root of its conditional score equation, accepting the move only
    if it increases Q. Falls back to a golden-section search on Q, then to the old value.
    """
    old_value = p.get(name)
    q_old = expected_complete_loglik(y, z, p)

    def q_at(log_value):
        try:
            return expected_complete_loglik(y, z, p.with_values(**{name: math.exp(log_value)}))
        except (ValueError, OverflowError):
            return -math.inf

    candidate = None
    try:
        lo, hi = _bracket_root(equation, math.log(old_value))
        candidate = optimize.brentq(equation, lo, hi, xtol=cfg.inner_solver_tol)
    except (NonConvergenceError, ValueError, OverflowError) as e:
        log.debug(f"Root solve for {name} failed ({e})")

    if candidate is not None and math.isfinite(q_at(candidate)) and q_at(candidate) >= q_old:
        return p.with_values(**{name: math.exp(candidate)})

    if stats is not None:
        stats.add_event(FitEvents.EM_FALLBACK_GOLDEN_SECTION)
    try:
        result = optimize.minimize_scalar(lambda v: -q_at(v), bracket=(math.log(old_value) - 0.1, math.log(old_value)),
                                          method="golden", tol=cfg.inner_solver_tol)
        if math.isfinite(result.fun) and -result.fun >= q_old:
            return p.with_values(**{name: math.exp(result.x)})
    except (RuntimeError, ValueError, OverflowError) as e:
        log.debug(f"Golden-section search for {name} failed ({e})")

    if stats is not None:
        stats.add_event(FitEvents.EM_STEP_REJECTED)
    log.debug(f"Rejected the {name} step; keeping {name}={old_value}")
    return p


def _mean_count(theta):
    """E[Z] = -θ / ((1 - θ) log(1 - θ)) under the logarithmic law."""
    return -theta / ((1 - theta) * math.log1p(-theta))


def theta_step(z_bar, cfg):
    """
    :return: The θ solving z̄ = -θ / ((1 - θ) log(1 - θ)), pinned to [THETA_MIN, THETA_MAX], and whether it was pinned.
    :rtype: (float, bool)
    """
    def equation(logit_theta):
        return _mean_count(float(expit(logit_theta))) - z_bar

    lo, hi = float(logit(THETA_MIN)), float(logit(THETA_MAX))
    if equation(lo) >= 0:
        return THETA_MIN, True
    if equation(hi) <= 0:
        return THETA_MAX, True
    return float(expit(optimize.brentq(equation, lo, hi, xtol=cfg.inner_solver_tol))), False


def validate_start(init, family):
    """
    :return: `init` restricted to `family`, with a free θ moved inside its pins.
    :rtype: src.ewl_core.params.EwlParams
    :raises InitError: if `init` is not a usable starting point.
    """
    if not isinstance(init, EwlParams):
        raise InitError(f"Starting point must be an EwlParams, but got {init!r}")
    p = restrict(init, family)
    if not family.theta_limit:
        if p.theta_limit:
            p = p.with_values(theta_limit=False)
        if not THETA_MIN <= p.theta <= THETA_MAX:
            clipped = min(max(p.theta, THETA_MIN), THETA_MAX)
            log.warning(f"Starting theta {p.theta} is outside [{THETA_MIN}, {THETA_MAX}]; using {clipped}")
            p = p.with_values(theta=clipped)
    return p


def _relative_change(old, new):
    return max(abs(a - b) / max(abs(a), 1e-300) for a, b in zip(old.to_vector(), new.to_vector()))


def _remaining_gain(gains):
    """
    Aitken estimate of the log-likelihood still to be gained, from the last two cycle gains, assuming the gains
    shrink geometrically. Infinite while they do not shrink.
    """
    if len(gains) < 2:
        return math.inf
    last, before = gains[-1], gains[-2]
    if last <= 0:
        return 0.0
    if before <= last:
        return math.inf
    rate = last / before
    return last * rate / (1 - rate)


def _over_relax(y, family, names, previous, em_params, em_loglik, omega):
    """
    Tries previous + ω (em_params - previous) on the log/logit scale, keeping it only if it beats the plain EM
    update.

    :return: (parameters, log-likelihood, next ω)
    :rtype: (src.ewl_core.params.EwlParams, float, float)
    """
    if omega <= 1:
        return em_params, em_loglik, _RELAXATION_GROWTH
    start, end = to_unconstrained(previous, names), to_unconstrained(em_params, names)
    eta = start + omega * (end - start)
    if "theta" in names:
        i = names.index("theta")
        eta[i] = min(max(eta[i], float(logit(THETA_MIN))), float(logit(THETA_MAX)))
    try:
        candidate = from_unconstrained(eta, names, em_params)
        candidate_loglik = family_loglik(y, family, candidate)
    except (ValueError, OverflowError):
        return em_params, em_loglik, 1.0
    if math.isfinite(candidate_loglik) and candidate_loglik > em_loglik:
        return candidate, candidate_loglik, min(omega * _RELAXATION_GROWTH, _MAX_RELAXATION)
    return em_params, em_loglik, 1.0


def em_fit(data, init, cfg=None, family=EWL, stats=None, compute_std_errors=True):
    """
    Fits `family` by the EM algorithm.

    Each cycle is followed by an over-relaxed step along the EM update, kept only when it raises the log-likelihood,
    so the observed-data log-likelihood never decreases from one cycle to the next. EM stops once the last two gains
    and the Aitken estimate of the gain still to come are all below `cfg.loglik_tol`. A run that exhausts `cfg.max_iter`,
    or that ends with θ on a pin, is returned with converged=False rather than raising.

    :param data: Observed lifetimes, at least 5.
    :type data: iterable of float
    :param init: Starting point.
    :type init: src.ewl_core.params.EwlParams
    :param cfg: Stopping rules.
    :type cfg: src.inference.configuration.EmConfig | None
    :param family: Family to fit; θ must be free.
    :type family: src.submodels.families.FamilyId
    :param stats: Stats to record fit events in.
    :type stats: src.inference.fit_stats.FitStats | None
    :param compute_std_errors: Whether to compute standard errors from the observed information.
    :type compute_std_errors: bool
    :rtype: src.inference.fit_result.FitResult
    """
    if cfg is None:
        cfg = EmConfig()
    y = validate_data(data)
    if len(y) < MIN_OBSERVATIONS:
        raise ValueError(f"Fitting needs at least {MIN_OBSERVATIONS} observations, but got {len(y)}")
    if family.theta_limit:
        raise ValueError(f"The EM algorithm needs a free theta, but {family} fixes it at its limit")
    p = validate_start(init, family)
    fixed = family.fixed_values
    names = free_parameters(family)

    trace = [family_loglik(y, family, p)]
    if not math.isfinite(trace[0]):
        raise InitError(f"The log-likelihood is not finite at the starting point {p}")

    gap = math.inf
    pinned = False
    iterations = 0
    omega = 1.0
    gains = []
    for iterations in range(1, cfg.max_iter + 1):
        previous = p
        z = e_step(y, p)
        if "alpha" not in fixed:
            p = p.with_values(alpha=_alpha_step(y, z, p))
        if "beta" not in fixed:
            p = _conditional_step(y, z, p, "beta", _scale_equation(y, z, p), cfg, stats)
        if "gamma" not in fixed:
            p = _conditional_step(y, z, p, "gamma", _shape_equation(y, z, p), cfg, stats)
        theta, _ = theta_step(float(np.mean(z)), cfg)
        p = p.with_values(theta=theta)

        current = family_loglik(y, family, p)
        p, current, omega = _over_relax(y, family, names, previous, p, current, omega)
        pinned = p.theta <= THETA_MIN * (1 + 1e-6) or p.theta >= THETA_MAX - 1e-12
        gain = current - trace[-1]
        trace.append(current)
        gains.append(gain)
        gap = max(abs(gain), abs(gains[-2]) if len(gains) > 1 else math.inf, _remaining_gain(gains))
        if gain < -1e-9 * max(1.0, abs(current)):
            log.warning(f"EM cycle {iterations} decreased the log-likelihood by {-gain}")
        log.debug(f"EM cycle {iterations}: loglik={current}, alpha={p.alpha}, beta={p.beta}, gamma={p.gamma_}, "
                  f"theta={p.theta}")
        if gap < cfg.loglik_tol:
            break
        if gain <= 0 and _relative_change(previous, p) < cfg.param_tol:
            # No cycle can improve on p at working precision.
            gap = 0.0
            break

    converged = gap <= cfg.loglik_tol and not pinned
    if pinned:
        log.warning(f"EM fit of {family} ended with theta on its pin ({p.theta})")
    elif not converged:
        log.warning(f"EM fit of {family} did not converge in {iterations} cycles (last gain {gap})")

    loglik_value = trace[-1]
    return FitResult(
        family=family,
        params=p,
        std_errors=standard_errors_or_none(y, p, family) if compute_std_errors else None,
        loglik=loglik_value,
        aic=akaike_information_criterion(loglik_value, len(names)),
        n_obs=len(y),
        method=FitMethods.EM,
        iterations=iterations,
        converged=converged,
        convergence_gap=gap,
        free_parameters=tuple(names),
        on_boundary=pinned,
        loglik_trace=tuple(trace)
    )
