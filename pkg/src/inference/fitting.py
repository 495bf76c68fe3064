import math
from dataclasses import replace

import numpy as np
from core_data_modules.logging import Logger
from scipy import stats as scipy_stats

from src.common.errors import NonConvergenceError
from src.ewl_core.params import EwlParams
from src.inference.configuration import MIN_OBSERVATIONS, DirectConfig, EmConfig, StartingPoints
from src.inference.direct import direct_fit
from src.inference.em import em_fit
from src.inference.fit_result import FitMethods
from src.inference.fit_stats import FitEvents
from src.inference.information import standard_errors_or_none
from src.inference.likelihood import validate_data
from src.submodels.evaluation import family_quantile
from src.submodels.families import EWL, restrict, theta_limit_counterpart

log = Logger(__name__)

# EM tolerance before the quasi-Newton polish of an EMthenDirect fit.
_HYBRID_EM_LOGLIK_TOL = 1e-4

# θ given to the optimum of a θ → 0 counterpart when it is used as a start of the full family.
_LIMIT_START_THETA = 1e-4


def weibull_probability_plot(data):
    """
    Least-squares Weibull fit on the probability plot log(-log(1 - F_i)) = γ log y_(i) + γ log β, with median ranks
    F_i = (i - 0.3) / (n + 0.4).

    :return: (β, γ)
    :rtype: (float, float)
    """
    y = np.sort(validate_data(data))
    n = len(y)
    ranks = (np.arange(1, n + 1) - 0.3) / (n + 0.4)
    regression = scipy_stats.linregress(np.log(y), np.log(-np.log1p(-ranks)))
    gamma_ = regression.slope
    if not (math.isfinite(gamma_) and gamma_ > 0):
        log.warning(f"Weibull probability plot gave a slope of {gamma_}; starting from γ = 1")
        gamma_ = 1.0
        return 1 / float(np.mean(y)), gamma_
    return math.exp(regression.intercept / gamma_), float(gamma_)


def _match_median(p, family, sample_median):
    unit = p.with_values(beta=1.0)
    return p.with_values(beta=float(family_quantile(family, unit, 0.5)) / sample_median)


def initial_values(data, family=EWL, starting_points=None):
    """
    Starting points for a fit of `family`: the Weibull probability-plot fit with α = 1 and θ = 0.5, then every
    (α, θ) pair of `starting_points`, each restricted to the family and rescaled to the sample median.

    :rtype: list of src.ewl_core.params.EwlParams
    """
    if starting_points is None:
        starting_points = StartingPoints()
    y = validate_data(data)
    sample_median = float(np.median(y))
    beta, gamma_ = weibull_probability_plot(y)

    candidates = []
    if starting_points.include_probability_plot:
        candidates.append(restrict(EwlParams(1.0, beta, gamma_, 0.5), family))
    for alpha in starting_points.alphas:
        for theta in starting_points.thetas:
            candidates.append(_match_median(restrict(EwlParams(alpha, beta, gamma_, theta), family), family,
                                            sample_median))

    starts = []
    seen = set()
    for p in candidates:
        key = tuple(round(v, 12) for v in p.to_vector())
        if key not in seen:
            seen.add(key)
            starts.append(p)
    return starts


def _fit_from(y, family, start, method, em_config, direct_config, stats):
    if method == FitMethods.EM:
        return em_fit(y, start, em_config, family, stats, compute_std_errors=False)
    if method == FitMethods.DIRECT:
        return direct_fit(y, start, direct_config, family, stats, compute_std_errors=False)

    hybrid_config = replace(em_config, loglik_tol=max(em_config.loglik_tol, _HYBRID_EM_LOGLIK_TOL))
    em_result = em_fit(y, start, hybrid_config, family, stats, compute_std_errors=False)
    polished = direct_fit(y, em_result.params, direct_config, family, stats, compute_std_errors=False)
    best = polished if polished.loglik >= em_result.loglik else replace(em_result, converged=False)
    return replace(best, method=FitMethods.EM_THEN_DIRECT, iterations=em_result.iterations + polished.iterations,
                   loglik_trace=em_result.loglik_trace + (polished.loglik,))


def _limit_optimum_start(y, family, direct_config, starting_points):
    """
    The optimum of the θ → 0 counterpart of `family` (e.g. EW for EWL), moved to θ = 1e-4. Fits of `family` that
    also start here never end below their own limit family.

    :rtype: list of src.ewl_core.params.EwlParams
    """
    limit_family = theta_limit_counterpart(family)
    if limit_family is None:
        return []
    try:
        limit_fit = fit_family(y, limit_family, method=FitMethods.DIRECT, direct_config=direct_config,
                               starting_points=starting_points)
    except NonConvergenceError as e:
        log.warning(f"Could not fit {limit_family} to start {family} from its optimum: {e}")
        return []
    return [limit_fit.params.with_values(theta=_LIMIT_START_THETA, theta_limit=False)]


def fit_family(data, family=EWL, init=None, method=FitMethods.EM_THEN_DIRECT, em_config=None, direct_config=None,
               starting_points=None, stats=None):
    """
    Fits one family by maximum likelihood, from `init` or (if None) from each of `initial_values` and from the
    optimum of its θ → 0 counterpart, keeping the fit with the largest log-likelihood.

    θ → 0 families (EW, Weibull, GE) have no latent count to run EM on and are always fitted directly.

    :param data: Observed lifetimes, at least 5.
    :type data: iterable of float
    :param family: Family to fit.
    :type family: src.submodels.families.FamilyId
    :param init: Starting point, or None to multi-start.
    :type init: src.ewl_core.params.EwlParams | None
    :param method: One of FitMethods.
    :type method: str
    :param em_config: EM stopping rules.
    :type em_config: src.inference.configuration.EmConfig | None
    :param direct_config: Quasi-Newton settings.
    :type direct_config: src.inference.configuration.DirectConfig | None
    :param starting_points: Multi-start grid, used when `init` is None.
    :type starting_points: src.inference.configuration.StartingPoints | None
    :param stats: Stats to record fit events in.
    :type stats: src.inference.fit_stats.FitStats | None
    :rtype: src.inference.fit_result.FitResult
    """
    if method not in FitMethods.ALL:
        raise ValueError(f"Unknown fit method '{method}'. Valid methods are: {', '.join(FitMethods.ALL)}")
    em_config = EmConfig() if em_config is None else em_config
    direct_config = DirectConfig() if direct_config is None else direct_config
    y = validate_data(data)
    if len(y) < MIN_OBSERVATIONS:
        raise ValueError(f"Fitting needs at least {MIN_OBSERVATIONS} observations, but got {len(y)}")
    if family.theta_limit and method != FitMethods.DIRECT:
        log.debug(f"{family} fixes theta at its limit; fitting directly instead of by {method}")
        method = FitMethods.DIRECT

    if init is None:
        starts = initial_values(y, family, starting_points) + _limit_optimum_start(y, family, direct_config,
                                                                                   starting_points)
    else:
        starts = [init]
    log.info(f"Fitting {family} by {method} from {len(starts)} starting point(s)")
    if stats is not None:
        stats.add_event(FitEvents.FIT_STARTED)

    best = None
    failures = []
    for start in starts:
        try:
            result = _fit_from(y, family, start, method, em_config, direct_config, stats)
        except (NonConvergenceError, ArithmeticError) as e:
            log.debug(f"Fit of {family} from {start} failed: {e}")
            failures.append(e)
            continue
        if best is None or result.loglik > best.loglik:
            best = result

    if best is None:
        if stats is not None:
            stats.add_event(FitEvents.FIT_FAILED)
        raise NonConvergenceError(f"Every fit of {family} failed ({len(failures)} starting points); "
                                  f"last error: {failures[-1]}")

    best = replace(best, std_errors=standard_errors_or_none(y, best.params, family))
    if stats is not None:
        if best.on_boundary:
            stats.add_event(FitEvents.FIT_ON_BOUNDARY)
        stats.add_event(FitEvents.FIT_CONVERGED if best.converged else FitEvents.FIT_NOT_CONVERGED)
    if not best.converged:
        log.warning(f"Best fit of {family} is not converged (gap {best.convergence_gap})")
    log.info(f"Fitted {family}: loglik={best.loglik:.4f}, AIC={best.aic:.4f}, params={best.params.to_dict()}")
    return best
