import math
from dataclasses import dataclass

from src.ewl_core.params import EwlParams


class FitMethods:
    EM = "EM"
    DIRECT = "Direct"
    EM_THEN_DIRECT = "EMthenDirect"

    ALL = [EM, DIRECT, EM_THEN_DIRECT]


def akaike_information_criterion(loglik, n_free_parameters):
    return -2 * loglik + 2 * n_free_parameters


@dataclass(frozen=True)
class FitResult:
    """
    A maximum-likelihood fit of one family to one dataset.

    :param family: Family that was fitted.
    :type family: src.submodels.families.FamilyId
    :param params: Estimates, with the family's fixed coordinates in place.
    :type params: src.ewl_core.params.EwlParams
    :param std_errors: Standard errors aligned with `free_parameters`, or None if the observed information was
                       singular.
    :type std_errors: tuple of float | None
    :param loglik: Maximised log-likelihood.
    :type loglik: float
    :param aic: -2 loglik + 2 (number of free parameters).
    :type aic: float
    :param n_obs: Sample size.
    :type n_obs: int
    :param method: One of FitMethods.
    :type method: str
    :param iterations: EM cycles plus quasi-Newton iterations.
    :type iterations: int
    :param converged: Whether the stopping rule was met away from the θ pins.
    :type converged: bool
    :param convergence_gap: Largest of the last two log-likelihood gains and the extrapolated remaining gain (EM), or
                            the scaled score norm (direct).
    :type convergence_gap: float
    :param free_parameters: Names of the estimated parameters.
    :type free_parameters: tuple of str
    :param on_boundary: Whether θ ended on one of its pins.
    :type on_boundary: bool
    :param loglik_trace: Observed-data log-likelihood after each EM cycle (starting value first).
    :type loglik_trace: tuple of float
    """
    family: object
    params: EwlParams
    std_errors: tuple
    loglik: float
    aic: float
    n_obs: int
    method: str
    iterations: int
    converged: bool
    convergence_gap: float
    free_parameters: tuple
    on_boundary: bool = False
    loglik_trace: tuple = ()

    def __post_init__(self):
        assert self.method in FitMethods.ALL, f"Unknown fit method {self.method}"
        assert self.aic == akaike_information_criterion(self.loglik, len(self.free_parameters)), \
            f"AIC {self.aic} does not match the log-likelihood {self.loglik}"
        assert self.std_errors is None or len(self.std_errors) == len(self.free_parameters), \
            f"Got {len(self.std_errors)} standard errors for {len(self.free_parameters)} free parameters"
        assert self.convergence_gap >= 0 or math.isnan(self.convergence_gap), \
            f"convergence_gap must be >= 0, but got {self.convergence_gap}"

    @property
    def minus_two_loglik(self):
        return -2 * self.loglik

    def std_error(self, name):
        """
        :return: Standard error of free parameter `name`, or None if it is fixed or unavailable.
        :rtype: float | None
        """
        if self.std_errors is None or name not in self.free_parameters:
            return None
        return self.std_errors[self.free_parameters.index(name)]

    def to_dict(self):
        """
        :return: The structured-output form of this fit: family, params, stderr, loglik and aic, plus fit
                 diagnostics.
        :rtype: dict
        """
        params = self.params.to_dict()
        if self.params.theta_limit:
            params["theta"] = 0.0
        return {
            "family": str(self.family),
            "params": params,
            "stderr": {name: self.std_error(name) for name in self.free_parameters},
            "loglik": self.loglik,
            "aic": self.aic,
            "n_obs": self.n_obs,
            "method": self.method,
            "iterations": self.iterations,
            "converged": self.converged,
            "convergence_gap": self.convergence_gap,
            "on_boundary": self.on_boundary
        }


@dataclass(frozen=True)
class LrTestResult:
    """
    :param statistic: w = 2 (loglik(alt) - loglik(null)), >= 0.
    :param df: Difference in the number of free parameters.
    :param p_value: Chi-square tail probability of `statistic` on `df` degrees of freedom.
    :param refitted: Whether the alternative was refitted from the null optimum because w came out negative.
    """
    statistic: float
    df: int
    p_value: float
    null_family: object
    alt_family: object
    refitted: bool = False

    def __post_init__(self):
        assert self.statistic >= 0, f"LR statistic must be >= 0, but got {self.statistic}"
        assert self.df >= 1, f"LR degrees of freedom must be >= 1, but got {self.df}"

    def to_dict(self):
        return {
            "null": str(self.null_family),
            "alt": str(self.alt_family),
            "statistic": self.statistic,
            "df": self.df,
            "p_value": self.p_value,
            "refitted": self.refitted
        }
