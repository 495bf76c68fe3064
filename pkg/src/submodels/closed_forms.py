"""
Closed forms of the CWL (α = 1), GEL (γ = 1) and CEL (α = γ = 1) sub-models, written out directly rather than through
the EWL functions so the two can be checked against each other.
"""
import math

import numpy as np
from scipy.special import gamma as gamma_function

from src.ewl_core.exponentiated_weibull import positive_array, to_output
from src.moments.kernel import KernelTails, binomial_kernel
from src.special.configuration import SeriesPolicy
from src.special.series import truncated_sum
from src.submodels.families import CEL, CWL, GEL, restrict

CLOSED_FORM_FAMILIES = [CWL, GEL, CEL]


def _validate_family(f):
    if f not in CLOSED_FORM_FAMILIES:
        raise ValueError(f"Closed forms are available for CWL, GEL and CEL only, but got {f}")


def _cwl_pdf(beta, gamma_, theta, x):
    u = (beta * x) ** gamma_
    return (theta * gamma_ * beta ** gamma_ * x ** (gamma_ - 1) * np.exp(-u)
            / (np.log1p(-theta) * (theta * -np.expm1(-u) - 1)))


def _cwl_cdf(beta, gamma_, theta, x):
    u = (beta * x) ** gamma_
    return np.log1p(-theta * -np.expm1(-u)) / np.log1p(-theta)


def _cwl_hazard(beta, gamma_, theta, x):
    u = (beta * x) ** gamma_
    g = -np.expm1(-u)
    return (theta * gamma_ * beta ** gamma_ * x ** (gamma_ - 1) * np.exp(-u)
            / ((theta * g - 1) * (np.log1p(-theta) - np.log1p(-theta * g))))


def _gel_pdf(alpha, beta, theta, x):
    g = -np.expm1(-beta * x)
    return (alpha * theta * beta * np.exp(-beta * x) * g ** (alpha - 1)
            / (np.log1p(-theta) * (theta * g ** alpha - 1)))


def _gel_cdf(alpha, beta, theta, x):
    g = -np.expm1(-beta * x)
    return np.log1p(-theta * g ** alpha) / np.log1p(-theta)


def _gel_hazard(alpha, beta, theta, x):
    g = -np.expm1(-beta * x)
    return (alpha * theta * beta * np.exp(-beta * x) * g ** (alpha - 1)
            / ((theta * g ** alpha - 1) * (np.log1p(-theta) - np.log1p(-theta * g ** alpha))))


def _evaluate(f, p, x, cwl, gel, operation):
    _validate_family(f)
    x, scalar = positive_array(x, operation)
    q = restrict(p, f)
    if f == GEL:
        return to_output(gel(q.alpha, q.beta, q.theta, x), scalar)
    # CEL is CWL with γ = 1.
    return to_output(cwl(q.beta, q.gamma_, q.theta, x), scalar)


def submodel_pdf_closed(f, p, x):
    """
    :param f: CWL, GEL or CEL.
    :type f: src.submodels.families.FamilyId
    :param p: Parameters; f's fixed coordinates are applied first.
    :type p: src.ewl_core.params.EwlParams
    :param x: Point(s), > 0.
    :type x: float | numpy.ndarray
    :rtype: float | numpy.ndarray
    """
    return _evaluate(f, p, x, _cwl_pdf, _gel_pdf, "submodel_pdf_closed")


def submodel_cdf_closed(f, p, x):
    return _evaluate(f, p, x, _cwl_cdf, _gel_cdf, "submodel_cdf_closed")


def submodel_hazard_closed(f, p, x):
    return _evaluate(f, p, x, _cwl_hazard, _gel_hazard, "submodel_hazard_closed")


def submodel_mean(f, p, policy=None, stats=None):
    """
    Mean of a CWL, GEL or CEL law from its double series

        E(X) = (αθ Γ(1 + 1/γ) / (β log(1 - θ))) Σ_{n>=1} Σ_j (-1)^(j+1) θ^(n-1) C(nα - 1, j) (j + 1)^-(1 + 1/γ),

    whose inner sum over j is K(nα - 1, 1 + 1/γ, 1; 0, ∞) / Γ(1 + 1/γ).

    :param f: CWL, GEL or CEL.
    :type f: src.submodels.families.FamilyId
    :param p: Parameters; f's fixed coordinates are applied first.
    :type p: src.ewl_core.params.EwlParams
    :rtype: float
    """
    _validate_family(f)
    policy = SeriesPolicy.from_environment() if policy is None else policy
    q = restrict(p, f)
    shape = 1.0 + 1.0 / q.gamma_

    def term(n):
        kernel = binomial_kernel(n * q.alpha - 1, shape, 1.0, 0.0, KernelTails.UPPER, policy, stats)
        return q.theta ** (n - 1) * kernel

    result = truncated_sum(term, policy, start=1)
    return q.alpha * q.theta * result.value / (q.beta * -math.log1p(-q.theta))


def weibull_mean(p):
    """Mean Γ(1 + 1/γ)/β of the Weibull law, the θ → 0 limit of CWL."""
    return float(gamma_function(1.0 + 1.0 / p.gamma_)) / p.beta
