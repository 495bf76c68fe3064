"""
Distribution functions of a family, honouring the θ → 0 families with the exponentiated Weibull closed forms.
"""
from src.ewl_core import distribution
from src.ewl_core import exponentiated_weibull as ew
from src.submodels.families import restrict


def family_log_pdf(f, p, y):
    """
    :param f: Family.
    :type f: src.submodels.families.FamilyId
    :param p: Parameters; f's fixed coordinates are applied first.
    :type p: src.ewl_core.params.EwlParams
    :param y: Point(s), > 0.
    :type y: float | numpy.ndarray
    :rtype: float | numpy.ndarray
    """
    q = restrict(p, f)
    if f.theta_limit:
        return ew.ew_log_pdf(q.alpha, q.beta, q.gamma_, y)
    return distribution.log_pdf(q, y)


def family_pdf(f, p, y):
    q = restrict(p, f)
    if f.theta_limit:
        return ew.ew_pdf(q.alpha, q.beta, q.gamma_, y)
    return distribution.pdf(q, y)


def family_cdf(f, p, y):
    q = restrict(p, f)
    if f.theta_limit:
        return ew.ew_cdf(q.alpha, q.beta, q.gamma_, y)
    return distribution.cdf(q, y)


def family_quantile(f, p, xi):
    q = restrict(p, f)
    if f.theta_limit:
        return ew.ew_quantile(q.alpha, q.beta, q.gamma_, xi)
    return distribution.quantile(q, xi)
