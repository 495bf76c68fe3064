import numpy as np
from core_data_modules.logging import Logger
from scipy import linalg
from scipy.stats import norm

from src.common.errors import SingularInformationError
from src.inference.likelihood import family_score, validate_data
from src.submodels.families import EWL, free_parameters, restrict

log = Logger(__name__)

_RELATIVE_STEP = 1e-5


def _step(name, value):
    if name == "theta":
        return _RELATIVE_STEP * min(value, 1 - value)
    return _RELATIVE_STEP * value


def score_jacobian(data, p, family=EWL):
    """
    :return: Central-difference Jacobian of the analytic score with respect to the free parameters of `family`,
             i.e. the Hessian of the log-likelihood before symmetrisation.
    :rtype: numpy.ndarray
    """
    y = validate_data(data)
    p = restrict(p, family)
    names = free_parameters(family)
    hessian = np.empty((len(names), len(names)))
    for j, name in enumerate(names):
        value = p.get(name)
        h = _step(name, value)
        forward = family_score(y, family, p.with_values(**{name: value + h}))
        backward = family_score(y, family, p.with_values(**{name: value - h}))
        hessian[:, j] = (forward - backward) / (2 * h)
    return hessian


def observed_information(data, p, family=EWL):
    """
    Observed information -∂²l/∂Θ∂Θᵀ over the free parameters of `family`, from central differences of the analytic
    score, symmetrised as (H + Hᵀ)/2.

    :param data: Observed lifetimes.
    :type data: iterable of float
    :param p: Parameter point, normally the MLE.
    :type p: src.ewl_core.params.EwlParams
    :param family: Family whose free parameters index the matrix.
    :type family: src.submodels.families.FamilyId
    :rtype: numpy.ndarray
    """
    hessian = score_jacobian(data, p, family)
    return -(hessian + hessian.T) / 2


def _cholesky(info):
    try:
        return linalg.cho_factor(info)
    except linalg.LinAlgError:
        raise SingularInformationError(
            f"Observed information is not positive definite (eigenvalues {np.linalg.eigvalsh(info).tolist()})")


def inverse_information(info):
    if not np.all(np.isfinite(info)):
        raise SingularInformationError("Observed information has non-finite entries")
    factor = _cholesky(info)
    return linalg.cho_solve(factor, np.eye(len(info)))


def standard_errors(data, p, family=EWL):
    """
    :return: √diag(I⁻¹) aligned with `free_parameters(family)`.
    :rtype: tuple of float
    :raises SingularInformationError: if the observed information is not positive definite.
    """
    covariance = inverse_information(observed_information(data, p, family))
    return tuple(float(v) for v in np.sqrt(np.diag(covariance)))


def standard_errors_or_none(data, p, family=EWL):
    try:
        return standard_errors(data, p, family)
    except SingularInformationError as e:
        log.warning(f"No standard errors for the {family} fit: {e}")
        return None


def confidence_intervals(fit, info, level=0.95):
    """
    Asymptotic intervals Θ̂_r ± z Î^{rr} ^ (1/2), where z is the standard normal quantile at (1 + level)/2 and Î^{rr}
    is the r'th diagonal element of the inverse information.

    :param fit: Fit whose free parameters index `info`.
    :type fit: src.inference.fit_result.FitResult
    :param info: Observed information at `fit.params`.
    :type info: numpy.ndarray
    :param level: Coverage probability in (0, 1).
    :type level: float
    :return: (lower, upper) for each free parameter, in order.
    :rtype: list of (float, float)
    """
    if not 0 < level < 1:
        raise ValueError(f"Confidence level must lie in (0, 1), but got {level}")
    info = np.asarray(info, dtype=float)
    assert info.shape == (len(fit.free_parameters), len(fit.free_parameters)), \
        f"Information of shape {info.shape} does not match {len(fit.free_parameters)} free parameters"
    z = norm.ppf(0.5 + level / 2)
    half_widths = z * np.sqrt(np.diag(inverse_information(info)))
    estimates = [fit.params.get(name) for name in fit.free_parameters]
    return [(float(e - w), float(e + w)) for e, w in zip(estimates, half_widths)]
