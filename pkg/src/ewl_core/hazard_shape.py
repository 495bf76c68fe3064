import math

import numpy as np

from src.ewl_core.distribution import hazard, quantile, upper_quantile
from src.ewl_core.params import HazardLimit, Limit, LimitKinds

# Shape parameters within this relative distance of 1 are treated as exactly 1.
_UNIT_SHAPE_TOLERANCE = 1e-12
_SMALLEST_GRID_POINT = 1e-300


class HazardShapes:
    INCREASING = "increasing"
    DECREASING = "decreasing"
    BATHTUB = "bathtub"
    UNIMODAL = "unimodal"
    CONSTANT = "constant"
    OTHER = "other"


def hazard_limits(p):
    """
    Limits of the hazard function at 0 and at infinity.

    Near 0 the density behaves like c·y^(γα - 1), so the limit at 0 is infinite for γα < 1, equal to
    -θβ / log(1 - θ) for γα = 1, and zero for γα > 1. At infinity the hazard tends to γβ^γ y^(γ - 1): zero for γ < 1,
    β for γ = 1 and infinite for γ > 1.

    :param p: Distribution parameters.
    :type p: src.ewl_core.params.EwlParams
    :rtype: src.ewl_core.params.HazardLimit
    """
    shape_at_zero = p.gamma_ * p.alpha
    if math.isclose(shape_at_zero, 1.0, rel_tol=_UNIT_SHAPE_TOLERANCE):
        at_zero = Limit(LimitKinds.FINITE, -p.theta * p.beta / math.log1p(-p.theta))
    elif shape_at_zero < 1:
        at_zero = Limit(LimitKinds.INFINITE)
    else:
        at_zero = Limit(LimitKinds.ZERO)

    if math.isclose(p.gamma_, 1.0, rel_tol=_UNIT_SHAPE_TOLERANCE):
        at_infinity = Limit(LimitKinds.FINITE, p.beta)
    elif p.gamma_ < 1:
        at_infinity = Limit(LimitKinds.ZERO)
    else:
        at_infinity = Limit(LimitKinds.INFINITE)

    return HazardLimit(at_zero, at_infinity)


def hazard_shape(p, grid_size=400, lower_probability=1e-6, upper_tail_probability=1e-6):
    """
    Numerically classifies the shape of the hazard function from the sign changes of its slope on a geometric grid
    between two quantiles. This is a numerical diagnostic, not an analytic result.

    :param p: Distribution parameters.
    :type p: src.ewl_core.params.EwlParams
    :param grid_size: Number of grid points.
    :type grid_size: int
    :param lower_probability: cdf level of the first grid point.
    :type lower_probability: float
    :param upper_tail_probability: Survival level of the last grid point.
    :type upper_tail_probability: float
    :return: One of the HazardShapes constants.
    :rtype: str
    """
    # Floored so the geometric grid never starts at zero when the lower quantile underflows.
    lo = max(float(quantile(p, lower_probability)), _SMALLEST_GRID_POINT)
    hi = upper_quantile(p, upper_tail_probability)
    log_h = np.log(hazard(p, np.geomspace(lo, hi, grid_size)))
    slopes = np.diff(log_h)

    # Ignore slopes at the level of rounding noise.
    noise = 1e-9 * max(1.0, float(np.max(np.abs(log_h))))
    signs = np.sign(np.where(np.abs(slopes) <= noise, 0.0, slopes))
    signs = signs[signs != 0]

    if len(signs) == 0:
        return HazardShapes.CONSTANT
    changes = signs[np.flatnonzero(np.diff(signs)) + 1]
    if len(changes) == 0:
        return HazardShapes.INCREASING if signs[0] > 0 else HazardShapes.DECREASING
    if len(changes) == 1:
        return HazardShapes.BATHTUB if changes[0] > 0 else HazardShapes.UNIMODAL
    return HazardShapes.OTHER
