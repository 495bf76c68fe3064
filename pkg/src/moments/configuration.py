from dataclasses import dataclass


@dataclass(frozen=True)
class QuadraturePolicy:
    """
    Settings for the adaptive-quadrature twins of the series formulas.

    :param rel_tol: Target relative error of each adaptive integration.
    :type rel_tol: float
    :param tail_probability: Integrals over the whole support stop at the quantile with this survival probability.
    :type tail_probability: float
    :param limit: Maximum number of subintervals per integration.
    :type limit: int
    """
    rel_tol: float = 1e-10
    tail_probability: float = 1e-12
    limit: int = 200

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError(f"QuadraturePolicy.rel_tol must be > 0, but got {self.rel_tol}")
        if not (0 < self.tail_probability < 1):
            raise ValueError(f"QuadraturePolicy.tail_probability must lie in (0, 1), but got {self.tail_probability}")
        if self.limit < 1:
            raise ValueError(f"QuadraturePolicy.limit must be >= 1, but got {self.limit}")
