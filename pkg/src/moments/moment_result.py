from dataclasses import dataclass


class MomentMethods:
    SERIES = "Series"
    QUADRATURE = "Quadrature"


@dataclass(frozen=True)
class MomentResult:
    """
    A series or quadrature evaluation, with how it was obtained.

    :param value: The computed quantity.
    :param method: MomentMethods.SERIES or MomentMethods.QUADRATURE.
    :param terms_used: Number of outer series terms (0 for quadrature).
    :param est_error: Estimated absolute error.
    :param inner_integrals: Number of inner binomial sums that were evaluated from their integral form.
    """
    value: float
    method: str
    terms_used: int
    est_error: float
    inner_integrals: int = 0

    def __post_init__(self):
        assert self.method in (MomentMethods.SERIES, MomentMethods.QUADRATURE), f"Unknown method {self.method}"
        assert self.est_error >= 0, f"est_error must be >= 0, but got {self.est_error}"
        if self.method == MomentMethods.SERIES:
            assert self.terms_used >= 1, f"Series results need terms_used >= 1, but got {self.terms_used}"
