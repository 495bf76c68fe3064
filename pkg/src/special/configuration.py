import os
from dataclasses import dataclass, replace

from core_data_modules.logging import Logger

log = Logger(__name__)

MAX_TERMS_ENVIRONMENT_VARIABLE = "EWLKIT_MAX_TERMS"


@dataclass(frozen=True)
class SeriesPolicy:
    """
    Truncation rules shared by every infinite-series evaluation.

    A series is accepted once `stagnation_window` consecutive terms are all below `rel_tol * |S| + abs_tol`,
    where S is the partial sum. Each summation index gets at most `max_terms_per_index` terms.

    :param rel_tol: Relative tolerance on the magnitude of the trailing terms.
    :type rel_tol: float
    :param abs_tol: Absolute tolerance on the magnitude of the trailing terms.
    :type abs_tol: float
    :param max_terms_per_index: Cap on the number of terms taken for any one summation index.
    :type max_terms_per_index: int
    :param stagnation_window: Number of consecutive terms that must be below tolerance.
    :type stagnation_window: int
    """
    rel_tol: float = 1e-12
    abs_tol: float = 1e-300
    max_terms_per_index: int = 10_000
    stagnation_window: int = 50

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError(f"SeriesPolicy.rel_tol must be > 0, but got {self.rel_tol}")
        if not self.abs_tol > 0:
            raise ValueError(f"SeriesPolicy.abs_tol must be > 0, but got {self.abs_tol}")
        if self.max_terms_per_index < 1:
            raise ValueError(f"SeriesPolicy.max_terms_per_index must be >= 1, but got {self.max_terms_per_index}")
        if self.stagnation_window < 1:
            raise ValueError(f"SeriesPolicy.stagnation_window must be >= 1, but got {self.stagnation_window}")

    def with_abs_tol(self, abs_tol):
        return replace(self, abs_tol=abs_tol)

    @classmethod
    def from_environment(cls, **kwargs):
        """
        Creates a SeriesPolicy, applying the EWLKIT_MAX_TERMS environment variable (if set) as the value of
        `max_terms_per_index`.

        :param kwargs: Field values to use instead of the defaults.
        :return: Series policy.
        :rtype: SeriesPolicy
        """
        max_terms = os.environ.get(MAX_TERMS_ENVIRONMENT_VARIABLE)
        if max_terms is not None and max_terms.strip() != "":
            try:
                kwargs["max_terms_per_index"] = int(max_terms)
            except ValueError:
                raise ValueError(f"{MAX_TERMS_ENVIRONMENT_VARIABLE} must be a positive integer, but got '{max_terms}'")
            log.debug(f"Using max_terms_per_index={kwargs['max_terms_per_index']} from "
                      f"{MAX_TERMS_ENVIRONMENT_VARIABLE}")
        return cls(**kwargs)
