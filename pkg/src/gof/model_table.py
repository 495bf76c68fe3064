from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from core_data_modules.logging import Logger

from src.common.errors import NonConvergenceError
from src.gof.statistics import goodness_of_fit
from src.inference.fit_stats import FitStats
from src.inference.fitting import fit_family
from src.inference.likelihood import validate_data

log = Logger(__name__)


@dataclass(frozen=True)
class ModelTableRow:
    """
    One family's row of a model-comparison table. Exactly one of (fit and gof) or error is set.
    """
    family: object
    fit: object = None
    gof: object = None
    error: str = None

    @property
    def failed(self):
        return self.error is not None

    def sort_key(self):
        if self.failed:
            return 1, 0.0, 0.0, 0.0
        return 0, self.fit.aic, self.gof.ad, self.gof.cm

    def to_dict(self):
        if self.failed:
            return {"family": str(self.family), "error": self.error}
        d = self.fit.to_dict()
        d["gof"] = self.gof.to_dict()
        return d


def _fit_row(data, family, fit_kwargs):
    stats = FitStats()
    try:
        fit = fit_family(data, family, stats=stats, **fit_kwargs)
        return ModelTableRow(family, fit, goodness_of_fit(data, fit)), stats
    except (NonConvergenceError, ArithmeticError) as e:
        log.warning(f"Fitting {family} failed: {e}")
        return ModelTableRow(family, error=str(e)), stats


def model_table(data, families, workers=1, stats=None, **fit_kwargs):
    """
    Fits every family in `families`, computes its goodness of fit, and ranks the rows by AIC (ties broken by AD,
    then CM). Families whose fit fails are kept as rows with an error and sorted last.

    :param data: Observed lifetimes, at least 5.
    :type data: iterable of float
    :param families: Families to compare.
    :type families: list of src.submodels.families.FamilyId
    :param workers: Number of worker processes; 1 fits in this process.
    :type workers: int
    :param stats: Stats to accumulate the fits' events into.
    :type stats: src.inference.fit_stats.FitStats | None
    :param fit_kwargs: Passed on to `src.inference.fitting.fit_family`.
    :rtype: list of ModelTableRow
    """
    y = validate_data(data)
    if len(families) == 0:
        raise ValueError("model_table needs at least one family")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, but got {workers}")

    log.info(f"Building a model table for {len(families)} families on {len(y)} observations")
    if workers == 1 or len(families) == 1:
        results = [_fit_row(y, f, fit_kwargs) for f in families]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_fit_row, [y] * len(families), families, [fit_kwargs] * len(families)))

    rows = []
    for row, row_stats in results:
        rows.append(row)
        if stats is not None:
            stats.add_stats(row_stats)
    return sorted(rows, key=ModelTableRow.sort_key)
