from src.common.run_stats import RunStats


class SeriesEvents:
    SERIES_CONVERGED = "series_converged"
    SERIES_FELL_BACK_TO_QUADRATURE = "series_fell_back_to_quadrature"
    INNER_SUM_INTEGRATED = "inner_sum_integrated"


class SeriesStats(RunStats):
    EVENT_DESCRIPTIONS = {
        SeriesEvents.SERIES_CONVERGED: "Series evaluations that converged",
        SeriesEvents.SERIES_FELL_BACK_TO_QUADRATURE: "Series evaluations that fell back to quadrature",
        SeriesEvents.INNER_SUM_INTEGRATED: "Inner binomial sums evaluated from their integral form"
    }
