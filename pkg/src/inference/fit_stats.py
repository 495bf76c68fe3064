from src.common.run_stats import RunStats


class FitEvents:
    FIT_STARTED = "fit_started"
    FIT_CONVERGED = "fit_converged"
    FIT_NOT_CONVERGED = "fit_not_converged"
    FIT_ON_BOUNDARY = "fit_on_boundary"
    FIT_FAILED = "fit_failed"
    EM_FALLBACK_GOLDEN_SECTION = "em_fallback_golden_section"
    EM_STEP_REJECTED = "em_step_rejected"
    LR_REFIT = "lr_refit"


class FitStats(RunStats):
    EVENT_DESCRIPTIONS = {
        FitEvents.FIT_STARTED: "Fits started",
        FitEvents.FIT_CONVERGED: "Fits converged",
        FitEvents.FIT_NOT_CONVERGED: "Fits not converged",
        FitEvents.FIT_ON_BOUNDARY: "Fits ending on the theta boundary",
        FitEvents.FIT_FAILED: "Fits failed",
        FitEvents.EM_FALLBACK_GOLDEN_SECTION: "EM steps that fell back to golden-section search",
        FitEvents.EM_STEP_REJECTED: "EM steps rejected",
        FitEvents.LR_REFIT: "Likelihood-ratio alternatives refitted"
    }
