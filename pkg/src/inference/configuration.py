from dataclasses import dataclass

# θ is kept inside [THETA_MIN, THETA_MAX]; a fit that ends on either pin is reported as on the boundary.
THETA_MIN = 1e-8
THETA_MAX = 1 - 1e-8

# Smallest sample the fitting routines accept.
MIN_OBSERVATIONS = 5


@dataclass(frozen=True)
class EmConfig:
    """
    Stopping rules of the EM algorithm.

    :param max_iter: Maximum number of EM cycles.
    :type max_iter: int
    :param loglik_tol: Stop once the last two cycles, and the extrapolated remainder, each improve the observed-data
                       log-likelihood by less than this.
    :type loglik_tol: float
    :param param_tol: Also stop once a cycle neither raises the log-likelihood nor changes any parameter by more
                      than this (relative).
    :type param_tol: float
    :param inner_solver_tol: Tolerance of the one-dimensional root solves inside each cycle.
    :type inner_solver_tol: float
    """
    max_iter: int = 2000
    loglik_tol: float = 1e-8
    param_tol: float = 1e-8
    inner_solver_tol: float = 1e-10

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError(f"EmConfig.max_iter must be >= 1, but got {self.max_iter}")
        for name in ["loglik_tol", "param_tol", "inner_solver_tol"]:
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"EmConfig.{name} must be > 0, but got {value}")


@dataclass(frozen=True)
class DirectConfig:
    """
    Settings of the quasi-Newton maximisation.

    :param max_iter: Maximum number of L-BFGS-B iterations.
    :type max_iter: int
    :param gradient_tol: A direct fit is converged once the largest component of the score on the unconstrained
                         (log/logit) scale, divided by the sample size, is below this.
    :type gradient_tol: float
    """
    max_iter: int = 5000
    gradient_tol: float = 1e-5

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError(f"DirectConfig.max_iter must be >= 1, but got {self.max_iter}")
        if not self.gradient_tol > 0:
            raise ValueError(f"DirectConfig.gradient_tol must be > 0, but got {self.gradient_tol}")


@dataclass(frozen=True)
class StartingPoints:
    """
    Seeds of the multi-start search used when no starting point is given. Every (α, θ) pair on the grid is tried,
    with β rescaled so the starting law has the sample median.

    :param alphas: α values to seed from.
    :type alphas: tuple of float
    :param thetas: θ values to seed from.
    :type thetas: tuple of float
    :param include_probability_plot: Also start from the Weibull probability-plot fit (α = 1, θ = 0.5).
    :type include_probability_plot: bool
    """
    alphas: tuple = (1.0, 5.0, 50.0, 500.0)
    thetas: tuple = (0.1, 0.5, 0.9)
    include_probability_plot: bool = True

    def __post_init__(self):
        if any(not a > 0 for a in self.alphas):
            raise ValueError(f"StartingPoints.alphas must all be > 0, but got {self.alphas}")
        if any(not 0 < t < 1 for t in self.thetas):
            raise ValueError(f"StartingPoints.thetas must all lie in (0, 1), but got {self.thetas}")
