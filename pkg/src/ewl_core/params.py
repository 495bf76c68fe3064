import math
from dataclasses import dataclass, replace

PARAMETER_NAMES = ("alpha", "beta", "gamma", "theta")


@dataclass(frozen=True)
class EwlParams:
    """
    A point (α, β, γ, θ) of the EWL family.

    β is an inverse scale: the Weibull kernel is exp(-(βy)^γ). θ must lie strictly inside (0, 1), since the
    logarithmic mixing law and log(1 - θ) are undefined outside it. `theta_limit` marks points standing in for the
    θ → 0 boundary (the EW, Weibull and GE families).
    """
    alpha: float
    beta: float
    gamma_: float
    theta: float
    theta_limit: bool = False

    def __post_init__(self):
        for name, value in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma_)]:
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"EWL parameter {name} must be a finite number > 0, but got {value}")
        if not (0 < self.theta < 1):
            raise ValueError(f"EWL parameter theta must lie in the open interval (0, 1), but got {self.theta}")

    def to_dict(self):
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma_, "theta": self.theta}

    def get(self, name):
        """
        :param name: One of "alpha", "beta", "gamma", "theta".
        :type name: str
        :rtype: float
        """
        return self.to_dict()[name]

    def with_values(self, **values):
        """
        :param values: New values keyed by parameter name ("gamma" is accepted for `gamma_`).
        :return: Copy of these parameters with the given values replaced.
        :rtype: EwlParams
        """
        if "gamma" in values:
            values["gamma_"] = values.pop("gamma")
        return replace(self, **values)

    @classmethod
    def from_dict(cls, d):
        """
        :param d: Dictionary with keys alpha, beta, gamma (or gamma_) and theta, e.g. from the machine-readable output
                  of `ewlkit.py fit`.
        :type d: dict
        :rtype: EwlParams
        """
        missing = [name for name in PARAMETER_NAMES if name not in d and not (name == "gamma" and "gamma_" in d)]
        if len(missing) > 0:
            raise ValueError(f"Missing EWL parameters: {', '.join(missing)}")
        gamma_ = d["gamma"] if "gamma" in d else d["gamma_"]
        return cls(float(d["alpha"]), float(d["beta"]), float(gamma_), float(d["theta"]),
                   bool(d.get("theta_limit", False)))

    def to_vector(self):
        return [self.alpha, self.beta, self.gamma_, self.theta]


class LimitKinds:
    INFINITE = "Infinite"
    ZERO = "Zero"
    FINITE = "Finite"


@dataclass(frozen=True)
class Limit:
    kind: str
    value: float = None

    def __post_init__(self):
        assert self.kind in (LimitKinds.INFINITE, LimitKinds.ZERO, LimitKinds.FINITE), f"Unknown limit kind {self.kind}"
        if self.kind == LimitKinds.FINITE:
            assert self.value is not None and self.value > 0, f"Finite limits must be > 0, but got {self.value}"

    def __str__(self):
        if self.kind == LimitKinds.FINITE:
            return f"{self.kind}({self.value:.10g})"
        return self.kind


@dataclass(frozen=True)
class HazardLimit:
    at_zero: Limit
    at_infinity: Limit

    def to_dict(self):
        return {"at_zero": str(self.at_zero), "at_infinity": str(self.at_infinity)}
