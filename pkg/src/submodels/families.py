"""
The sub-model lattice of the EWL family.

Each family is the EWL family with some coordinates fixed. The θ → 0 families (EW, Weibull, GE) fix θ at its lower
limit, where the logarithmic mixing degenerates to a single EW variable.
"""
from dataclasses import dataclass

from src.common.errors import NestingError
from src.ewl_core.params import PARAMETER_NAMES

THETA_LIMIT = "limit θ→0"
THETA_EPSILON = 1e-10


class FamilyTags:
    EWL = "EWL"
    CWL = "CWL"
    GEL = "GEL"
    CEL = "CEL"
    ERL = "ERL"
    RL = "RL"
    EW = "EW"
    WEIBULL = "Weibull"
    GE = "GE"


@dataclass(frozen=True)
class FamilyId:
    """
    A family of the lattice.

    :param tag: One of FamilyTags.
    :type tag: str
    :param fixed: (parameter name, value) pairs fixed by the family. θ may be fixed to THETA_LIMIT.
    :type fixed: tuple of (str, float | str)
    """
    tag: str
    fixed: tuple = ()

    @property
    def fixed_values(self):
        return dict(self.fixed)

    @property
    def theta_limit(self):
        return self.fixed_values.get("theta") == THETA_LIMIT

    @property
    def constraints(self):
        return frozenset(self.fixed)

    def __str__(self):
        return self.tag


EWL = FamilyId(FamilyTags.EWL)
CWL = FamilyId(FamilyTags.CWL, (("alpha", 1.0),))
GEL = FamilyId(FamilyTags.GEL, (("gamma", 1.0),))
CEL = FamilyId(FamilyTags.CEL, (("alpha", 1.0), ("gamma", 1.0)))
ERL = FamilyId(FamilyTags.ERL, (("gamma", 2.0),))
RL = FamilyId(FamilyTags.RL, (("alpha", 1.0), ("gamma", 2.0)))
EW = FamilyId(FamilyTags.EW, (("theta", THETA_LIMIT),))
WEIBULL = FamilyId(FamilyTags.WEIBULL, (("alpha", 1.0), ("theta", THETA_LIMIT)))
GE = FamilyId(FamilyTags.GE, (("gamma", 1.0), ("theta", THETA_LIMIT)))

FAMILIES = {f.tag.lower(): f for f in [EWL, CWL, GEL, CEL, ERL, RL, EW, WEIBULL, GE]}


def family_from_tag(tag):
    """
    :param tag: Family tag, case-insensitive (e.g. "ewl", "Weibull").
    :type tag: str
    :rtype: FamilyId
    """
    key = tag.strip().lower()
    if key not in FAMILIES:
        raise ValueError(f"Unknown family '{tag}'. Valid families are: {', '.join(f.tag for f in FAMILIES.values())}")
    return FAMILIES[key]


def free_parameters(f):
    """
    :return: Names of the parameters a fit of `f` estimates, in the order alpha, beta, gamma, theta.
    :rtype: list of str
    """
    fixed = f.fixed_values
    return [name for name in PARAMETER_NAMES if name not in fixed]


def n_free(f):
    return len(free_parameters(f))


def restrict(p, f):
    """
    :param p: Parameters of the full family.
    :type p: src.ewl_core.params.EwlParams
    :param f: Family whose fixed coordinates to apply.
    :type f: FamilyId
    :return: `p` with f's fixed coordinates overwritten. The θ → 0 limit is represented by θ = 1e-10 with
             `theta_limit` set.
    :rtype: src.ewl_core.params.EwlParams
    """
    values = {}
    for name, value in f.fixed:
        if value == THETA_LIMIT:
            values["theta"] = THETA_EPSILON
            values["theta_limit"] = True
        else:
            values[name] = value
    if len(values) == 0:
        return p
    return p.with_values(**values)


def theta_limit_counterpart(f):
    """
    :return: The θ → 0 family that fixes the same shape parameters as `f` (EW for EWL, Weibull for CWL, GE for GEL),
             or None if `f` is itself a limit family or the lattice has no such family.
    :rtype: FamilyId | None
    """
    if f.theta_limit:
        return None
    limit_constraints = f.constraints | {("theta", THETA_LIMIT)}
    for candidate in FAMILIES.values():
        if candidate.constraints == limit_constraints:
            return candidate
    return None


def is_nested(null, alt):
    """
    :return: Whether `null` is a strict restriction of `alt`, i.e. it fixes everything `alt` fixes and more.
    :rtype: bool
    """
    return alt.constraints < null.constraints


def validate_nesting(null, alt):
    if null == alt:
        raise NestingError(f"Cannot test {null} against itself")
    if not is_nested(null, alt):
        raise NestingError(f"{null} is not nested in {alt}; the likelihood-ratio test needs a strict restriction")
