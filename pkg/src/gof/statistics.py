"""
Goodness-of-fit statistics of a fitted lifetime model: Kolmogorov-Smirnov with its asymptotic p-value, and
Anderson-Darling and Cramér-von Mises in the Chen-Balakrishnan form for estimated parameters.
"""
from dataclasses import asdict, dataclass

import numpy as np
from core_data_modules.logging import Logger
from scipy.stats import kstwobign, norm

from src.inference.likelihood import validate_data
from src.submodels.evaluation import family_cdf
from src.submodels.families import EWL

log = Logger(__name__)

_U_CLAMP = 1e-15


def _probability_integral_transform(data, p, f):
    y = np.sort(validate_data(data))
    return np.asarray(family_cdf(f, p, y), dtype=float)


def ks_from_uniforms(u):
    """
    :param u: Model cdf at the order statistics, sorted ascending.
    :type u: numpy.ndarray
    :return: (D_n, asymptotic p-value).
    :rtype: (float, float)
    """
    n = len(u)
    i = np.arange(1, n + 1)
    d = max(float(np.max(i / n - u)), float(np.max(u - (i - 1) / n)))
    return d, float(kstwobign.sf(np.sqrt(n) * d))


def ks_statistic(data, p, f=EWL):
    """
    Kolmogorov-Smirnov distance D_n = sup |F_n - F| between the sample and family `f` at `p`, with the p-value of
    the asymptotic Kolmogorov law at √n D_n (not adjusted for estimated parameters).

    :param data: Observed lifetimes.
    :type data: iterable of float
    :param p: Model parameters.
    :type p: src.ewl_core.params.EwlParams
    :param f: Model family.
    :type f: src.submodels.families.FamilyId
    :rtype: (float, float)
    """
    return ks_from_uniforms(_probability_integral_transform(data, p, f))


def _clamp(u):
    clamped = np.clip(u, _U_CLAMP, 1 - _U_CLAMP)
    if np.any(clamped != u):
        log.warning(f"Clamped {int(np.sum(clamped != u))} model probabilities to [{_U_CLAMP}, {1 - _U_CLAMP}] "
                    f"before computing AD/CM")
    return clamped


def anderson_darling(u):
    """A² = -n - (1/n) Σ (2i - 1) [log u_i + log(1 - u_(n+1-i))] for sorted u."""
    n = len(u)
    i = np.arange(1, n + 1)
    return float(-n - np.sum((2 * i - 1) * (np.log(u) + np.log1p(-u[::-1]))) / n)


def cramer_von_mises(u):
    """W² = Σ (u_i - (2i - 1)/(2n))² + 1/(12n) for sorted u."""
    n = len(u)
    i = np.arange(1, n + 1)
    return float(np.sum((u - (2 * i - 1) / (2 * n)) ** 2) + 1 / (12 * n))


def ad_correction(n):
    return 1 + 0.75 / n + 2.25 / n ** 2


def cm_correction(n):
    return 1 + 0.5 / n


@dataclass(frozen=True)
class AdCmStatistics:
    """
    Anderson-Darling and Cramér-von Mises statistics in three variants.

    :param ad: A² times 1 + 0.75/n + 2.25/n².
    :param cm: W² times 1 + 0.5/n.
    :param ad_raw: Uncorrected A².
    :param cm_raw: Uncorrected W².
    :param ad_normal: Corrected A² after the normal transform u → Φ((Φ⁻¹(u) - m)/s).
    :param cm_normal: Corrected W² after the same transform.
    """
    ad: float
    cm: float
    ad_raw: float
    cm_raw: float
    ad_normal: float
    cm_normal: float

    def to_dict(self):
        return asdict(self)


def ad_cm_from_uniforms(u):
    """
    :param u: Model cdf at the order statistics, sorted ascending.
    :type u: numpy.ndarray
    :rtype: AdCmStatistics
    """
    n = len(u)
    u = _clamp(np.asarray(u, dtype=float))
    ad_raw = anderson_darling(u)
    cm_raw = cramer_von_mises(u)

    v = norm.ppf(u)
    s = np.std(v, ddof=1) if n > 1 else 0.0
    if s > 0:
        normal_u = _clamp(np.sort(norm.cdf((v - np.mean(v)) / s)))
        ad_normal = anderson_darling(normal_u) * ad_correction(n)
        cm_normal = cramer_von_mises(normal_u) * cm_correction(n)
    else:
        ad_normal = cm_normal = float("nan")

    return AdCmStatistics(ad_raw * ad_correction(n), cm_raw * cm_correction(n), ad_raw, cm_raw, ad_normal,
                          cm_normal)


def ad_cm_statistics(data, p, f=EWL):
    """
    :param data: Observed lifetimes.
    :type data: iterable of float
    :param p: Model parameters.
    :type p: src.ewl_core.params.EwlParams
    :param f: Model family.
    :type f: src.submodels.families.FamilyId
    :rtype: AdCmStatistics
    """
    return ad_cm_from_uniforms(_probability_integral_transform(data, p, f))


@dataclass(frozen=True)
class GofReport:
    ks: float
    ks_pvalue: float
    ad: float
    cm: float
    aic: float
    n: int
    ad_cm: AdCmStatistics = None

    def __post_init__(self):
        assert 0 <= self.ks <= 1, f"K-S distance must lie in [0, 1], but got {self.ks}"
        assert self.ad >= 0, f"AD must be >= 0, but got {self.ad}"
        assert self.cm >= 0, f"CM must be >= 0, but got {self.cm}"

    def to_dict(self):
        d = {"ks": self.ks, "ks_pvalue": self.ks_pvalue, "ad": self.ad, "cm": self.cm, "aic": self.aic, "n": self.n}
        if self.ad_cm is not None:
            d["ad_cm_variants"] = self.ad_cm.to_dict()
        return d


def goodness_of_fit(data, fit):
    """
    :param data: Data `fit` was fitted to.
    :type data: iterable of float
    :param fit: Fitted model.
    :type fit: src.inference.fit_result.FitResult
    :rtype: GofReport
    """
    u = _probability_integral_transform(data, fit.params, fit.family)
    ks, ks_pvalue = ks_from_uniforms(u)
    ad_cm = ad_cm_from_uniforms(u)
    return GofReport(ks, ks_pvalue, ad_cm.ad, ad_cm.cm, fit.aic, len(u), ad_cm)
