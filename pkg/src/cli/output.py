"""
Rendering of CLI results as human-readable tables or as JSON (the machine format).
"""
import csv
import io
import json
import math

from src.ewl_core.params import PARAMETER_NAMES


class OutputFormats:
    TABLE = "table"
    MACHINE = "machine"

    ALL = [TABLE, MACHINE]


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def to_machine(obj):
    """
    :param obj: Dict or list of dicts to serialise. Non-finite floats become null.
    :rtype: str
    """
    return json.dumps(_json_safe(obj), indent=2)


def _format_number(value, digits=4):
    if value is None:
        return "-"
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return f"{value:.{digits}f}" if abs(value) >= 10 ** -digits or value == 0 else f"{value:.{digits}e}"


def _format_estimate(fit, name):
    value = fit.params.get(name)
    if name not in fit.free_parameters:
        return "0 (limit)" if name == "theta" and fit.params.theta_limit else f"{_format_number(value)} (fixed)"
    return f"{_format_number(value)} ({_format_number(fit.std_error(name))})"


def fit_table(fit, gof=None):
    """
    :return: Table of one fit: estimates (standard errors), -2 log L, AIC, convergence, and goodness of fit.
    :rtype: str
    """
    lines = [f"Family: {fit.family}  (n = {fit.n_obs}, method = {fit.method}, iterations = {fit.iterations})"]
    for name in PARAMETER_NAMES:
        lines.append(f"  {name:<8}{_format_estimate(fit, name)}")
    lines.append(f"  -2logL  {_format_number(fit.minus_two_loglik, 3)}")
    lines.append(f"  AIC     {_format_number(fit.aic, 3)}")
    status = "converged" if fit.converged else "NOT converged"
    if fit.on_boundary:
        status += ", theta on boundary"
    lines.append(f"  status  {status} (gap {fit.convergence_gap:.3e})")
    if gof is not None:
        lines.append(f"  K-S     {_format_number(gof.ks)} (p = {_format_number(gof.ks_pvalue)})")
        lines.append(f"  AD      {_format_number(gof.ad)}")
        lines.append(f"  CM      {_format_number(gof.cm)}")
    return "\n".join(lines)


def model_table(rows, lr_tests=()):
    """
    :param rows: Ranked model-table rows.
    :type rows: list of src.gof.model_table.ModelTableRow
    :param lr_tests: Likelihood-ratio tests to list under the table.
    :type lr_tests: iterable of src.inference.fit_result.LrTestResult
    :rtype: str
    """
    header = f"{'Rank':<5}{'Family':<9}{'alpha':>24}{'beta':>24}{'gamma':>24}{'theta':>24}" \
             f"{'-2logL':>11}{'AIC':>11}{'K-S':>8}{'p':>8}{'AD':>8}{'CM':>8}"
    lines = [header]
    for rank, row in enumerate(rows, start=1):
        if row.failed:
            lines.append(f"{'-':<5}{str(row.family):<9}  fit failed: {row.error}")
            continue
        fit, gof = row.fit, row.gof
        estimates = "".join(f"{_format_estimate(fit, name):>24}" for name in PARAMETER_NAMES)
        lines.append(f"{rank:<5}{str(row.family):<9}{estimates}{fit.minus_two_loglik:>11.3f}{fit.aic:>11.3f}"
                     f"{gof.ks:>8.4f}{gof.ks_pvalue:>8.4f}{gof.ad:>8.4f}{gof.cm:>8.4f}")

    lr_tests = list(lr_tests)
    if len(lr_tests) > 0:
        lines.append("")
        lines.append("Likelihood-ratio tests")
        for test in lr_tests:
            refit = " (alternative refitted)" if test.refitted else ""
            lines.append(f"  {test.null_family} vs {test.alt_family}: w = {test.statistic:.4f}, df = {test.df}, "
                         f"p = {test.p_value:.4g}{refit}")
    return "\n".join(lines)


def gof_table(family, gof):
    return "\n".join([
        f"Family: {family}  (n = {gof.n})",
        f"  K-S     {_format_number(gof.ks)} (p = {_format_number(gof.ks_pvalue)})",
        f"  AD      {_format_number(gof.ad)} (raw {_format_number(gof.ad_cm.ad_raw)}, "
        f"normal transform {_format_number(gof.ad_cm.ad_normal)})",
        f"  CM      {_format_number(gof.cm)} (raw {_format_number(gof.ad_cm.cm_raw)}, "
        f"normal transform {_format_number(gof.ad_cm.cm_normal)})",
        f"  AIC     {_format_number(gof.aic, 3)}"
    ])


def csv_rows(header, rows):
    """
    :param header: Column names.
    :type header: list of str
    :param rows: Rows of values.
    :type rows: iterable of iterable
    :rtype: str
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) for v in row])
    return buffer.getvalue()
