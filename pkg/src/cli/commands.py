import importlib
import json
import sys

import numpy as np
from core_data_modules.logging import Logger
from core_data_modules.util import IOUtils

from src.common.errors import NonConvergenceError
from src.cli.datasets import load_dataset
from src.cli.output import OutputFormats, csv_rows, fit_table, gof_table, model_table as render_model_table, \
    to_machine
from src.ewl_core import distribution
from src.ewl_core.params import PARAMETER_NAMES, EwlParams
from src.ewl_core.sampling import sample_compound, sample_inverse
from src.gof.empirical import empirical_scaled_ttt, empirical_survival
from src.gof.model_table import model_table
from src.gof.statistics import GofReport, ad_cm_statistics, goodness_of_fit, ks_statistic
from src.inference.fit_result import FitMethods, akaike_information_criterion
from src.inference.fit_stats import FitStats
from src.inference.fitting import fit_family, initial_values
from src.inference.likelihood import family_loglik
from src.inference.lr_test import lr_test_from_fits
from src.moments.inequality import bonferroni, lorenz, scaled_ttt
from src.moments.residual_life import mean_residual_life
from src.moments.series_stats import SeriesStats
from src.special.configuration import SeriesPolicy
from src.submodels.evaluation import family_cdf, family_pdf
from src.submodels.families import EWL, FAMILIES, family_from_tag, is_nested, n_free, restrict

log = Logger(__name__)


class ExitCodes:
    SUCCESS = 0
    INPUT_ERROR = 1
    NUMERICAL_FAILURE = 2


class SampleMethods:
    INVERSE = "inverse"
    COMPOUND = "compound"

    ALL = [INVERSE, COMPOUND]


class Curves:
    PDF = "pdf"
    CDF = "cdf"
    SURVIVAL = "survival"
    HAZARD = "hazard"
    REVERSED_HAZARD = "reversed-hazard"
    MRL = "mrl"
    LORENZ = "lorenz"
    BONFERRONI = "bonferroni"
    TTT = "ttt"
    EMPIRICAL_TTT = "empirical-ttt"
    EMPIRICAL_SURVIVAL = "empirical-survival"

    MODEL = [PDF, CDF, SURVIVAL, HAZARD, REVERSED_HAZARD, MRL, LORENZ, BONFERRONI, TTT]
    EMPIRICAL = [EMPIRICAL_TTT, EMPIRICAL_SURVIVAL]
    ALL = MODEL + EMPIRICAL


def parse_key_values(pairs):
    """
    :param pairs: Strings of the form "name=value", e.g. ["alpha=2", "theta=0.5"].
    :type pairs: list of str
    :rtype: dict of str -> float
    """
    values = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"Expected name=value, but got '{pair}'")
        name, value = pair.split("=", 1)
        name = name.strip().lower()
        if name not in PARAMETER_NAMES:
            raise ValueError(f"Unknown parameter '{name}'. Valid parameters are: {', '.join(PARAMETER_NAMES)}")
        try:
            values[name] = float(value)
        except ValueError:
            raise ValueError(f"Parameter {name} must be a number, but got '{value}'")
    return values


def parse_grid(text):
    """
    :param text: "lo:hi:steps" with 0 < lo < hi and steps >= 2.
    :type text: str
    :rtype: numpy.ndarray
    """
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"Grid must be given as lo:hi:steps, but got '{text}'")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ValueError(f"Grid must be given as lo:hi:steps with numeric parts, but got '{text}'")
    if not (0 < lo < hi and np.isfinite(hi)):
        raise ValueError(f"Grid needs 0 < lo < hi, but got lo={lo}, hi={hi}")
    if steps < 2:
        raise ValueError(f"Grid needs at least 2 steps, but got {steps}")
    return np.linspace(lo, hi, steps)


def resolve_params(family_tag=None, params=None, params_file=None):
    """
    Combines a `fit --format machine` output file with name=value overrides into a family and a parameter point.

    :param family_tag: Family tag; defaults to the one in `params_file`, then to EWL.
    :type family_tag: str | None
    :param params: name=value overrides.
    :type params: list of str | None
    :param params_file: Path to the machine output of `fit` (or the first entry of `compare`'s).
    :type params_file: str | None
    :rtype: (src.submodels.families.FamilyId, src.ewl_core.params.EwlParams)
    """
    values = {}
    file_family = None
    if params_file is not None:
        try:
            with open(params_file, "r", encoding="utf-8") as f:
                stored = json.load(f)
        except OSError as e:
            raise ValueError(f"Could not read parameters from {params_file}: {e}")
        except json.JSONDecodeError as e:
            raise ValueError(f"{params_file} is not valid JSON: {e}")
        if isinstance(stored, dict) and "models" in stored:
            stored = stored["models"][0]
        if not isinstance(stored, dict) or "params" not in stored:
            raise ValueError(f"{params_file} has no 'params' entry")
        values.update({k: float(v) for k, v in stored["params"].items() if k in PARAMETER_NAMES})
        file_family = stored.get("family")
    values.update(parse_key_values(params or []))

    tag = family_tag if family_tag is not None else file_family
    family = EWL if tag is None else family_from_tag(tag)
    if family.theta_limit:
        values["theta"] = 0.5
    for name, value in family.fixed_values.items():
        if name != "theta":
            values.setdefault(name, value)
    missing = [name for name in PARAMETER_NAMES if name not in values]
    if len(missing) > 0:
        raise ValueError(f"Missing parameters for {family}: {', '.join(missing)} (use --params or --params-file)")
    return family, restrict(EwlParams.from_dict(values), family)


def _write(text, out, output_path=None):
    if output_path is not None:
        IOUtils.ensure_dirs_exist_for_file(output_path)
        with open(output_path, "w", encoding="utf-8") as f:
            f.write(text + "\n")
        log.info(f"Wrote output to {output_path}")
    else:
        out.write(text + "\n")


def _init_from_overrides(data, family, init_values):
    if init_values is None or len(init_values) == 0:
        return None
    base = initial_values(data, family)[0]
    overrides = {k: v for k, v in init_values.items() if k not in family.fixed_values}
    ignored = [k for k in init_values if k in family.fixed_values]
    if len(ignored) > 0:
        log.info(f"{family} fixes {', '.join(ignored)}; ignoring those --init values")
    return restrict(base.with_values(**overrides), family)


def cmd_fit(dataset, family, init_values=None, method=FitMethods.EM_THEN_DIRECT, output_format=OutputFormats.TABLE,
            out=None, output_path=None):
    """
    Fits one family to a dataset and renders the estimates, standard errors, log-likelihood, AIC, convergence and
    goodness of fit.

    :param dataset: Data to fit.
    :type dataset: src.cli.datasets.Dataset
    :param family: Family to fit.
    :type family: src.submodels.families.FamilyId
    :param init_values: name=value starting values (others come from the default starting point).
    :type init_values: dict of str -> float | None
    :param method: One of FitMethods.
    :type method: str
    :param output_format: One of OutputFormats.
    :type output_format: str
    :param out: Stream to write to. Defaults to stdout.
    :param output_path: File to write to instead of `out`.
    :type output_path: str | None
    :rtype: src.inference.fit_result.FitResult
    """
    out = sys.stdout if out is None else out
    stats = FitStats()
    init = _init_from_overrides(dataset.values, family, init_values)
    fit = fit_family(dataset.values, family, init=init, method=method, stats=stats)
    gof = goodness_of_fit(dataset.values, fit)
    if output_format == OutputFormats.MACHINE:
        d = fit.to_dict()
        d["gof"] = gof.to_dict()
        _write(to_machine(d), out, output_path)
    else:
        _write(fit_table(fit, gof), out, output_path)
    stats.print_summary()
    return fit


def _lr_pairs(families, requested):
    if requested is None:
        return [(null, alt) for alt in families for null in families if is_nested(null, alt)]
    pairs = []
    for null, alt in requested:
        if null not in families or alt not in families:
            log.warning(f"Skipping LR test {null} vs {alt}: both families must be in the comparison")
        elif not is_nested(null, alt):
            log.warning(f"Skipping LR test {null} vs {alt}: {null} is not nested in {alt}")
        else:
            pairs.append((null, alt))
    return pairs


def cmd_compare(dataset, families, lr_pairs=None, method=FitMethods.EM_THEN_DIRECT, workers=1,
                output_format=OutputFormats.TABLE, out=None, output_path=None, em_config=None, starting_points=None):
    """
    Fits every family, ranks them by AIC (then AD, then CM), and runs likelihood-ratio tests for nested pairs.

    :param dataset: Data to fit.
    :type dataset: src.cli.datasets.Dataset
    :param families: Families to compare.
    :type families: list of src.submodels.families.FamilyId
    :param lr_pairs: (null, alt) pairs to test; None tests every nested pair.
    :type lr_pairs: list of (FamilyId, FamilyId) | None
    :rtype: (list of src.gof.model_table.ModelTableRow, list of src.inference.fit_result.LrTestResult)
    """
    out = sys.stdout if out is None else out
    stats = FitStats()
    fit_kwargs = {"method": method}
    if em_config is not None:
        fit_kwargs["em_config"] = em_config
    if starting_points is not None:
        fit_kwargs["starting_points"] = starting_points
    rows = model_table(dataset.values, families, workers=workers, stats=stats, **fit_kwargs)

    fits = {row.family: row.fit for row in rows if not row.failed}
    lr_tests = []
    for null, alt in _lr_pairs(families, lr_pairs):
        if null not in fits or alt not in fits:
            log.warning(f"Skipping LR test {null} vs {alt}: one of the fits failed")
            continue
        lr_fit_kwargs = {k: v for k, v in fit_kwargs.items() if k == "em_config"}
        lr_tests.append(lr_test_from_fits(fits[null], fits[alt], dataset.values, stats, **lr_fit_kwargs))

    if output_format == OutputFormats.MACHINE:
        _write(to_machine({"models": [row.to_dict() for row in rows], "lr_tests": [t.to_dict() for t in lr_tests]}),
               out, output_path)
    else:
        _write(render_model_table(rows, lr_tests), out, output_path)
    stats.print_summary()
    return rows, lr_tests


def cmd_sample(params, n, seed, method=SampleMethods.INVERSE, out=None, output_path=None):
    """
    Writes n draws from EWL(params), one per line, exactly reproducible from `seed`.

    :rtype: numpy.ndarray
    """
    out = sys.stdout if out is None else out
    if method == SampleMethods.INVERSE:
        values = sample_inverse(params, n, seed)
    elif method == SampleMethods.COMPOUND:
        values = sample_compound(params, n, seed)
    else:
        raise ValueError(f"Unknown sampling method '{method}'. Valid methods are: {', '.join(SampleMethods.ALL)}")
    _write("\n".join(repr(float(v)) for v in values), out, output_path)
    return values


def _model_curve(which, family, p, x, policy, stats):
    if which in [Curves.PDF, Curves.CDF, Curves.SURVIVAL, Curves.HAZARD, Curves.REVERSED_HAZARD]:
        if not family.theta_limit:
            return {
                Curves.PDF: distribution.pdf,
                Curves.CDF: distribution.cdf,
                Curves.SURVIVAL: distribution.survival,
                Curves.HAZARD: distribution.hazard,
                Curves.REVERSED_HAZARD: distribution.reversed_hazard
            }[which](p, x)
        density = family_pdf(family, p, x)
        cumulative = family_cdf(family, p, x)
        with np.errstate(divide="ignore"):
            return {
                Curves.PDF: density,
                Curves.CDF: cumulative,
                Curves.SURVIVAL: 1 - cumulative,
                Curves.HAZARD: density / (1 - cumulative),
                Curves.REVERSED_HAZARD: density / cumulative
            }[which]

    q = restrict(p, family)
    function = {
        Curves.MRL: mean_residual_life,
        Curves.LORENZ: lorenz,
        Curves.BONFERRONI: bonferroni,
        Curves.TTT: scaled_ttt
    }[which]
    return np.array([function(q, float(v), policy, stats) for v in x])


def cmd_curves(which, params=None, family=EWL, grid=None, dataset=None, out=None, output_path=None):
    """
    Emits the (x, value) rows behind a model or empirical curve as CSV.

    Model curves need `params` and are evaluated on `grid` (or, if None, at the sorted values of `dataset`).
    Empirical curves (empirical-ttt, empirical-survival) need `dataset`.

    :param which: One of Curves.ALL.
    :type which: str
    :rtype: numpy.ndarray
    """
    out = sys.stdout if out is None else out
    if which not in Curves.ALL:
        raise ValueError(f"Unknown curve '{which}'. Valid curves are: {', '.join(Curves.ALL)}")

    if which in Curves.EMPIRICAL:
        if dataset is None:
            raise ValueError(f"The {which} curve needs a dataset")
        if which == Curves.EMPIRICAL_TTT:
            rows, header = empirical_scaled_ttt(dataset.values), ["p", "ttt"]
        else:
            rows, header = np.array(empirical_survival(dataset.values).to_pairs()), ["t", "survival"]
        _write(csv_rows(header, rows).rstrip("\n"), out, output_path)
        return rows

    if params is None:
        raise ValueError(f"The {which} curve needs parameters (--params or --params-file)")
    if grid is None:
        if dataset is None:
            raise ValueError(f"The {which} curve needs --grid or a dataset to evaluate at")
        grid = np.sort(dataset.values)

    stats = SeriesStats()
    values = _model_curve(which, family, params, np.asarray(grid, dtype=float), SeriesPolicy.from_environment(), stats)
    rows = np.column_stack([grid, values])
    _write(csv_rows(["x", which], rows).rstrip("\n"), out, output_path)
    if which not in [Curves.PDF, Curves.CDF, Curves.SURVIVAL, Curves.HAZARD, Curves.REVERSED_HAZARD]:
        stats.print_summary()
    return rows


def cmd_gof(dataset, family, params, output_format=OutputFormats.TABLE, out=None, output_path=None):
    """
    Goodness of fit of family `family` at `params` (e.g. from `fit --format machine`) to `dataset`.

    :rtype: src.gof.statistics.GofReport
    """
    out = sys.stdout if out is None else out
    ks, ks_pvalue = ks_statistic(dataset.values, params, family)
    ad_cm = ad_cm_statistics(dataset.values, params, family)
    aic = akaike_information_criterion(family_loglik(dataset.values, family, params), n_free(family))
    report = GofReport(ks, ks_pvalue, ad_cm.ad, ad_cm.cm, aic, dataset.n, ad_cm)
    if output_format == OutputFormats.MACHINE:
        _write(to_machine({"family": str(family), "params": params.to_dict(), "gof": report.to_dict()}), out,
               output_path)
    else:
        _write(gof_table(family, report), out, output_path)
    return report


def _families_from_tags(tags):
    return [family_from_tag(tag) for tag in tags]


def run(args, out=None):
    """
    Runs the subcommand parsed from the command line.

    :param args: Arguments from `src.cli.arguments.build_parser()`.
    :type args: argparse.Namespace
    :param out: Stream to write results to. Defaults to stdout.
    :return: Process exit code, one of ExitCodes.
    :rtype: int
    """
    try:
        if args.command == "fit":
            dataset = load_dataset(args.input, args.column)
            cmd_fit(dataset, family_from_tag(args.family), parse_key_values(args.init or []), args.method,
                    args.format, out, args.output)
        elif args.command == "compare":
            if args.configuration_module is not None:
                config = importlib.import_module(args.configuration_module).ANALYSIS_CONFIGURATION
                log.info(f"Running analysis '{config.analysis_name}'")
                dataset = load_dataset(config.dataset.path, config.dataset.column, config.dataset.name)
                families = _families_from_tags(config.families)
                lr_pairs = None if config.lr_pairs is None else \
                    [(family_from_tag(null), family_from_tag(alt)) for null, alt in config.lr_pairs]
                cmd_compare(dataset, families, lr_pairs, config.fit_method, config.workers, args.format, out,
                            args.output, config.em_config, config.starting_points)
            else:
                if args.input is None:
                    raise ValueError("compare needs an input file or --configuration-module")
                dataset = load_dataset(args.input, args.column)
                lr_pairs = None
                if args.lr is not None:
                    lr_pairs = []
                    for pair in args.lr:
                        if ":" not in pair:
                            raise ValueError(f"--lr expects null:alt, but got '{pair}'")
                        null, alt = pair.split(":", 1)
                        lr_pairs.append((family_from_tag(null), family_from_tag(alt)))
                families = _families_from_tags(sorted(FAMILIES.keys()) if args.family is None else args.family)
                cmd_compare(dataset, families, lr_pairs, args.method, args.workers,
                            args.format, out, args.output)
        elif args.command == "sample":
            family, params = resolve_params(None, args.params, args.params_file)
            if family.theta_limit:
                raise ValueError(f"Sampling needs 0 < theta < 1, so is not available for the {family} limit family")
            cmd_sample(params, args.n, args.seed, args.method, out, args.output)
        elif args.command == "curves":
            dataset = None if args.input is None else load_dataset(args.input, args.column)
            family, params = EWL, None
            if args.which in Curves.MODEL:
                family, params = resolve_params(args.family, args.params, args.params_file)
            grid = None if args.grid is None else parse_grid(args.grid)
            cmd_curves(args.which, params, family, grid, dataset, out, args.output)
        elif args.command == "gof":
            dataset = load_dataset(args.input, args.column)
            family, params = resolve_params(args.family, args.params, args.params_file)
            cmd_gof(dataset, family, params, args.format, out, args.output)
        else:
            raise ValueError(f"Unknown command '{args.command}'")
    except ValueError as e:
        log.warning(f"Input error: {e}")
        sys.stderr.write(f"error: {e}\n")
        return ExitCodes.INPUT_ERROR
    except (NonConvergenceError, ArithmeticError) as e:
        log.warning(f"Numerical failure: {e}")
        sys.stderr.write(f"error: {e}\n")
        return ExitCodes.NUMERICAL_FAILURE
    return ExitCodes.SUCCESS
