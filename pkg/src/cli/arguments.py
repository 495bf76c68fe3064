import argparse

from src.cli.commands import Curves, SampleMethods
from src.cli.output import OutputFormats
from src.inference.fit_result import FitMethods
from src.submodels.families import EWL, FAMILIES


def _add_input_arguments(parser, required=True):
    parser.add_argument("--column",
                        help="Name of the CSV column holding the lifetimes, for inputs with more than one column")
    if required:
        parser.add_argument("input", metavar="input-file",
                            help="Path to a dataset: one positive lifetime per line, or a CSV with a header row")
    else:
        parser.add_argument("input", metavar="input-file", nargs="?",
                            help="Path to a dataset: one positive lifetime per line, or a CSV with a header row")


def _add_output_arguments(parser, formats=True):
    if formats:
        parser.add_argument("--format", choices=OutputFormats.ALL, default=OutputFormats.TABLE,
                            help="Output format: a human-readable table or JSON for re-ingestion by curves/gof")
    parser.add_argument("--output",
                        help="File to write the results to. Defaults to standard output")


def _add_params_arguments(parser):
    parser.add_argument("--params", action="append", metavar="NAME=VALUE",
                        help="One parameter value per use, e.g. --params alpha=2 --params theta=0.5")
    parser.add_argument("--params-file",
                        help="Path to the machine-format output of `fit` to read parameters (and family) from. "
                             "--params values override the file's")


def build_parser():
    parser = argparse.ArgumentParser(description="Fits, evaluates and samples the exponentiated Weibull-logarithmic "
                                                 "(EWL) lifetime distribution family")
    subparsers = parser.add_subparsers(dest="command", required=True)

    family_names = sorted(FAMILIES.keys())

    fit_parser = subparsers.add_parser("fit", help="Fits one family by maximum likelihood")
    fit_parser.add_argument("--family", default=str(EWL).lower(), type=str.lower, choices=family_names,
                            help="Family to fit")
    fit_parser.add_argument("--init", action="append", metavar="NAME=VALUE",
                            help="One starting value per use, e.g. --init alpha=1 --init theta=0.5. Unset values use "
                                 "the default start")
    fit_parser.add_argument("--method", choices=FitMethods.ALL, default=FitMethods.EM_THEN_DIRECT,
                            help="Fitting method")
    _add_output_arguments(fit_parser)
    _add_input_arguments(fit_parser)

    compare_parser = subparsers.add_parser("compare",
                                           help="Fits several families, ranks them by AIC, and runs likelihood-"
                                                "ratio tests between nested pairs")
    compare_parser.add_argument("--family", action="append", type=str.lower, choices=family_names,
                                help="One family to compare per use. Defaults to every family")
    compare_parser.add_argument("--lr", action="append", metavar="NULL:ALT",
                                help="One likelihood-ratio test per use, e.g. --lr ew:ewl. Defaults to every nested "
                                     "pair")
    compare_parser.add_argument("--method", choices=FitMethods.ALL, default=FitMethods.EM_THEN_DIRECT,
                                help="Fitting method")
    compare_parser.add_argument("--workers", type=int, default=1,
                                help="Number of processes to fit families in")
    compare_parser.add_argument("--configuration-module",
                                help="Configuration module to import e.g. 'configurations.fatigue_analysis'. "
                                     "This module must contain an ANALYSIS_CONFIGURATION property, which takes the "
                                     "place of input-file, --family, --lr, --method and --workers")
    _add_output_arguments(compare_parser)
    _add_input_arguments(compare_parser, required=False)

    sample_parser = subparsers.add_parser("sample", help="Draws a reproducible sample from EWL(params)")
    _add_params_arguments(sample_parser)
    sample_parser.add_argument("--n", type=int, required=True, help="Number of values to draw")
    sample_parser.add_argument("--seed", type=int, required=True, help="Seed of the random number generator")
    sample_parser.add_argument("--method", choices=SampleMethods.ALL, default=SampleMethods.INVERSE,
                               help="Inverse-cdf transform or the compound (max of a logarithmic number of EW draws) "
                                    "construction")
    _add_output_arguments(sample_parser, formats=False)

    curves_parser = subparsers.add_parser("curves", help="Writes the (x, value) rows of a model or empirical curve "
                                                         "as CSV")
    curves_parser.add_argument("which", choices=Curves.ALL, help="Curve to emit")
    curves_parser.add_argument("--family", type=str.lower, choices=family_names,
                               help="Family of the parameters. Defaults to the one in --params-file, then EWL")
    _add_params_arguments(curves_parser)
    curves_parser.add_argument("--grid", metavar="LO:HI:STEPS",
                               help="Evenly spaced points to evaluate a model curve at. Defaults to the sorted "
                                    "values of input-file")
    _add_output_arguments(curves_parser, formats=False)
    _add_input_arguments(curves_parser, required=False)

    gof_parser = subparsers.add_parser("gof", help="Goodness of fit of a family at given parameters")
    gof_parser.add_argument("--family", type=str.lower, choices=family_names,
                            help="Family of the parameters. Defaults to the one in --params-file, then EWL")
    _add_params_arguments(gof_parser)
    _add_output_arguments(gof_parser)
    _add_input_arguments(gof_parser)

    return parser
