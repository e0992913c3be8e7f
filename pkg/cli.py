"""
Command-Line Entry Point for lasso-density.
Parses arguments, configures logging, runs one engine command and maps
domain errors to exit codes.
"""

import argparse
import logging
import sys
from typing import Optional, Sequence

from alphabet import Alphabet
from config import (
    DEFAULT_JOBS, EXIT_INCONSISTENT, EXIT_INVALID_INPUT, EXIT_OK, EXIT_RESOURCE_CAP,
    EXIT_USAGE, LASSO_DENSITY_CAP, LOG_FORMAT, LOG_LEVEL, OSCILLATION_READING,
    OSCILLATION_READINGS, OUTPUT_FORMATS,
)
from density_engine import DensityEngine
from errors import InconsistencyError, InputValidationError, ResourceCapExceeded, SingularSystemError
from lasso_lab import growth_curve
from report import (
    render_classify, render_count, render_crosscheck, render_curve, render_density_report,
    render_growth, render_partition, render_reduction,
)

logger = logging.getLogger(__name__)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=_positive_int, default=LASSO_DENSITY_CAP,
                        help="maximum number of lassos one enumeration may visit")
    common.add_argument("--jobs", type=_positive_int, default=DEFAULT_JOBS,
                        help="worker processes for enumeration")
    common.add_argument("--log-level", default=LOG_LEVEL.upper(), type=str.upper,
                        choices=("DEBUG", "INFO", "WARNING", "ERROR"))

    formula = argparse.ArgumentParser(add_help=False)
    formula.add_argument("--formula", required=True, help="LTL formula, e.g. 'a U b'")
    formula.add_argument("--ap", required=True, help="atomic propositions, e.g. 'a,b'")

    automaton = argparse.ArgumentParser(add_help=False)
    automaton.add_argument("--automaton", required=True, metavar="FILE")
    automaton.add_argument("--complete-with-sink", action="store_true",
                           help="route missing transitions to a fresh rejecting sink")

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--format", choices=OUTPUT_FORMATS, default="table", dest="output_format")

    parser = argparse.ArgumentParser(
        prog="lasso-density",
        description="Exact and empirical density of LTL properties over lassos.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("classify", parents=[common, formula],
                        help="syntactic class and convergence class")

    count = commands.add_parser("count", parents=[common, formula], help="models of length n")
    count.add_argument("--n", type=_positive_int, required=True)

    curve = commands.add_parser("curve", parents=[common, formula, output], help="density curve")
    curve.add_argument("--n-max", type=_positive_int, required=True)
    curve.add_argument("--growth", action="store_true", help="also print the growth function")

    commands.add_parser("asymptotic", parents=[common, automaton], help="asymptotic density")

    partition = commands.add_parser("partition", parents=[common, automaton],
                                    help="base/loop model and non-model counts")
    partition.add_argument("--n", type=_positive_int, required=True)

    commands.add_parser("compose", parents=[common, formula], help="composition trace")

    oscillate = commands.add_parser("oscillate", parents=[common, output],
                                    help="curve of the oscillating property over AP = {a}")
    oscillate.add_argument("--intervals", required=True, help="c1:d1,c2:d2,...")
    oscillate.add_argument("--n-max", type=_positive_int, required=True)
    oscillate.add_argument("--reading", choices=OSCILLATION_READINGS, default=OSCILLATION_READING)

    crosscheck = commands.add_parser("crosscheck", parents=[common, automaton],
                                     help="formula vs. automaton on every lasso up to n-max")
    crosscheck.add_argument("--formula", required=True)
    crosscheck.add_argument("--n-max", type=_positive_int, required=True)
    return parser


def _execute(args: argparse.Namespace) -> int:
    engine = DensityEngine(
        cap=args.cap,
        jobs=args.jobs,
        reading=getattr(args, "reading", None),
        complete_with_sink=getattr(args, "complete_with_sink", False),
    )
    out = sys.stdout

    match args.command:
        case "classify":
            out.write(render_classify(engine.classify(args.formula, Alphabet.from_text(args.ap))))
        case "count":
            out.write(render_count(engine.count(args.formula, Alphabet.from_text(args.ap), args.n)))
        case "curve":
            curve = engine.curve(args.formula, Alphabet.from_text(args.ap), args.n_max)
            out.write(render_curve(curve, args.output_format))
            if args.growth:
                out.write(render_growth(growth_curve(curve)))
        case "asymptotic":
            out.write(render_density_report(engine.asymptotic(args.automaton)))
        case "partition":
            out.write(render_partition(engine.partition(args.automaton, args.n)))
        case "compose":
            out.write(render_reduction(engine.compose(args.formula, Alphabet.from_text(args.ap))))
        case "oscillate":
            out.write(render_curve(engine.oscillate(args.intervals, args.n_max), args.output_format))
        case "crosscheck":
            result = engine.crosscheck(args.formula, args.automaton, args.n_max)
            out.write(render_crosscheck(result))
            if not result.agrees:
                return EXIT_INCONSISTENT
    return EXIT_OK


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    logging.basicConfig(level=args.log_level, format=LOG_FORMAT, stream=sys.stderr, force=True)

    try:
        return _execute(args)
    except SingularSystemError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except InputValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except ResourceCapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE_CAP
    except InconsistencyError as e:
        logger.error(f"Internal inconsistency: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INCONSISTENT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
