import argparse
import logging
import sys

from b_expansion import expand_named
from config import OUTPUT_FORMATS
from config import CliConfig
from config import load_config
from errors import ConfigError
from errors import EngineError
from errors import GoldenParseError
from errors import UsageError
from golden import GOLDEN_ORDER
from golden import GOLDEN_SERIES
from golden import dump_golden
from golden import load_golden
from golden import tables_from_series
from rendering import highlight
from rendering import render_coefficient_tables
from rendering import render_poly
from rendering import render_reports
from series_builders import SeriesId
from series_builders import plain_core
from verifier import SUITES
from verifier import check_golden
from verifier import run_suites

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"order must be >= 0, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seacalc",
        description="Exact fixed-mass operator calculus for the rescaled Dirac sea.",
    )
    parser.add_argument("--config", help="key = value configuration file")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, dest="output_format")
    parser.add_argument("--color", action="store_true", default=None)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    commands = parser.add_subparsers(dest="command", required=True)

    expand = commands.add_parser("expand", help="expand a named series")
    expand.add_argument("series", help=", ".join(s.value for s in SeriesId))
    expand.add_argument("--order", type=non_negative)
    expand.add_argument("--layer", choices=("pk", "b"), default="b")

    verify = commands.add_parser("verify", help="run identity suites")
    verify.add_argument("suites", nargs="+", help=f"all, {', '.join(SUITES)}")
    verify.add_argument("--order", type=non_negative, help="pk-layer order")
    verify.add_argument("--b-order", type=non_negative, dest="b_order")
    verify.add_argument("--golden", help="golden file for the golden suite")
    verify.add_argument(
        "--no-timing",
        action="store_true",
        help="omit runtimes so reports are byte-stable",
    )

    coeff = commands.add_parser("coeff", help="print the coefficient tables")
    coeff.add_argument("--rmax", type=non_negative, default=6)

    golden = commands.add_parser("golden", help="golden-table files")
    golden_commands = golden.add_subparsers(dest="golden_command", required=True)
    check = golden_commands.add_parser("check", help="compare a golden file")
    check.add_argument("path")
    dump = golden_commands.add_parser("dump", help="print computed golden tables")
    dump.add_argument("--series", nargs="+")
    dump.add_argument("--order", type=non_negative, default=GOLDEN_ORDER)
    return parser


def configure_logging(config: CliConfig, verbose: int) -> None:
    level = config.log_level
    if verbose == 1:
        level = "INFO"
    elif verbose >= 2:
        level = "DEBUG"
    logging.basicConfig(
        level=getattr(logging, level),
        format="%(levelname)s %(module)s: %(message)s",
        force=True,
    )


def colorize(text: str, config: CliConfig) -> str:
    # only text output is coloured
    return highlight(text, config.color and config.output_format == "text")


def parse_series(name: str) -> SeriesId:
    try:
        return SeriesId.parse(name)
    except EngineError as e:
        raise UsageError(str(e)) from None


def cmd_expand(args: argparse.Namespace, config: CliConfig) -> int:
    series = parse_series(args.series)
    if args.layer == "pk":
        order = config.default_order_pk if args.order is None else args.order
        poly = plain_core(series, order)
    else:
        order = config.default_order_b if args.order is None else args.order
        poly = expand_named(series, order)
    print(colorize(render_poly(poly, config.output_format, series.value), config))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: CliConfig) -> int:
    if args.golden:
        config = config.with_overrides(golden_path=args.golden)
    try:
        reports = run_suites(args.suites, config, order_pk=args.order, order_b=args.b_order)
    except GoldenParseError:
        raise
    except EngineError as e:
        raise UsageError(str(e)) from None
    include_timing = not args.no_timing
    print(
        colorize(render_reports(reports, config.output_format, include_timing), config),
    )
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def cmd_coeff(args: argparse.Namespace, config: CliConfig) -> int:
    print(render_coefficient_tables(args.rmax, config.output_format))
    return EXIT_OK


def cmd_golden(args: argparse.Namespace, config: CliConfig) -> int:
    if args.golden_command == "check":
        report = check_golden(load_golden(args.path))
        print(colorize(render_reports([report], config.output_format), config))
        return EXIT_OK if report.passed else EXIT_FAILED
    names = args.series or [s.value for s in GOLDEN_SERIES]
    series = [parse_series(name) for name in names]
    print(dump_golden(tables_from_series(series, args.order)), end="")
    return EXIT_OK


COMMANDS = {
    "expand": cmd_expand,
    "verify": cmd_verify,
    "coeff": cmd_coeff,
    "golden": cmd_golden,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        config = load_config(args.config).with_overrides(
            output_format=args.output_format,
            color=args.color,
        )
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging(config, args.verbose)
    try:
        return COMMANDS[args.command](args, config)
    except (UsageError, GoldenParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except EngineError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
