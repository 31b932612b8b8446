"""kickrotor - command-line front end for the molecular kicked-rotor experiments."""

import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from src import __version__
from src.errors import ConfigError, NumericalError
from src.scenarios import SCENARIOS
from src.services.config_loader import config_error_from_validation, parse_config
from src.services.result_writer import write_results
from src.services.settings import default_output_dir

logger = logging.getLogger("kickrotor")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2

COMMAND_HELP = {
    "simulate": "two-train control experiment at the configured delays",
    "scan-delay": "final energy against the delay between the trains",
    "scan-period": "degree of control against the localizing period",
    "transition": "quantum vs classical control at fixed K = tau P",
    "resonance-map": "final energy against the period of a single train",
    "classical": "classical ensemble diffusion",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kickrotor", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subcommands = parser.add_subparsers(dest="command", required=True)

    for command in SCENARIOS:
        sub = subcommands.add_parser(command, help=COMMAND_HELP[command])
        sub.add_argument("--config", required=True, help="run configuration (*.cfg, JSON)")
        sub.add_argument("--out", default=None, help="output directory (default: $KICKROTOR_OUTPUT_DIR or ./results)")
        sub.add_argument("--seed", type=int, default=None, help="override the configured seed")
        sub.add_argument("--threads", type=int, default=1, help="worker threads for scans and ensembles")
        verbosity = sub.add_mutually_exclusive_group()
        verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
        verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")
    return parser


def configure_logging(verbose: bool = False, quiet: bool = False):
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    handler = logging.StreamHandler(sys.stdout)
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(message)s", "%H:%M:%S"))
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(level)


def update_progress(message: str):
    """Progress callback for scenario drivers."""
    logger.info("[Progress] %s", message)


def run(args: argparse.Namespace) -> int:
    """Parse the config, run the scenario, write results; returns the exit code."""
    if args.threads < 1:
        logger.error("[CLI] --threads must be >= 1")
        return EXIT_CONFIG

    try:
        config = parse_config(args.config, seed=args.seed)
        scenario = SCENARIOS[args.command](config, threads=args.threads, on_progress=update_progress)
        result = scenario.run()
        out_dir = default_output_dir(args.out)
        write_results(result, out_dir)
    except ValidationError as exc:
        logger.error("[CLI] Config error: %s", config_error_from_validation(exc))
        return EXIT_CONFIG
    except ConfigError as exc:
        logger.error("[CLI] Config error: %s", exc)
        return EXIT_CONFIG
    except NumericalError as exc:
        # A wrapped member failure that was really a bad input still counts as a config error
        if isinstance(exc.__cause__, ConfigError):
            logger.error("[CLI] Config error: %s", exc)
            return EXIT_CONFIG
        logger.error("[CLI] Numerical error: %s", exc)
        return EXIT_NUMERICAL
    except OSError as exc:
        logger.error("[CLI] I/O error: %s", exc)
        return EXIT_CONFIG

    logger.info("[CLI] %s finished in %.1f s; results in %s",
                args.command, result.manifest.wall_time_seconds or 0.0, out_dir)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
