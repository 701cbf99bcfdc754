"""
@author jacobi petrucciani
@desc command line entry point: warpiso <experiment> --config <file>
"""
import argparse
import logging
import sys
from typing import List, Optional

from warpiso.errors import WarpisoException
from warpiso.runner import EXPERIMENTS, load_config, run_experiment, run_suite, validate_config


logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    """
    @cc 1
    @desc the argument parser
    @ret the parser
    """
    parser = argparse.ArgumentParser(
        prog="warpiso", description="isoperimetric experiments in warped products"
    )
    parser.add_argument("experiment", choices=list(EXPERIMENTS) + ["suite"])
    parser.add_argument(
        "directory", nargs="?", help="config directory, only for the suite command"
    )
    parser.add_argument("--config", help="flat yaml experiment config")
    parser.add_argument("--out", help="output directory (root directory for suite)")
    parser.add_argument("--resolution", type=int, help="fiber grid resolution override")
    parser.add_argument("--seed", type=int, help="seed override for random shapes")
    parser.add_argument("--no-plots", action="store_true", help="skip svg plots")
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    @cc 6
    @desc run one experiment or a suite and report the exit status
    @arg argv: command line arguments, sys.argv by default
    @ret 0 iff no record failed
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    plots = not args.no_plots
    try:
        if args.experiment == "suite":
            if not args.directory:
                logger.error("suite needs a config directory")
                return 2
            bundles = run_suite(args.directory, args.out, plots)
            failed = [b.experiment for b in bundles if b.exit_status]
            if failed:
                logger.error("failing experiments: %s", failed)
            return 1 if failed else 0
        if args.config:
            config = load_config(args.config, args.experiment)
        else:
            config = validate_config({}, args.experiment)
        bundle = run_experiment(config, args.out, args.resolution, args.seed, plots)
    except WarpisoException as error:
        logger.error("%s", error)
        return 2
    print("{}: {} -> {}".format(bundle.experiment, bundle.summary, bundle.directory))
    return bundle.exit_status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
