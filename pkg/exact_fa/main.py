"""Entry point for the exact factor-analysis solver."""

from __future__ import annotations

import argparse
import logging
import sys

from .config import ConfigManager, StudyConfig
from .controller import StudyController
from .errors import DomainError, EmptySample, PrecisionFailure, ResourceExceeded

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_RESOURCES = 3


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--factors", "-k", type=int, help="Number of common factors k")
    parser.add_argument("--ridge", type=str, help="Ridge term lambda added to the diagonal (exact, e.g. 1/100)")
    parser.add_argument("--seed", type=int, help="Seed for random starts, slices and simulations")
    parser.add_argument("--starts", type=int, help="Number of random starts for the numerical fitters")
    parser.add_argument("--algo", choices=["lawley", "jennrich", "em"], help="Numerical fitter")
    parser.add_argument("--budget", type=int, help="Maximum Groebner basis size per branch")
    parser.add_argument("--max-degree", type=int, help="Maximum total degree per branch")
    parser.add_argument("--max-seconds", type=float, help="Wall-clock limit in seconds per branch")
    parser.add_argument("--sample-size", "-N", type=int, help="Sample size N used by the Fisher information")
    parser.add_argument(
        "--i-have-time",
        action="store_true",
        help="Allow exact mode beyond p <= 4, k = 1 (can run for days)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Exact maximum-likelihood factor analysis")
    parser.add_argument(
        "--config",
        type=str,
        help="Path to the configuration JSON file (defaults to exact-fa.json in EXACT_FA_HOME/home)",
    )
    parser.add_argument("--output", "-o", type=str, help="Write the report here (.json, or .csv for tables)")
    parser.add_argument("--workers", type=int, help="Worker processes for branches, starts and runs")
    parser.add_argument("--save-config", action="store_true", help="Persist the effective configuration")
    parser.add_argument(
        "--log-level",
        default="INFO",
        choices=["CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"],
        help="Logging verbosity",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    solve_exact = commands.add_parser("solve-exact", help="Enumerate every real solution of the likelihood equations")
    solve_exact.add_argument("--cov", required=True, help="Covariance file (CSV of decimals or JSON of p/q strings)")
    _add_common(solve_exact)

    solve_numeric = commands.add_parser("solve-numeric", help="Multi-start numerical fits")
    solve_numeric.add_argument("--cov", required=True, help="Covariance file")
    _add_common(solve_numeric)

    classify = commands.add_parser("classify", help="Proper / Improper / NoSolution verdict")
    classify.add_argument("--cov", required=True, help="Covariance file")
    classify.add_argument("--mode", choices=["exact", "numeric"], help="Exact enumeration or numerical multi-start")
    _add_common(classify)

    simulate = commands.add_parser("simulate", help="Monte-Carlo pattern frequencies")
    simulate.add_argument("--model", help="Preset name (s1, s2, s3, s1-p3, s2-p3, s3-p3, heywood-p3) or model JSON")
    simulate.add_argument("--runs", type=int, help="Number of simulated datasets")
    simulate.add_argument("--mode", choices=["exact", "numeric"], help="Classifier used for every run")
    simulate.add_argument("--decimals", type=int, help="Round simulated covariances to this many decimals")
    _add_common(simulate)

    interpolate = commands.add_parser("interpolate", help="Classify t*A + (1-t)*B along a grid")
    interpolate.add_argument("--cov-a", required=True, help="Covariance at t = 1")
    interpolate.add_argument("--cov-b", required=True, help="Covariance at t = 0")
    interpolate.add_argument("--grid", type=int, help="Number of equally spaced grid points")
    interpolate.add_argument("--mode", choices=["exact", "numeric"], help="Classifier used at every grid point")
    interpolate.add_argument("--steps", type=int, help="Bisection steps per pattern transition")
    interpolate.add_argument("--profile", type=int, help="Tabulate the discrepancy profile of psi_i (1-based)")
    _add_common(interpolate)
    return parser


def apply_overrides(config: StudyConfig, args: argparse.Namespace) -> StudyConfig:
    """Command-line values win over the loaded configuration."""

    config.mode = args.command
    if args.output:
        config.output = args.output
    if args.workers is not None:
        config.workers = args.workers
    if args.factors is not None:
        config.factors = args.factors
    if args.ridge is not None:
        config.ridge = args.ridge
    if args.seed is not None:
        config.seed = args.seed
    if args.starts is not None:
        config.fit.starts = args.starts
    if args.algo:
        config.fit.algorithm = args.algo
    if args.budget is not None:
        config.algebra.max_basis_size = args.budget
    if args.max_degree is not None:
        config.algebra.max_degree = args.max_degree
    if args.max_seconds is not None:
        config.algebra.max_seconds = args.max_seconds
    if args.sample_size is not None:
        config.fit.sample_size = args.sample_size
        config.simulation.sample_size = args.sample_size
    if args.i_have_time:
        config.algebra.allow_large = True
    if getattr(args, "mode", None):
        config.study.classify_mode = args.mode
    if getattr(args, "model", None):
        config.simulation.model = args.model
    if getattr(args, "runs", None) is not None:
        config.simulation.runs = args.runs
    if getattr(args, "decimals", None) is not None:
        config.simulation.exact_decimals = args.decimals
        config.simulation.numeric_decimals = args.decimals
    if getattr(args, "grid", None) is not None:
        config.study.grid = args.grid
    if getattr(args, "steps", None) is not None:
        config.study.transition_steps = args.steps
    if getattr(args, "profile", None) is not None:
        config.study.profile_index = args.profile - 1
    return config


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(level=args.log_level, format=LOG_FORMAT)

    config_manager = ConfigManager(args.config)
    apply_overrides(config_manager.config, args)
    controller = StudyController(config_manager)
    controller.set_mode(args.command)
    if args.save_config:
        controller.save_config()

    inputs = {
        "cov": getattr(args, "cov", None),
        "model": getattr(args, "model", None),
        "cov_a": getattr(args, "cov_a", None),
        "cov_b": getattr(args, "cov_b", None),
    }
    try:
        controller.run(**inputs)
    except DomainError as exc:
        logging.getLogger(__name__).error("%s", exc)
        return EXIT_DOMAIN
    except (ResourceExceeded, PrecisionFailure, EmptySample) as exc:
        logging.getLogger(__name__).error("%s", exc)
        return EXIT_RESOURCES
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
