# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Command-line interface for DNSCM."""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from dnscm import __version__
from dnscm.config import LOG_LEVELS, OPTIMIZER_MODES, PROFILES, WELFARE_NAMES
from dnscm.core import COMMANDS, run_experiment
from dnscm.forwardsim import NOISE_SCALES
from dnscm.profiles import create_config_from_profile
from dnscm.utils import load_config_file, merge_dicts, parse_float_grid

# Flag dest -> config key, for flags that only set one key
FLAG_KEYS = {
    "seed": "seed",
    "out": "out_dir",
    "threads": "threads",
    "log_level": "log_level",
    "n": "n",
    "k": "k",
    "repetitions": "repetitions",
    "noise_scale": "noise_scale",
    "budget": "budget",
    "welfare": "welfare",
    "mode": "mode",
    "bandwidth": "bandwidth",
    "grid_points": "grid_points",
}
GRID_FLAGS = {
    "delta": "delta_values",
    "sigma_u": "sigma_u_values",
    "sigma_mu": "sigma_mu_values",
}


def _bandwidth(text: str) -> Any:
    return text if text == "auto" else float(text)


def _add_common_arguments(parser: argparse.ArgumentParser, command: str) -> None:
    parser.add_argument(
        "--profile",
        type=str,
        default=command,
        choices=sorted(PROFILES),
        help=f"Experiment profile (default: {command})",
    )
    parser.add_argument(
        "--config",
        type=str,
        default=None,
        help="Path to configuration file (JSON or YAML), applied over the profile",
    )
    parser.add_argument("--seed", type=int, default=None, help="Master seed (default: 0)")
    parser.add_argument(
        "--out", type=str, default=None, help="Output directory (default: results)"
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="Worker threads; results do not depend on it (default: 1)",
    )
    parser.add_argument(
        "--svg",
        action="store_true",
        default=None,
        help="Also write SVG plots (needs dnscm[plot])",
    )
    parser.add_argument(
        "--log-level",
        type=str.upper,
        choices=LOG_LEVELS,
        default=None,
        help="Logging level (default: INFO)",
    )


def _add_stability_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, default=None, help="Units per population")
    parser.add_argument(
        "--delta", type=str, default=None, help="Treatment effects, 'a,b' or 'start:stop:step'"
    )
    parser.add_argument(
        "--sigma-u", type=str, default=None, help="Within-unit noise grid, 'a,b' or 'start:stop:step'"
    )
    parser.add_argument(
        "--sigma-mu", type=str, default=None, help="Noise-mean grid, 'a,b' or 'start:stop:step'"
    )
    parser.add_argument(
        "--noise-scale",
        type=str,
        choices=NOISE_SCALES,
        default=None,
        help="Read sigma values as standard deviations (sd) or variances",
    )


def create_parser() -> argparse.ArgumentParser:
    """Create and configure argument parser."""
    parser = argparse.ArgumentParser(
        prog="dnscm",
        description=(
            "DNSCM - DNAi Structural Causal Models. Interventional versus forward-looking "
            "counterfactual treatment choice."
        ),
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  dnscm ewm-example
  dnscm densities --out results --svg
  dnscm sweep-kl --threads 8
  dnscm sweep-kl --profile sweep-kl-delta5
  dnscm variance-table --sigma-u 5 --sigma-mu 5 --repetitions 50
        """,
    )

    parser.add_argument("--version", action="version", version=f"dnscm {__version__}")

    subparsers = parser.add_subparsers(dest="command", help="Command to execute")
    subparsers.required = True

    ewm_parser = subparsers.add_parser(
        "ewm-example", help="Exact worked example: EWM versus counterfactual treatment choice"
    )
    _add_common_arguments(ewm_parser, "ewm-example")
    ewm_parser.add_argument("--budget", type=int, default=None, help="Units that may be treated")
    ewm_parser.add_argument(
        "--welfare", type=str, choices=WELFARE_NAMES, default=None, help="Welfare functional"
    )
    ewm_parser.add_argument(
        "--mode", type=str, choices=OPTIMIZER_MODES, default=None, help="Counterfactual optimizer"
    )

    densities_parser = subparsers.add_parser(
        "densities", help="Density curves of the true, interventional and counterfactual Y1"
    )
    _add_common_arguments(densities_parser, "densities")
    _add_stability_arguments(densities_parser)
    densities_parser.add_argument(
        "--bandwidth", type=_bandwidth, default=None, help="KDE bandwidth or 'auto'"
    )
    densities_parser.add_argument(
        "--grid-points", type=int, default=None, help="Evaluation points per curve"
    )

    sweep_parser = subparsers.add_parser(
        "sweep-kl", help="KL of both estimates against the truth over a parameter grid"
    )
    _add_common_arguments(sweep_parser, "sweep-kl")
    _add_stability_arguments(sweep_parser)
    sweep_parser.add_argument("--k", type=int, default=None, help="Neighbor rank (default: 10)")

    variance_parser = subparsers.add_parser(
        "variance-table", help="Variances of Y0 and the three Y1 distributions"
    )
    _add_common_arguments(variance_parser, "variance-table")
    _add_stability_arguments(variance_parser)
    variance_parser.add_argument(
        "--repetitions", type=int, default=None, help="Seeds to average (default: 50)"
    )

    return parser


def flag_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """
    Configuration values set by command-line flags.

    Raises:
        ValueError: If a grid flag cannot be parsed
    """
    overrides: Dict[str, Any] = {}
    for dest, key in FLAG_KEYS.items():
        value = getattr(args, dest, None)
        if value is not None:
            overrides[key] = value
    for dest, key in GRID_FLAGS.items():
        value = getattr(args, dest, None)
        if value is not None:
            overrides[key] = parse_float_grid(value)
    if args.svg:
        overrides["svg"] = True
    return overrides


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point for the DNSCM CLI.

    Args:
        argv: Arguments (default: ``sys.argv[1:]``)

    Returns:
        Exit code (0 for success, non-zero for errors)
    """
    parser = create_parser()
    argv = sys.argv[1:] if argv is None else argv

    # If no arguments are provided, show a concise banner and quick help.
    if not argv:
        print(f"dnscm {__version__} - DNAi Structural Causal Models")
        print("Copyright (c) 2025 DNAi Inc.")
        print()
        print(f"Usage: dnscm {{{','.join(COMMANDS)}}} [options]")
        print("Try 'dnscm --help' for full usage and examples.\n")
        parser.print_help()
        return 0

    args = parser.parse_args(argv)

    try:
        # Precedence: profile, then config file, then flags
        file_overrides: Dict[str, Any] = {}
        if args.config:
            try:
                file_overrides = load_config_file(args.config)
            except Exception as e:
                print(f"Error loading config file: {e}", file=sys.stderr)
                return 1

        try:
            config_overrides = merge_dicts(file_overrides, flag_overrides(args))
            config = create_config_from_profile(args.profile, config_overrides)
        except ValueError as e:
            print(f"Error: {e}", file=sys.stderr)
            return 1

        logging.basicConfig(
            level=config.log_level.upper(),
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
            stream=sys.stderr,
        )

        print(f"Running {args.command} (profile {args.profile}) -> {config.out_dir}...", file=sys.stderr)
        result = run_experiment(args.command, config)

        if result.report:
            print(result.report)
        print(f"Wrote {len(result.output_files)} file(s) to {config.out_dir}", file=sys.stderr)
        if result.manifest_path:
            print(f"Manifest: {result.manifest_path}", file=sys.stderr)

        if not result.passed:
            failed = ", ".join(check.name for check in result.checks if not check.passed)
            print(f"Error: checks failed: {failed}", file=sys.stderr)
            return 1
        return 0

    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        return 130
    except Exception as e:
        print(f"Error: {e}", file=sys.stderr)
        logging.getLogger(__name__).debug("Traceback", exc_info=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
