# -*- coding: utf-8 -*-
"""
Command line interface.

Examples
--------
Run the bundled one-qubit scenarios::

    nvholo run bundled:paper_fig2 --out results

Sweep the two-qubit coupling::

    nvholo sweep bundled:paper_fig4 lambda "2*pi*10:2*pi*100:10" --out sweep
"""
import argparse
import logging
import sys
from typing import List, Optional

import numpy as np

from . import __version__
from .dynamics import NumericalInvariantError
from .runner import EXIT_ABORTED, EXIT_INVALID, calibrate, run, sweep, verify
from .scenarios import ConfigError, bundled_configs, load_config
from .utils.expressions import evaluate_real
from .utils.logging import setup_logger

logger = logging.getLogger(__name__)


def parse_grid(text: str) -> List[float]:
    """Parse a sweep grid.

    Either a comma-separated list of values (``0, pi/4, pi/2``) or
    ``start:stop:num`` for ``num`` evenly spaced values including both ends.
    """
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"Expected start:stop:num, got '{text}'")
        start, stop = evaluate_real(parts[0]), evaluate_real(parts[1])
        num = evaluate_real(parts[2])
        if num != int(num) or num < 1:
            raise ValueError("Number of points must be a positive integer")
        return np.linspace(start, stop, int(num)).tolist()
    values = [evaluate_real(v) for v in text.split(",") if v.strip()]
    if not values:
        raise ValueError("Empty grid")
    return values


def _step(text: str) -> float:
    value = evaluate_real(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"dt must be positive, got {text}")
    return value


class _ArgumentParser(argparse.ArgumentParser):
    """Argument parser that reports usage errors with exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="nvholo",
        description="Simulate holonomic gates on NV-center spins.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    common = _ArgumentParser(add_help=False)
    common.add_argument(
        "--out", default="nvholo_output", help="Output directory."
    )
    common.add_argument(
        "--dt",
        type=_step,
        default=None,
        help="Step size in us, overrides the scenario files.",
    )
    common.add_argument(
        "--quiet",
        action="store_true",
        help="Only log warnings and hide progress bars.",
    )
    common.add_argument(
        "--log-level", default="INFO", help="Logging level."
    )
    common.add_argument(
        "--n-pool",
        type=int,
        default=None,
        help="Number of processes used to run scenarios in parallel.",
    )

    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser(
        "run", parents=[common], help="Run every scenario in a file."
    )
    run_parser.add_argument(
        "config", help="Scenario file or bundled:<name>."
    )
    run_parser.add_argument(
        "--save-states",
        action="store_true",
        help="Write the recorded density matrices to HDF5.",
    )
    run_parser.add_argument(
        "--zero-rates",
        action="store_true",
        help="Set every collapse rate to zero.",
    )

    sweep_parser = sub.add_parser(
        "sweep", parents=[common], help="Sweep one parameter of a scenario."
    )
    sweep_parser.add_argument("config", help="Scenario file or bundled:<name>.")
    sweep_parser.add_argument("parameter", help="Parameter to sweep.")
    sweep_parser.add_argument(
        "grid", help="Values as 'a, b, c' or 'start:stop:num'."
    )
    sweep_parser.add_argument(
        "--scenario",
        default=None,
        help="Section to sweep. Defaults to the first one.",
    )

    verify_parser = sub.add_parser(
        "verify", parents=[common], help="Check the holonomy conditions."
    )
    verify_parser.add_argument(
        "config", help="Scenario file or bundled:<name>."
    )
    verify_parser.add_argument(
        "--tolerance", type=float, default=1e-6, help="Pass threshold."
    )

    calibrate_parser = sub.add_parser(
        "calibrate",
        parents=[common],
        help="Calibrate collapse operators and the two-qubit coupling.",
    )
    calibrate_parser.add_argument(
        "--coupling",
        action="store_true",
        help="Also calibrate the two-qubit coupling.",
    )
    calibrate_parser.add_argument(
        "--skip-channels",
        action="store_true",
        help="Skip the collapse-operator calibration.",
    )

    sub.add_parser("list-bundled", help="List the bundled scenario files.")
    return parser


def _select(configs, name):
    if not configs:
        raise ConfigError("Scenario file has no scenarios")
    if name is None:
        return configs[0]
    for config in configs:
        if config.name == name:
            return config
    raise ConfigError(
        f"Unknown scenario '{name}'. Available: {[c.name for c in configs]}"
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point of the ``nvholo`` command.

    Returns
    -------
    int
        0 on success, 1 for invalid input and 2 when a simulation was aborted
        by a numerical invariant.
    """
    args = build_parser().parse_args(argv)
    if args.command == "list-bundled":
        for name in bundled_configs():
            print(f"bundled:{name}")
        return 0

    log_level = "WARNING" if args.quiet else args.log_level
    try:
        setup_logger(
            output=args.out,
            label="nvholo",
            log_level=log_level,
            banner=not args.quiet,
        )
    except ValueError as e:
        print(f"nvholo: error: {e}", file=sys.stderr)
        return EXIT_INVALID
    progress = not args.quiet

    try:
        if args.command == "calibrate":
            return calibrate(
                args.out,
                channels=not args.skip_channels,
                coupling=args.coupling,
                dt=args.dt,
                n_pool=args.n_pool,
                progress=progress,
            )
        configs = load_config(args.config)
        if args.command == "run":
            return run(
                configs,
                args.out,
                dt=args.dt,
                n_pool=args.n_pool,
                save_states=args.save_states,
                zero_rates=args.zero_rates,
                progress=progress,
            )
        if args.command == "sweep":
            return sweep(
                _select(configs, args.scenario),
                args.parameter,
                parse_grid(args.grid),
                args.out,
                dt=args.dt,
                n_pool=args.n_pool,
                progress=progress,
            )
        return verify(
            configs, out_dir=args.out, dt=args.dt, tolerance=args.tolerance
        )
    except NumericalInvariantError as e:
        logger.error(str(e))
        return EXIT_ABORTED
    except ValueError as e:
        logger.error(str(e))
        print(f"nvholo: error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
