#!/usr/bin/env python3
"""Command-line entry point for the time-bin multiplexing design toolkit.

Exit codes: 0 success, 2 configuration or argument error, 3 computation error.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from app.config import Config
from app.errors import ConfigError, ZalmError
from app.presets import get_preset, PRESETS
from app.run_config import RunConfig, load_run_config
from cli.commands import cmd_design, cmd_jsa, cmd_rates, cmd_shear, cmd_sim, cmd_sweep
from cli.sweep import OUTPUTS, SweepSpec
from simulation.streams import MAX_SEED
from utils.io import write_text_atomic
from utils.logger import get_logger, setup_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPUTE = 3

COMMANDS = ("design", "sweep", "jsa", "rates", "sim", "shear")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key = value run configuration file")
    common.add_argument("--preset", help=f"parameter preset ({', '.join(PRESETS)})")
    common.add_argument("--out", type=Path, help="output file")
    common.add_argument("--seed", type=int, help="Monte Carlo seed (overrides sim.seed)")
    common.add_argument("--workers", type=int, help="worker threads")
    common.add_argument(
        "--dump-config", action="store_true", help="write the resolved configuration and exit"
    )
    common.add_argument("--log-level", help="console log level (default: ZALM_LOG_LEVEL)")

    parser = argparse.ArgumentParser(
        prog="zalm-design",
        description="Design, sweep and simulate spectrally multiplexed time-bin sources",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    subparsers.add_parser("design", parents=[common], help="derived design quantities")

    sweep = subparsers.add_parser("sweep", parents=[common], help="sweep a design or rate field")
    sweep.add_argument("--var", help="field to sweep, e.g. design.rf_power")
    sweep.add_argument("--start", help="first value, unit suffix allowed")
    sweep.add_argument("--stop", help="last value, unit suffix allowed")
    sweep.add_argument("--points", type=int, help="number of points (>= 2)")
    sweep.add_argument("--scale", choices=("linear", "log"), help="point spacing")
    sweep.add_argument("--outputs", help=f"comma-separated outputs ({', '.join(OUTPUTS)})")

    subparsers.add_parser("jsa", parents=[common], help="joint spectral amplitude and purity")
    subparsers.add_parser("rates", parents=[common], help="analytic heralded rates")
    subparsers.add_parser("sim", parents=[common], help="Monte Carlo against the analytic rate")
    subparsers.add_parser("shear", parents=[common], help="shear a time-bin pair over drive phase")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, preset, config file, then command-line overrides."""
    preset = get_preset(args.preset) if args.preset else None
    config = load_run_config(args.config, preset.assignments if preset else None)

    if args.seed is not None:
        if not 0 <= args.seed <= MAX_SEED:
            raise ConfigError(f"must be a 64-bit unsigned integer, got {args.seed}", "--seed")
        config = config.with_value("sim.seed", args.seed)
    if args.workers is not None:
        if args.workers < 1:
            raise ConfigError(f"must be >= 1, got {args.workers}", "--workers")
        config = config.with_value("sim.workers", args.workers)
    return config.check()


def resolve_sweep(args: argparse.Namespace):
    """SweepSpec and outputs from flags, falling back to the preset's sweep."""
    defaults = get_preset(args.preset).sweep if args.preset else None
    variable = args.var or (defaults.variable if defaults else None)
    if variable is None:
        raise ConfigError("sweep needs --var or a preset with a default sweep", "--var")

    use_defaults = defaults is not None and variable == defaults.variable

    def pick(flag, name, fallback=None):
        if flag is not None:
            return flag
        if use_defaults:
            return getattr(defaults, name)
        if fallback is not None:
            return fallback
        raise ConfigError("required when --var is given", f"--{name}")

    spec = SweepSpec.parse(
        variable,
        pick(args.start, "start"),
        pick(args.stop, "stop"),
        pick(args.points, "points"),
        pick(args.scale, "scale", "linear"),
    )
    if args.outputs:
        outputs = args.outputs.split(",")
    elif use_defaults:
        outputs = list(defaults.outputs)
    else:
        outputs = ["bins_real"]
    return spec, outputs


def run_command(args: argparse.Namespace) -> str:
    config = resolve_config(args)

    if args.dump_config:
        text = config.to_text()
        if args.out is None:
            return text
        write_text_atomic(args.out, text)
        return f"wrote configuration to {args.out}\n"

    workers = args.workers or Config.WORKERS
    if args.command == "design":
        return cmd_design(config, args.out)
    if args.command == "sweep":
        spec, outputs = resolve_sweep(args)
        return cmd_sweep(config, spec, outputs, args.out, workers)
    if args.command == "jsa":
        return cmd_jsa(config, args.out)
    if args.command == "rates":
        return cmd_rates(config, args.out)
    if args.command == "sim":
        return cmd_sim(config, args.out)
    return cmd_shear(config, args.out, workers)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0) and EXIT_CONFIG

    try:
        Config.validate()
    except ValueError as e:
        setup_logger()
        logger.error(str(e))
        return EXIT_CONFIG

    try:
        setup_logger(level=args.log_level or Config.LOG_LEVEL, log_dir=Config.LOG_DIR or None)
    except OSError as e:
        logger.error(f"Cannot open log directory {Config.LOG_DIR}: {e}")
        return EXIT_CONFIG

    try:
        summary = run_command(args)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except OSError as e:
        logger.error(f"Cannot access {e.filename or 'file'}: {e.strerror or e}")
        return EXIT_CONFIG
    except ZalmError as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_COMPUTE

    sys.stdout.write(summary)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
