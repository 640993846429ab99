"""Command-line subcommands"""
from cli.commands import cmd_design, cmd_jsa, cmd_rates, cmd_shear, cmd_sim, cmd_sweep
from cli.sweep import SweepSpec, run_sweep

__all__ = [
    "cmd_design",
    "cmd_sweep",
    "cmd_jsa",
    "cmd_rates",
    "cmd_sim",
    "cmd_shear",
    "SweepSpec",
    "run_sweep",
]
