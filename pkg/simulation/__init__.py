"""Monte Carlo oracle for the analytic rate model"""
from simulation.montecarlo import (
    ConvergenceReport,
    SimConfig,
    SimResult,
    convergence_check,
    run,
    write_result,
)
from simulation.streams import split_pulses, worker_generators

__all__ = [
    "SimConfig",
    "SimResult",
    "ConvergenceReport",
    "run",
    "convergence_check",
    "write_result",
    "split_pulses",
    "worker_generators",
]
