"""Spectral-shearing simulation of time-bin pulse pairs."""

from .drive import DriveSignal, LinearRamp, synth_drive
from .pulses import PulseTrain, gaussian_pair
from .simulator import (
    PhaseSweep,
    ShearResult,
    SinusoidFit,
    differential_phase_experiment,
    export_trace,
    find_max_differential,
    scan_frame,
    scan_phases,
    shear,
    shift_vs_phase,
)

__all__ = [
    "DriveSignal",
    "LinearRamp",
    "synth_drive",
    "PulseTrain",
    "gaussian_pair",
    "PhaseSweep",
    "ShearResult",
    "SinusoidFit",
    "differential_phase_experiment",
    "export_trace",
    "find_max_differential",
    "scan_frame",
    "scan_phases",
    "shear",
    "shift_vs_phase",
]
