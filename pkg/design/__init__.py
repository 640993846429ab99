"""Closed-form design equations for spectral multiplexing of time bins."""

from .waveforms import Waveform, WaveformShape
from .core import DesignParams, DesignPoint, derive_design, bins_closed_form
from .noise import NoiseSpec, max_voltage_offset, phase_error_from_offset
from .feedforward import BinShift, center_first_bins, shift_schedule

__all__ = [
    "Waveform",
    "WaveformShape",
    "DesignParams",
    "DesignPoint",
    "derive_design",
    "bins_closed_form",
    "NoiseSpec",
    "max_voltage_offset",
    "phase_error_from_offset",
    "BinShift",
    "center_first_bins",
    "shift_schedule",
]
