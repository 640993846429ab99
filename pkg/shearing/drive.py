"""RF drive synthesis for the shearing phase modulator.

Two drive families share a `voltage(t)` method:
- DriveSignal: periodic sawtooth/triangle/sine, optionally truncated to its
  first Fourier terms to mimic a generator short on analog bandwidth
- LinearRamp: V(t) = slope * t + offset, the locally linear serrodyne limit
"""

import math
from dataclasses import dataclass
from typing import Optional, Protocol, Union

import numpy as np
from scipy import signal

from app.errors import InvalidParameterError
from design.waveforms import Waveform, WaveformShape

ArrayLike = Union[float, np.ndarray]


class Drive(Protocol):
    """Anything that maps time (s) to modulator voltage (V)."""

    def voltage(self, t: np.ndarray) -> np.ndarray:
        ...


@dataclass(frozen=True)
class DriveSignal:
    """Periodic shearing drive.

    Attributes:
        waveform: Shape (its sine phase adds to phase_offset)
        frequency: Drive frequency, Hz
        peak_voltage: Peak voltage of the untruncated waveform, V
        phase_offset: Drive phase relative to t = 0, rad
        harmonics_kept: Number of nonzero Fourier terms kept; None keeps the exact shape
    """

    waveform: Waveform
    frequency: float
    peak_voltage: float
    phase_offset: float = 0.0
    harmonics_kept: Optional[int] = None

    def __post_init__(self):
        if not (self.frequency > 0 and math.isfinite(self.frequency)):
            raise InvalidParameterError("drive.frequency", f"must be > 0, got {self.frequency}")
        if not (self.peak_voltage >= 0 and math.isfinite(self.peak_voltage)):
            raise InvalidParameterError(
                "drive.peak_voltage", f"must be >= 0, got {self.peak_voltage}"
            )
        if self.harmonics_kept is not None and self.harmonics_kept < 1:
            raise InvalidParameterError(
                "drive.harmonics_kept", f"must be >= 1, got {self.harmonics_kept}"
            )

    @property
    def period(self) -> float:
        return 1.0 / self.frequency

    def with_phase(self, phase_offset: float) -> "DriveSignal":
        """Copy of this drive at another phase offset."""
        return DriveSignal(
            waveform=self.waveform,
            frequency=self.frequency,
            peak_voltage=self.peak_voltage,
            phase_offset=phase_offset,
            harmonics_kept=self.harmonics_kept,
        )

    def voltage(self, t: np.ndarray) -> np.ndarray:
        """Drive voltage at times t (s)."""
        x = 2 * np.pi * self.frequency * np.asarray(t, dtype=float)
        x = x + self.waveform.phase + self.phase_offset
        shape = self.waveform.shape

        if shape is WaveformShape.SINE:
            unit = np.sin(x)
        elif self.harmonics_kept is None:
            unit = _exact_shape(shape, x)
        else:
            unit = _fourier_shape(shape, x, self.harmonics_kept)

        return self.peak_voltage * unit


@dataclass(frozen=True)
class LinearRamp:
    """V(t) = slope * t + offset.

    Attributes:
        slope: Ramp slope, V/s
        offset: Constant voltage offset, V
    """

    slope: float
    offset: float = 0.0

    def voltage(self, t: np.ndarray) -> np.ndarray:
        return self.slope * np.asarray(t, dtype=float) + self.offset


def _exact_shape(shape: WaveformShape, x: np.ndarray) -> np.ndarray:
    """Unit-amplitude shape crossing zero upward at x = 0."""
    if shape is WaveformShape.TRIANGLE:
        # width=0.5 starts at -1 and peaks at pi; shift so x=0 is the upward zero crossing
        return signal.sawtooth(x + np.pi / 2, width=0.5)
    # width=1 ramps -1 -> 1 over one period
    return signal.sawtooth(x + np.pi, width=1)


def _fourier_shape(shape: WaveformShape, x: np.ndarray, terms: int) -> np.ndarray:
    """First `terms` nonzero Fourier terms of the unit-amplitude shape."""
    total = np.zeros_like(x)
    if shape is WaveformShape.TRIANGLE:
        for k in range(terms):
            order = 2 * k + 1
            total += (-1) ** k * np.sin(order * x) / order**2
        return 8 / np.pi**2 * total

    for k in range(1, terms + 1):
        total += (-1) ** (k + 1) * np.sin(k * x) / k
    return 2 / np.pi * total


def synth_drive(drive: Drive, t: ArrayLike) -> ArrayLike:
    """Evaluate a drive at time(s) t.

    Args:
        drive: DriveSignal or LinearRamp
        t: Scalar or array of times, s

    Returns:
        Voltage with the same shape as t
    """
    values = drive.voltage(np.asarray(t, dtype=float))
    if np.ndim(t) == 0:
        return float(values)
    return values
