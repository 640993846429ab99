"""Time-domain spectral-shearing simulator for time-bin pulse pairs.

The modulator multiplies the envelope by exp(i*pi*V(t)/V_pi). Each time bin
is then summarized by a straight-line fit of the applied phase over the
bin, weighted by pulse intensity: the slope is the bin's frequency shift and
the value at the bin center is its phase. The spectral centroid of the
whole train comes from the DFT power spectrum.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Sequence, Tuple, TypeVar, Union

import numpy as np
import pandas as pd
from scipy import linalg, optimize

from app.constants import MIN_BIN_WEIGHT_FRACTION, MIN_PHASE_SWEEP_POINTS
from app.errors import FitDegenerateError, InvalidParameterError
from shearing.drive import Drive, DriveSignal
from shearing.pulses import PulseTrain
from utils.io import write_csv_atomic
from utils.logger import get_logger
from utils.math_utils import r_squared_deficit, wrap_phase

logger = get_logger(__name__)

T = TypeVar("T")


@dataclass(frozen=True)
class ShearResult:
    """Per-bin shift and phase after shearing.

    Attributes:
        shift_early: Frequency shift of the early bin, Hz
        shift_late: Frequency shift of the late bin, Hz
        phase_early: Applied phase at the early bin center, rad in [-pi, pi)
        phase_late: Applied phase at the late bin center, rad in [-pi, pi)
        differential_phase: wrap(phase_late - phase_early), rad
        centroid_shift: Spectral centroid of the whole sheared train, Hz
    """

    shift_early: float
    shift_late: float
    phase_early: float
    phase_late: float
    differential_phase: float
    centroid_shift: float


@dataclass(frozen=True)
class SinusoidFit:
    """y = amplitude * cos(x - phase) + offset, with its 1 - R^2."""

    amplitude: float
    phase: float
    offset: float
    r2_deficit: float

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return self.amplitude * np.cos(np.asarray(x) - self.phase) + self.offset


@dataclass(frozen=True)
class PhaseSweep:
    """Centroid shift versus drive phase offset."""

    phase_offsets: np.ndarray
    shifts: np.ndarray
    fit: SinusoidFit

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "phase_offset [rad]": self.phase_offsets,
                "centroid_shift [Hz]": self.shifts,
                "sinusoid_fit [Hz]": self.fit.evaluate(self.phase_offsets),
            }
        )


def _check_v_pi(v_pi: float) -> None:
    if not (v_pi > 0 and math.isfinite(v_pi)):
        raise InvalidParameterError("v_pi", f"must be > 0, got {v_pi}")


def applied_phase(train: PulseTrain, drive: Drive, v_pi: float) -> np.ndarray:
    """Phase pi * V(t) / V_pi on the train's time grid (unwrapped)."""
    _check_v_pi(v_pi)
    return np.pi * drive.voltage(train.times) / v_pi


def modulate(train: PulseTrain, phase: np.ndarray) -> PulseTrain:
    """The train after the modulator applies `phase` (rad) sample by sample."""
    return train.with_envelope(train.envelope * np.exp(1j * phase))


def spectral_centroid(envelope: np.ndarray, sample_period: float) -> float:
    """First moment of the DFT power spectrum, Hz."""
    power = np.abs(np.fft.fft(envelope)) ** 2
    freqs = np.fft.fftfreq(len(envelope), d=sample_period)
    return float(np.sum(freqs * power) / np.sum(power))


def _fit_bin(
    times: np.ndarray,
    intensity: np.ndarray,
    phase: np.ndarray,
    center: float,
    half_window: float,
    total_weight: float,
) -> Tuple[float, float]:
    """Intensity-weighted line through the phase of one bin.

    Returns:
        Tuple of (shift in Hz, phase at the bin center in rad, unwrapped)
    """
    mask = np.abs(times - center) <= half_window
    weights = intensity[mask]
    if weights.sum() < MIN_BIN_WEIGHT_FRACTION * total_weight:
        raise FitDegenerateError(
            f"Bin at {center:.4e} s holds {weights.sum() / total_weight:.2e} of the intensity"
        )

    x = times[mask] - center
    y = phase[mask]
    x_mean = np.average(x, weights=weights)
    y_mean = np.average(y, weights=weights)
    dx = x - x_mean
    slope = np.sum(weights * dx * (y - y_mean)) / np.sum(weights * dx**2)
    intercept = y_mean - slope * x_mean

    return float(slope / (2 * np.pi)), float(intercept)


def shear(train: PulseTrain, drive: Drive, v_pi: float) -> ShearResult:
    """Apply the drive to the train and extract per-bin shift and phase.

    Args:
        train: Time-bin pulse pair
        drive: DriveSignal or LinearRamp
        v_pi: Modulator pi-voltage, V

    Returns:
        ShearResult

    Raises:
        InvalidParameterError: If v_pi is not positive
        FitDegenerateError: If a bin carries < 1e-12 of the total intensity
    """
    phase = applied_phase(train, drive, v_pi)
    times = train.times
    intensity = train.intensity
    total = float(intensity.sum())
    half_window = train.spacing / 2

    early, late = train.bin_centers
    shift_early, raw_early = _fit_bin(times, intensity, phase, early, half_window, total)
    shift_late, raw_late = _fit_bin(times, intensity, phase, late, half_window, total)

    sheared = modulate(train, phase).envelope
    centroid = spectral_centroid(sheared, train.sample_period) - spectral_centroid(
        train.envelope, train.sample_period
    )

    return ShearResult(
        shift_early=shift_early,
        shift_late=shift_late,
        phase_early=float(wrap_phase(raw_early)),
        phase_late=float(wrap_phase(raw_late)),
        differential_phase=float(wrap_phase(raw_late - raw_early)),
        centroid_shift=centroid,
    )


def _ordered_map(func: Callable[[float], T], items: Sequence[float], workers: int) -> List[T]:
    """Map func over items, optionally on threads, preserving item order."""
    if workers <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))


def fit_sinusoid(x: np.ndarray, y: np.ndarray) -> SinusoidFit:
    """Least-squares fit of y = a*cos(x) + b*sin(x) + c."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    design = np.column_stack([np.cos(x), np.sin(x), np.ones_like(x)])
    (a, b, c), *_ = linalg.lstsq(design, y)
    fitted = design @ np.array([a, b, c])
    return SinusoidFit(
        amplitude=float(math.hypot(a, b)),
        phase=float(math.atan2(b, a)),
        offset=float(c),
        r2_deficit=r_squared_deficit(y, fitted),
    )


def _phase_grid(n_points: int) -> np.ndarray:
    return 2 * np.pi * np.arange(n_points) / n_points


def scan_phases(
    train: PulseTrain,
    drive: DriveSignal,
    v_pi: float,
    n_points: int = 36,
    workers: int = 1,
) -> Tuple[np.ndarray, List[ShearResult]]:
    """Shear at n_points drive phases spread uniformly over [0, 2*pi).

    Returns:
        Tuple of (phase offsets, ShearResult per phase in the same order)
    """
    if n_points < MIN_PHASE_SWEEP_POINTS:
        raise InvalidParameterError(
            "n_points", f"must be >= {MIN_PHASE_SWEEP_POINTS}, got {n_points}"
        )
    phases = _phase_grid(n_points)

    def shear_at(phase_offset: float) -> ShearResult:
        return shear(train, drive.with_phase(phase_offset), v_pi)

    return phases, _ordered_map(shear_at, phases, workers)


def scan_frame(phases: np.ndarray, results: Sequence[ShearResult]) -> pd.DataFrame:
    """One row per drive phase with both bins' shift and phase."""
    return pd.DataFrame(
        {
            "phase_offset [rad]": phases,
            "shift_early [Hz]": [r.shift_early for r in results],
            "shift_late [Hz]": [r.shift_late for r in results],
            "phase_early [rad]": [r.phase_early for r in results],
            "phase_late [rad]": [r.phase_late for r in results],
            "differential_phase [rad]": [r.differential_phase for r in results],
            "centroid_shift [Hz]": [r.centroid_shift for r in results],
        }
    )


def shift_vs_phase(
    train: PulseTrain,
    drive: DriveSignal,
    v_pi: float,
    n_points: int = 36,
    workers: int = 1,
) -> PhaseSweep:
    """Centroid shift as the drive phase sweeps uniformly over [0, 2*pi).

    Args:
        train: Time-bin pulse pair
        drive: Periodic drive; its phase_offset is replaced by the sweep
        v_pi: Modulator pi-voltage, V
        n_points: Number of phases, at least 8
        workers: Threads evaluating phases concurrently

    Returns:
        PhaseSweep with shifts ordered by phase and a sinusoid fit
    """
    phases, results = scan_phases(train, drive, v_pi, n_points, workers)
    shifts = np.array([r.centroid_shift for r in results])
    fit = fit_sinusoid(phases, shifts)
    logger.info(
        f"Shift sweep ({drive.waveform}, {drive.frequency / 1e6:.3f} MHz): "
        f"amplitude {fit.amplitude / 1e9:.4f} GHz, 1-R^2 {fit.r2_deficit:.2e}"
    )
    return PhaseSweep(phase_offsets=phases, shifts=shifts, fit=fit)


def differential_phase_experiment(train: PulseTrain, drive: Drive, v_pi: float) -> float:
    """Phase the shearing adds between the late and early time bin, rad."""
    return shear(train, drive, v_pi).differential_phase


def find_max_differential(
    train: PulseTrain,
    drive: DriveSignal,
    v_pi: float,
    n_points: int = 64,
    workers: int = 1,
) -> Tuple[float, float]:
    """Drive phase maximizing |differential phase|.

    A uniform sweep brackets the maximum, then a bounded scalar search refines it.

    Returns:
        Tuple of (phase_offset in [0, 2*pi), differential phase at that offset)
    """
    if n_points < MIN_PHASE_SWEEP_POINTS:
        raise InvalidParameterError(
            "n_points", f"must be >= {MIN_PHASE_SWEEP_POINTS}, got {n_points}"
        )
    phases = _phase_grid(n_points)

    def differential_at(phase_offset: float) -> float:
        return differential_phase_experiment(train, drive.with_phase(phase_offset), v_pi)

    values = np.array(_ordered_map(differential_at, phases, workers))
    best = int(np.argmax(np.abs(values)))
    step = 2 * np.pi / n_points

    result = optimize.minimize_scalar(
        lambda p: -abs(differential_at(p)),
        bounds=(phases[best] - step, phases[best] + step),
        method="bounded",
    )
    if -result.fun > abs(values[best]):
        phase_offset = float(result.x) % (2 * np.pi)
        value = differential_at(phase_offset)
    else:
        phase_offset, value = float(phases[best]), float(values[best])

    logger.info(
        f"Maximum differential phase {value:+.4f} rad at drive phase {phase_offset:.4f} rad"
    )
    return phase_offset, value


def trace_frame(train: PulseTrain, drive: Drive) -> pd.DataFrame:
    """(t, V(t), |envelope|^2) table for plotting drive/pulse overlays."""
    times = train.times
    return pd.DataFrame(
        {
            "time [s]": times,
            "voltage [V]": drive.voltage(times),
            "intensity [a.u.]": train.intensity,
        }
    )


def export_trace(train: PulseTrain, drive: Drive, path: Union[str, Path]) -> Path:
    """Write trace_frame as comma-separated text."""
    return write_csv_atomic(path, trace_frame(train, drive))
