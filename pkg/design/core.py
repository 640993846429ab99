"""Design equations for spectral multiplexing of time bins.

Maps free hardware parameters (bin width, guard band, TBP, RF power,
modulator V_pi, drive waveform, ramp containment) onto every derived
quantity: bin spacing, pulse width, time-bin spacing, drive frequency,
pump rate, peak voltage, frequency shift and the number of bins.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Optional

from app.constants import (
    DEFAULT_CONTAINMENT,
    FWHM_PER_SIGMA,
    MIN_CONTAINMENT,
    PUMP_PERIODS_PER_BIN,
    RF_IMPEDANCE,
    TBP_FLAT_TOP,
    TIME_BIN_SIGMAS,
)
from app.errors import InvalidParameterError
from design.waveforms import ALL_SHAPES, Waveform, WaveformShape
from utils.logger import get_logger
from utils.math_utils import floor_to_odd

logger = get_logger(__name__)

# Containment the closed-form bin count is calibrated at; its drive multiples are 3 and 1
REFERENCE_CONTAINMENT = DEFAULT_CONTAINMENT


@dataclass(frozen=True)
class DesignParams:
    """Free hardware parameters of a multiplexed source.

    Attributes:
        bin_width: Frequency-bin FWHM, Hz
        guard_band: Filter transition spacing added between bins, Hz
        tbp: Time-bandwidth product of the bin's spectral mode, (0, 1]
        rf_power: Average RF drive power, W
        v_pi: Modulator pi-voltage, V
        waveform: Drive waveform (and sine phase)
        containment: Gaussian standard deviations the shear ramp must span
        drive_multiple: Force D = drive_multiple / time_bin_spacing instead of the
            largest multiple allowed by containment
    """

    bin_width: float = 12.5e9
    guard_band: float = 2e9
    tbp: float = TBP_FLAT_TOP
    rf_power: float = 10.0
    v_pi: float = 1.0
    waveform: Waveform = field(default_factory=Waveform)
    containment: float = DEFAULT_CONTAINMENT
    drive_multiple: Optional[int] = None

    def validate(self) -> "DesignParams":
        """Check every invariant, raising InvalidParameterError on the first violation."""
        checks = [
            ("bin_width", self.bin_width > 0 and math.isfinite(self.bin_width), "must be > 0"),
            ("guard_band", self.guard_band >= 0 and math.isfinite(self.guard_band), "must be >= 0"),
            ("tbp", 0 < self.tbp <= 1, "must lie in (0, 1]"),
            ("rf_power", self.rf_power >= 0 and math.isfinite(self.rf_power), "must be >= 0"),
            ("v_pi", self.v_pi > 0 and math.isfinite(self.v_pi), "must be > 0"),
            ("containment", self.containment >= MIN_CONTAINMENT, f"must be >= {MIN_CONTAINMENT}"),
        ]
        for name, ok, message in checks:
            if not ok:
                value = getattr(self, name)
                raise InvalidParameterError(name, f"{message}, got {value}")

        if self.drive_multiple is not None and self.drive_multiple < 1:
            raise InvalidParameterError(
                "drive_multiple", f"must be a positive integer, got {self.drive_multiple}"
            )
        return self


@dataclass(frozen=True)
class DesignPoint:
    """Quantities derived from DesignParams (SI units).

    Attributes:
        bin_spacing: Center-to-center frequency-bin spacing, Hz
        bin_pulse_width: Fourier-conjugate pulse FWHM of one bin, s
        time_bin_spacing: Early/late time-bin separation, s
        drive_freq: Shearing drive frequency, Hz
        pump_rate: Pump repetition rate, Hz
        peak_voltage: Drive peak voltage, V
        freq_shift: Largest shift the drive applies, Hz (signed for a sine phase past +-pi/2)
        bins_real: Real-valued bin count 2|shift|/spacing + 1
        bins_usable: Largest odd integer not above bins_real, at least 1
        waveform: Waveform the point was derived for
    """

    bin_spacing: float
    bin_pulse_width: float
    time_bin_spacing: float
    drive_freq: float
    pump_rate: float
    peak_voltage: float
    freq_shift: float
    bins_real: float
    bins_usable: int
    waveform: Waveform

    @property
    def drive_multiple(self) -> int:
        """D * time_bin_spacing, a positive integer."""
        return int(round(self.drive_freq * self.time_bin_spacing))

    @property
    def max_bin_index(self) -> int:
        """Largest |b| among the usable bins b = -m..m."""
        return (self.bins_usable - 1) // 2

    def as_dict(self) -> Dict[str, float]:
        """Numeric fields keyed by name."""
        return {
            "bin_spacing": self.bin_spacing,
            "bin_pulse_width": self.bin_pulse_width,
            "time_bin_spacing": self.time_bin_spacing,
            "drive_freq": self.drive_freq,
            "pump_rate": self.pump_rate,
            "peak_voltage": self.peak_voltage,
            "freq_shift": self.freq_shift,
            "bins_real": self.bins_real,
            "bins_usable": float(self.bins_usable),
        }


def bin_spacing(params: DesignParams) -> float:
    """Frequency-bin spacing, the bin width widened by 1/TBP plus the guard band."""
    return params.bin_width / params.tbp + params.guard_band


def time_bin_spacing(params: DesignParams) -> float:
    """Time-bin separation of 24 standard deviations of the bin pulse."""
    tau_b = params.tbp / params.bin_width
    return TIME_BIN_SIGMAS / FWHM_PER_SIGMA * tau_b


def containment_bound_multiple(params: DesignParams) -> float:
    """Upper bound on D * time_bin_spacing so the pulse spans `containment` sigmas of one ramp.

    Equals 3 for a sawtooth and 3/2 for triangle and sine at the default containment of 8.
    """
    return TIME_BIN_SIGMAS / (params.containment * params.waveform.ramps_per_period)


def drive_multiple(params: DesignParams) -> int:
    """Integer D * time_bin_spacing: the containment bound floored, or the forced override."""
    bound = containment_bound_multiple(params)

    if params.drive_multiple is not None:
        if params.drive_multiple > bound:
            logger.warning(
                f"Drive multiple {params.drive_multiple} exceeds the containment bound "
                f"{bound:.3f} for {params.waveform}; pulse tails will see the ramp turn over"
            )
        return params.drive_multiple

    # Small tolerance absorbs bounds like 2.9999999999999996
    multiple = math.floor(bound + 1e-9)
    if multiple < 1:
        raise InvalidParameterError(
            "containment",
            f"{params.containment} sigmas leave no integer drive multiple for "
            f"{params.waveform} (bound {bound:.3f} < 1)",
        )
    return multiple


def peak_voltage(params: DesignParams) -> float:
    """Peak drive voltage from average RF power into 50 ohms."""
    return math.sqrt(RF_IMPEDANCE * params.rf_power) / params.waveform.rms_factor


def derive_design(params: DesignParams) -> DesignPoint:
    """Derive every design quantity from the free parameters.

    Args:
        params: Hardware parameters

    Returns:
        Fully populated DesignPoint

    Raises:
        InvalidParameterError: If params violate an invariant
    """
    params.validate()

    spacing = bin_spacing(params)
    tau_b = params.tbp / params.bin_width
    dt_b = time_bin_spacing(params)
    drive_freq = drive_multiple(params) / dt_b
    pump_rate = 1.0 / (PUMP_PERIODS_PER_BIN * dt_b)

    voltage = peak_voltage(params)
    # Shift = slope / (2 V_pi), with slope = 2 * V * D * slope_factor
    shift = voltage * drive_freq * params.waveform.slope_factor / params.v_pi

    bins_real = 2 * abs(shift) / spacing + 1
    usable = floor_to_odd(bins_real)

    if params.rf_power == 0:
        logger.warning("RF power is zero: no shift, only the center bin is usable")

    point = DesignPoint(
        bin_spacing=spacing,
        bin_pulse_width=tau_b,
        time_bin_spacing=dt_b,
        drive_freq=drive_freq,
        pump_rate=pump_rate,
        peak_voltage=voltage,
        freq_shift=shift,
        bins_real=bins_real,
        bins_usable=usable,
        waveform=params.waveform,
    )
    logger.debug(
        f"Derived {params.waveform} design: D={drive_freq / 1e9:.4f} GHz, "
        f"shift={shift / 1e9:.4f} GHz, n={bins_real:.4f} ({usable} usable)"
    )
    return point


def closed_form_coefficient(shape: WaveformShape) -> float:
    """Coefficient of the closed-form bin count (before division by containment).

    Collapses sqrt(50)/rms * slope * multiple * (2.355/24) * 8, giving about
    28.44697 (sawtooth), 19.14679 (triangle) and 24.66150 (sine).
    """
    waveform = Waveform(shape)
    reference = DesignParams(waveform=waveform, containment=REFERENCE_CONTAINMENT)
    multiple = math.floor(containment_bound_multiple(reference) + 1e-9)
    return (
        math.sqrt(RF_IMPEDANCE)
        / waveform.rms_factor
        * waveform.slope_factor
        * multiple
        * FWHM_PER_SIGMA
        / TIME_BIN_SIGMAS
        * REFERENCE_CONTAINMENT
    )


def bins_closed_form(params: DesignParams) -> Dict[WaveformShape, float]:
    """Closed-form real-valued bin count for every waveform shape.

    n = 2 * (coeff / sigma) * bin_width * sqrt(P) / (V_pi * TBP * spacing) + 1.
    The sine entry carries |cos(phase)| when params describe a sine drive.
    Agrees with derive_design at the reference containment of 8 sigmas, where
    the drive multiples are exactly 24/sigma (sawtooth) and 8/sigma (others).
    Other containments floor the multiple differently; use derive_design there.

    Args:
        params: Hardware parameters; their waveform only supplies the sine phase

    Returns:
        Mapping of shape to real-valued bin count
    """
    params.validate()
    spacing = bin_spacing(params)
    sine_phase_factor = 1.0
    if params.waveform.shape is WaveformShape.SINE:
        sine_phase_factor = abs(math.cos(params.waveform.phase))

    scale = (
        2
        * params.bin_width
        * math.sqrt(params.rf_power)
        / (params.containment * params.v_pi * params.tbp * spacing)
    )

    bins = {}
    for shape in ALL_SHAPES:
        coeff = closed_form_coefficient(shape)
        if shape is WaveformShape.SINE:
            coeff *= sine_phase_factor
        bins[shape] = scale * coeff + 1
    return bins
