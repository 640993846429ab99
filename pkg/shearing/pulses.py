"""Sampled time-bin pulse pairs (baseband envelope, carrier removed)."""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from app.constants import (
    DEFAULT_TRACE_SAMPLES,
    FWHM_PER_SIGMA_EXACT,
    MIN_BIN_SEPARATION_FWHM,
    MIN_SAMPLES_PER_FWHM,
    TRACE_SPAN_BIN_SPACINGS,
)
from app.errors import InvalidParameterError

# Pulse support (in FWHM) that must lie inside the grid
GRID_MARGIN_FWHM = 3.0


@dataclass(frozen=True)
class PulseTrain:
    """Complex envelope of an early/late time-bin pair on a uniform grid.

    Attributes:
        sample_period: Grid step, s
        envelope: Complex analytic-signal samples
        bin_centers: (early, late) pulse centers, s
        bin_fwhm: Intensity FWHM of each pulse, s
        start_time: Time of the first sample, s
    """

    sample_period: float
    envelope: np.ndarray
    bin_centers: Tuple[float, float]
    bin_fwhm: float
    start_time: float = 0.0

    def __post_init__(self):
        envelope = np.asarray(self.envelope, dtype=complex)
        object.__setattr__(self, "envelope", envelope)
        self.validate()

    def validate(self) -> None:
        early, late = self.bin_centers
        if not self.bin_fwhm > 0:
            raise InvalidParameterError("bin_fwhm", f"must be > 0, got {self.bin_fwhm}")
        if late - early <= MIN_BIN_SEPARATION_FWHM * self.bin_fwhm:
            raise InvalidParameterError(
                "bin_centers",
                f"separation {late - early:.3e} s must exceed "
                f"{MIN_BIN_SEPARATION_FWHM:g} FWHM ({self.bin_fwhm:.3e} s)",
            )
        if self.sample_period > self.bin_fwhm / MIN_SAMPLES_PER_FWHM:
            raise InvalidParameterError(
                "sample_period",
                f"{self.sample_period:.3e} s exceeds FWHM/{MIN_SAMPLES_PER_FWHM}",
            )
        energy = self.energy
        if not (math.isfinite(energy) and energy > 0):
            raise InvalidParameterError("envelope", f"energy must be finite and > 0, got {energy}")

        margin = GRID_MARGIN_FWHM * self.bin_fwhm
        first = self.start_time
        last = first + (len(self.envelope) - 1) * self.sample_period
        if early - margin < first or late + margin > last:
            raise InvalidParameterError(
                "bin_centers", "pulse train extends beyond the sampled grid"
            )

    @property
    def times(self) -> np.ndarray:
        return self.start_time + np.arange(len(self.envelope)) * self.sample_period

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.envelope) ** 2

    @property
    def energy(self) -> float:
        return float(np.sum(np.abs(self.envelope) ** 2) * self.sample_period)

    @property
    def spacing(self) -> float:
        return self.bin_centers[1] - self.bin_centers[0]

    def with_envelope(self, envelope: np.ndarray) -> "PulseTrain":
        """Same grid and bins, new envelope."""
        return PulseTrain(
            sample_period=self.sample_period,
            envelope=envelope,
            bin_centers=self.bin_centers,
            bin_fwhm=self.bin_fwhm,
            start_time=self.start_time,
        )


def gaussian_pair(
    bin_fwhm: float,
    spacing: float,
    n_samples: int = DEFAULT_TRACE_SAMPLES,
    relative_phase: float = 0.0,
) -> PulseTrain:
    """Two equal Gaussian pulses, early at t = 0 and late at t = spacing.

    The grid spans about three bin spacings starting one spacing before the
    early pulse, and the spacing is an exact whole number of samples so both
    pulses sit on identical sample offsets.

    Args:
        bin_fwhm: Intensity FWHM of each pulse, s
        spacing: Time-bin spacing, s
        n_samples: Grid length
        relative_phase: Phase of the late pulse relative to the early one, rad

    Returns:
        Validated PulseTrain
    """
    if not bin_fwhm > 0:
        raise InvalidParameterError("bin_fwhm", f"must be > 0, got {bin_fwhm}")
    if not spacing > 0:
        raise InvalidParameterError("spacing", f"must be > 0, got {spacing}")

    samples_per_spacing = max(1, round(n_samples / TRACE_SPAN_BIN_SPACINGS))
    dt = spacing / samples_per_spacing
    index = np.arange(n_samples) - samples_per_spacing
    t = index * dt
    late_center = samples_per_spacing * dt

    sigma = bin_fwhm / FWHM_PER_SIGMA_EXACT
    early = np.exp(-(t**2) / (4 * sigma**2))
    late = np.exp(-((t - late_center) ** 2) / (4 * sigma**2)) * np.exp(1j * relative_phase)

    return PulseTrain(
        sample_period=dt,
        envelope=early + late,
        bin_centers=(0.0, late_center),
        bin_fwhm=bin_fwhm,
        start_time=float(t[0]),
    )
