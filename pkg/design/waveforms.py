"""Spectral-shearing drive waveform family.

Each shape carries the three numbers the design equations need:
- the RMS factor converting average RF power to peak voltage
- the local slope of a unit-amplitude, unit-frequency wave at the pulse
- whether the pulse must fit in a full period or only half of it
"""

import math
from dataclasses import dataclass
from enum import Enum

from app.errors import InvalidParameterError


class WaveformShape(str, Enum):
    """Drive waveform shapes."""

    SAWTOOTH = "sawtooth"
    TRIANGLE = "triangle"
    SINE = "sine"

    @classmethod
    def parse(cls, text: str) -> "WaveformShape":
        """Parse a shape name, case-insensitively."""
        try:
            return cls(text.strip().lower())
        except ValueError:
            names = ", ".join(s.value for s in cls)
            raise InvalidParameterError("waveform", f"unknown shape {text!r} (expected {names})")


# V_rms / V_peak; sawtooth and triangle values are the numerically integrated factors
RMS_FACTOR = {
    WaveformShape.SAWTOOTH: 0.585382,
    WaveformShape.TRIANGLE: 0.579814,
    WaveformShape.SINE: 1 / math.sqrt(2),
}

# Slope at the pulse divided by (2 * V_peak * D); the sine value applies at a zero crossing
SLOPE_FACTOR = {
    WaveformShape.SAWTOOTH: 1.0,
    WaveformShape.TRIANGLE: 2.0,
    WaveformShape.SINE: math.pi,
}

# Number of same-sign ramps per period the pulse must fit into
RAMPS_PER_PERIOD = {
    WaveformShape.SAWTOOTH: 1,
    WaveformShape.TRIANGLE: 2,
    WaveformShape.SINE: 2,
}


@dataclass(frozen=True)
class Waveform:
    """Drive shape plus, for a sine, its phase relative to the sheared pulse.

    Attributes:
        shape: Waveform shape
        phase: Sine phase in radians, in [-pi, pi); always 0 for sawtooth and triangle
    """

    shape: WaveformShape = WaveformShape.SINE
    phase: float = 0.0

    def __post_init__(self):
        if not isinstance(self.shape, WaveformShape):
            object.__setattr__(self, "shape", WaveformShape.parse(str(self.shape)))
        if not -math.pi <= self.phase < math.pi:
            raise InvalidParameterError("waveform.phase", f"{self.phase} rad outside [-pi, pi)")
        if self.shape is not WaveformShape.SINE and self.phase != 0.0:
            raise InvalidParameterError(
                "waveform.phase", f"{self.shape.value} carries no phase, got {self.phase}"
            )

    @property
    def rms_factor(self) -> float:
        return RMS_FACTOR[self.shape]

    @property
    def ramps_per_period(self) -> int:
        return RAMPS_PER_PERIOD[self.shape]

    @property
    def slope_factor(self) -> float:
        """Shift per unit (V_peak * D / V_pi), including the sine phase."""
        factor = SLOPE_FACTOR[self.shape]
        if self.shape is WaveformShape.SINE:
            factor *= math.cos(self.phase)
        return factor

    def __str__(self) -> str:
        if self.shape is WaveformShape.SINE and self.phase:
            return f"{self.shape.value}({self.phase:+.4f} rad)"
        return self.shape.value


SAWTOOTH = Waveform(WaveformShape.SAWTOOTH)
TRIANGLE = Waveform(WaveformShape.TRIANGLE)
SINE = Waveform(WaveformShape.SINE)
ALL_SHAPES = (WaveformShape.SAWTOOTH, WaveformShape.SINE, WaveformShape.TRIANGLE)
