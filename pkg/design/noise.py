"""Voltage-noise bound on spectral shearing.

A ramp V(t) = A*t + dV on a modulator with pi-voltage V_pi applies the
phase pi*A*t/V_pi + pi*dV/V_pi: the slope gives the frequency shift
A/(2 V_pi), the offset gives a constant phase error pi*dV/V_pi.
"""

import math
from dataclasses import dataclass

from app.errors import InvalidParameterError


@dataclass(frozen=True)
class NoiseSpec:
    """Allowed phase error and the matching ramp offset.

    Attributes:
        allowed_phase: Tolerated phase error, rad
        v_pi: Modulator pi-voltage, V
        offset: Largest constant voltage offset, V
        slope: Ramp slope the offset rides on, V/s
    """

    allowed_phase: float
    v_pi: float
    offset: float
    slope: float = 0.0

    @property
    def frequency_shift(self) -> float:
        """Shift produced by the ramp slope, Hz."""
        return self.slope / (2 * self.v_pi)


def _check_v_pi(v_pi: float) -> None:
    if not (v_pi > 0 and math.isfinite(v_pi)):
        raise InvalidParameterError("v_pi", f"must be > 0, got {v_pi}")


def max_voltage_offset(allowed_phase: float, v_pi: float) -> float:
    """Largest voltage offset keeping the phase error within allowed_phase.

    Args:
        allowed_phase: Tolerated phase error, rad (>= 0)
        v_pi: Modulator pi-voltage, V

    Returns:
        Offset dV = allowed_phase * V_pi / pi, V
    """
    if not (allowed_phase >= 0 and math.isfinite(allowed_phase)):
        raise InvalidParameterError("allowed_phase", f"must be >= 0, got {allowed_phase}")
    _check_v_pi(v_pi)
    return allowed_phase * v_pi / math.pi


def phase_error_from_offset(offset: float, v_pi: float) -> float:
    """Phase error pi * dV / V_pi picked up from a constant voltage offset."""
    if not math.isfinite(offset):
        raise InvalidParameterError("offset", f"must be finite, got {offset}")
    _check_v_pi(v_pi)
    return math.pi * offset / v_pi


def noise_spec(allowed_phase: float, v_pi: float, slope: float = 0.0) -> NoiseSpec:
    """Bundle the offset bound for allowed_phase with the ramp it applies to."""
    return NoiseSpec(
        allowed_phase=allowed_phase,
        v_pi=v_pi,
        offset=max_voltage_offset(allowed_phase, v_pi),
        slope=slope,
    )
