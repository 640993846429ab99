"""Feedforward shift schedule.

A herald in bin b calls for a shift of -b * bin_spacing on the partner photon.
The controller sets the magnitude with an RF attenuator (fraction of the full
drive amplitude) and the sign with a 180 degree phase flip of the drive.
"""

import math
from dataclasses import dataclass
from typing import List

from design.core import DesignPoint
from utils.logger import get_logger

logger = get_logger(__name__)

# Relative slack when comparing a bin offset to the available shift
FEASIBILITY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class BinShift:
    """Feedforward setting for one frequency bin.

    Attributes:
        index: Bin index b (0 is the center bin)
        chain_depth: Circulators passed before reaching the bin's filter
        required_shift: Shift bringing the bin onto the center, Hz
        attenuation: Drive amplitude fraction in [0, 1]
        phase_flip: True when the drive must be inverted to reverse the slope
        feasible: True when the full drive reaches the required shift
    """

    index: int
    chain_depth: int
    required_shift: float
    attenuation: float
    phase_flip: bool
    feasible: bool


def center_first_bins(bins_usable: int) -> List[int]:
    """Bin indices in center-first filter-chain order: 0, 1, -1, 2, -2, ..."""
    order = [0]
    for k in range(1, (bins_usable - 1) // 2 + 1):
        order.extend([k, -k])
    return order


def chain_depth(index: int) -> int:
    """Chain depth of a bin under center-first ordering."""
    return abs(index)


def is_feasible(index: int, design: DesignPoint) -> bool:
    """Whether the full drive can shift bin `index` onto the center."""
    needed = abs(index) * design.bin_spacing
    return needed <= abs(design.freq_shift) * (1 + FEASIBILITY_TOLERANCE)


def shift_setting(index: int, design: DesignPoint) -> BinShift:
    """Feedforward setting for a single bin."""
    required = -index * design.bin_spacing
    available = abs(design.freq_shift)
    if index == 0:
        attenuation = 0.0
    elif available > 0:
        attenuation = min(1.0, abs(required) / available)
    else:
        attenuation = 1.0

    # Flip when the required sign differs from the drive's native shift sign
    native_sign = 1.0 if design.freq_shift >= 0 else -1.0
    phase_flip = index != 0 and math.copysign(1.0, required) != native_sign

    return BinShift(
        index=index,
        chain_depth=chain_depth(index),
        required_shift=required,
        attenuation=attenuation,
        phase_flip=phase_flip,
        feasible=is_feasible(index, design),
    )


def shift_schedule(design: DesignPoint) -> List[BinShift]:
    """Feedforward settings for every usable bin, in center-first order."""
    schedule = [shift_setting(b, design) for b in center_first_bins(design.bins_usable)]
    infeasible = [s.index for s in schedule if not s.feasible]
    if infeasible:
        logger.warning(f"Bins {infeasible} need more shift than the drive provides")
    return schedule
