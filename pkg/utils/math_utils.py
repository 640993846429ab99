"""Mathematical utility functions"""
import math
from typing import Sequence

import numpy as np


def floor_to_odd(value: float) -> int:
    """Largest odd integer not above value, never below 1"""
    if not math.isfinite(value):
        raise ValueError(f"Cannot floor non-finite value {value}")
    n = math.floor(value)
    if n % 2 == 0:
        n -= 1
    return max(1, n)


def wrap_phase(phase):
    """Wrap radians into [-pi, pi)"""
    return (np.asarray(phase) + np.pi) % (2 * np.pi) - np.pi


def db_to_linear(loss_db: float) -> float:
    """Transmission factor for a loss in dB"""
    return 10 ** (-loss_db / 10)


def fwhm(axis: Sequence[float], values: Sequence[float]) -> float:
    """Full width at half maximum of a sampled single-peaked curve.

    Edges are located by linear interpolation between the samples that
    straddle half of the peak value.

    Args:
        axis: Uniform, increasing sample positions
        values: Non-negative samples

    Returns:
        Width in axis units, or 0.0 for an all-zero curve
    """
    x = np.asarray(axis, dtype=float)
    y = np.asarray(values, dtype=float)
    peak = float(np.max(y)) if y.size else 0.0
    if peak <= 0:
        return 0.0

    half = peak / 2
    above = np.nonzero(y >= half)[0]
    left, right = above[0], above[-1]

    if left == 0:
        x_left = x[0]
    else:
        x_left = np.interp(half, [y[left - 1], y[left]], [x[left - 1], x[left]])
    if right == len(y) - 1:
        x_right = x[-1]
    else:
        x_right = np.interp(half, [y[right + 1], y[right]], [x[right + 1], x[right]])

    return float(x_right - x_left)


def r_squared_deficit(observed: np.ndarray, fitted: np.ndarray) -> float:
    """Return 1 - R^2 of a fit; 0.0 when the data carry no variance and the fit is exact"""
    observed = np.asarray(observed, dtype=float)
    residual = float(np.sum((observed - fitted) ** 2))
    total = float(np.sum((observed - observed.mean()) ** 2))
    if total == 0:
        return 0.0 if residual == 0 else 1.0
    return residual / total
