"""JSA grid export: long-format CSV and an 8-bit portable graymap."""

from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from spectral.jsa import JsaGrid
from utils.io import write_bytes_atomic, write_csv_atomic

PGM_MAX_VALUE = 255


def grid_frame(grid: JsaGrid) -> pd.DataFrame:
    """One row per grid cell: signal detuning, idler detuning, |JSA|^2."""
    ws, wi = np.meshgrid(grid.signal_axis, grid.idler_axis, indexing="ij")
    return pd.DataFrame(
        {
            "signal_detuning [Hz]": ws.ravel(),
            "idler_detuning [Hz]": wi.ravel(),
            "intensity [a.u.]": grid.intensity.ravel(),
        }
    )


def export_csv(grid: JsaGrid, path: Union[str, Path]) -> Path:
    return write_csv_atomic(path, grid_frame(grid))


def to_pgm(grid: JsaGrid) -> bytes:
    """Binary (P5) graymap of |JSA|^2 scaled to its peak.

    Signal runs left to right and idler bottom to top, so the image reads
    like a plot with the origin at the lower left.
    """
    intensity = grid.intensity
    peak = intensity.max()
    scaled = intensity / peak if peak > 0 else intensity
    pixels = np.rint(scaled * PGM_MAX_VALUE).astype(np.uint8)
    # rows of the image are idler values, highest first
    image = np.flipud(pixels.T)
    height, width = image.shape
    header = f"P5\n{width} {height}\n{PGM_MAX_VALUE}\n".encode("ascii")
    return header + image.tobytes()


def export_pgm(grid: JsaGrid, path: Union[str, Path]) -> Path:
    return write_bytes_atomic(path, to_pgm(grid))
