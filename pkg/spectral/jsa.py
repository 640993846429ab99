"""Joint spectral amplitude of a filtered SPDC source and its Schmidt purity.

JSA(Ws, Wi) = pump(Ws + Wi) * sinc(pm * (Ws - Wi)) * filter(Ws) * filter(Wi)
on a square detuning grid. The pump envelope depends only on the sum
detuning (energy conservation) and phase matching only on the difference.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from app.constants import (
    DEFAULT_FILTER_ORDER,
    DEFAULT_JSA_GRID,
    DEFAULT_JSA_SPAN_HZ,
    DEFAULT_PM_FWHM_HZ,
    MIN_CELLS_PER_FILTER_FWHM,
    MIN_JSA_GRID,
    SINC_HALF_POWER_X,
)
from app.errors import DecompositionError, InvalidParameterError, ResolutionError
from utils.logger import get_logger
from utils.math_utils import fwhm

logger = get_logger(__name__)


class Axis(str, Enum):
    """JSA axes: rows are signal detunings, columns idler detunings."""

    SIGNAL = "signal"
    IDLER = "idler"


@dataclass(frozen=True)
class FilterSpec:
    """Super-Gaussian frequency-bin filter.

    Intensity transmission exp(-ln2 * (2*W/fwhm)^(2*order)); order 1 is a
    Gaussian, order >= 4 approaches a flat top.

    Attributes:
        fwhm: Intensity FWHM, Hz
        shape_order: Super-Gaussian order
    """

    fwhm: float = 12.5e9
    shape_order: int = DEFAULT_FILTER_ORDER

    def __post_init__(self):
        if not (self.fwhm > 0 and math.isfinite(self.fwhm)):
            raise InvalidParameterError("filter.fwhm", f"must be > 0, got {self.fwhm}")
        if self.shape_order < 1:
            raise InvalidParameterError(
                "filter.shape_order", f"must be >= 1, got {self.shape_order}"
            )

    def transmission(self, detuning: np.ndarray) -> np.ndarray:
        """Intensity transmission at the given detunings (Hz)."""
        x = 2 * np.asarray(detuning, dtype=float) / self.fwhm
        return np.exp(-math.log(2) * x ** (2 * self.shape_order))

    def amplitude(self, detuning: np.ndarray) -> np.ndarray:
        """Field transmission, the square root of the intensity transmission."""
        return np.sqrt(self.transmission(detuning))


@dataclass(frozen=True)
class JsaParams:
    """Inputs of the JSA model.

    Attributes:
        pump_fwhm_duration: Pump pulse FWHM duration, s (reported; the spectrum uses the bandwidth)
        pump_fwhm_bandwidth: Pump intensity FWHM bandwidth, Hz
        pm_fwhm: FWHM of |sinc|^2 phase matching along Ws - Wi, Hz
        filter: Frequency-bin filter applied to each marginal
        grid_size: Samples per axis
        span: Half-width of each detuning axis, Hz
    """

    pump_fwhm_duration: float = 70e-12
    pump_fwhm_bandwidth: float = 12.9e9
    pm_fwhm: float = DEFAULT_PM_FWHM_HZ
    filter: FilterSpec = field(default_factory=FilterSpec)
    grid_size: int = DEFAULT_JSA_GRID
    span: float = DEFAULT_JSA_SPAN_HZ

    def validate(self) -> "JsaParams":
        if self.grid_size < MIN_JSA_GRID:
            raise InvalidParameterError(
                "grid_size", f"must be >= {MIN_JSA_GRID}, got {self.grid_size}"
            )
        if not self.span > 2 * self.filter.fwhm:
            raise InvalidParameterError(
                "span", f"must exceed twice the filter FWHM ({2 * self.filter.fwhm:.4g} Hz)"
            )
        for name in ("pump_fwhm_duration", "pump_fwhm_bandwidth"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise InvalidParameterError(name, f"must be > 0, got {value}")
        if not self.pm_fwhm > 0:
            raise InvalidParameterError("pm_fwhm", f"must be > 0, got {self.pm_fwhm}")
        return self

    @property
    def cell_width(self) -> float:
        return 2 * self.span / (self.grid_size - 1)


@dataclass(frozen=True)
class JsaGrid:
    """Sampled JSA.

    Attributes:
        values: grid_size x grid_size complex amplitudes, rows = signal, columns = idler
        signal_axis: Signal detunings, Hz
        idler_axis: Idler detunings, Hz
    """

    values: np.ndarray
    signal_axis: np.ndarray
    idler_axis: np.ndarray

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def normalized(self) -> "JsaGrid":
        """Copy scaled to unit Frobenius norm."""
        norm = np.linalg.norm(self.values)
        if not (norm > 0 and np.isfinite(norm)):
            raise DecompositionError(f"JSA norm is {norm}; cannot normalize")
        return JsaGrid(self.values / norm, self.signal_axis, self.idler_axis)

    def transposed(self) -> "JsaGrid":
        """Signal and idler exchanged."""
        return JsaGrid(self.values.T.copy(), self.idler_axis, self.signal_axis)


def detuning_axis(params: JsaParams) -> np.ndarray:
    """Uniform axis from -span to +span, symmetric about 0."""
    return np.linspace(-params.span, params.span, params.grid_size)


def pump_envelope(sum_detuning: np.ndarray, bandwidth: float) -> np.ndarray:
    """Gaussian amplitude whose intensity FWHM is `bandwidth`."""
    return np.exp(-2 * math.log(2) * (np.asarray(sum_detuning) / bandwidth) ** 2)


def phase_matching(diff_detuning: np.ndarray, pm_fwhm: float) -> np.ndarray:
    """sinc amplitude whose |.|^2 FWHM is pm_fwhm (np.sinc is sin(pi x)/(pi x))."""
    beta = 2 * SINC_HALF_POWER_X / pm_fwhm
    return np.sinc(beta * np.asarray(diff_detuning) / np.pi)


def build_jsa(params: JsaParams) -> JsaGrid:
    """Filtered JSA on a square grid, normalized to unit Frobenius norm.

    Args:
        params: JSA model inputs

    Returns:
        Normalized JsaGrid

    Raises:
        InvalidParameterError: If params violate an invariant
        ResolutionError: If the filter FWHM spans fewer than 8 grid cells
    """
    params.validate()
    cells = params.filter.fwhm / params.cell_width
    if cells < MIN_CELLS_PER_FILTER_FWHM:
        raise ResolutionError(
            f"Filter FWHM spans {cells:.1f} cells; need >= {MIN_CELLS_PER_FILTER_FWHM} "
            f"(raise grid_size or lower span)"
        )

    axis = detuning_axis(params)
    ws = axis[:, np.newaxis]
    wi = axis[np.newaxis, :]

    values = (
        pump_envelope(ws + wi, params.pump_fwhm_bandwidth)
        * phase_matching(ws - wi, params.pm_fwhm)
        * params.filter.amplitude(ws)
        * params.filter.amplitude(wi)
    ).astype(complex)

    grid = JsaGrid(values, axis.copy(), axis.copy()).normalized()
    logger.debug(
        f"Built {params.grid_size}x{params.grid_size} JSA: "
        f"pump {params.pump_fwhm_bandwidth / 1e9:.2f} GHz, "
        f"filter {params.filter.fwhm / 1e9:.2f} GHz (order {params.filter.shape_order})"
    )
    return grid


def schmidt_coefficients(grid: JsaGrid) -> np.ndarray:
    """Singular values of the unit-norm amplitude matrix, descending."""
    try:
        singular = np.linalg.svd(grid.normalized().values, compute_uv=False)
    except np.linalg.LinAlgError as e:
        raise DecompositionError(f"SVD of the JSA failed: {e}") from e

    if not np.all(np.isfinite(singular)):
        raise DecompositionError("SVD of the JSA returned non-finite singular values")
    return singular


def purity(grid: JsaGrid) -> float:
    """Heralded single-photon purity, sum of s_k^4 = 1 / Schmidt number.

    Args:
        grid: JSA (normalized internally)

    Returns:
        Purity in (0, 1]

    Raises:
        DecompositionError: If the SVD fails or yields non-finite values
    """
    singular = schmidt_coefficients(grid)
    weights = singular**2
    weights = weights / weights.sum()
    value = float(np.sum(weights**2))
    if not 0 < value <= 1 + 1e-12:
        raise DecompositionError(f"Purity {value} outside (0, 1]")
    return min(value, 1.0)


def schmidt_number(grid: JsaGrid) -> float:
    """Effective number of Schmidt modes."""
    return 1.0 / purity(grid)


def marginal(grid: JsaGrid, axis: Axis) -> np.ndarray:
    """Intensity marginal along one photon's detuning, normalized to unit sum.

    Args:
        grid: JSA
        axis: Axis.SIGNAL sums over idler (rows); Axis.IDLER sums over signal (columns)

    Returns:
        Marginal spectrum sampled on that photon's axis
    """
    axis = Axis(axis)
    intensity = grid.intensity
    spectrum = intensity.sum(axis=1) if axis is Axis.SIGNAL else intensity.sum(axis=0)
    return spectrum / spectrum.sum()


def marginal_fwhm(grid: JsaGrid, axis: Axis) -> float:
    """FWHM of the intensity marginal, Hz."""
    axis = Axis(axis)
    coords = grid.signal_axis if axis is Axis.SIGNAL else grid.idler_axis
    return fwhm(coords, marginal(grid, axis))
