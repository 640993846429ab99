"""Parameter sweeps over design and rate fields."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np
import pandas as pd

from app.errors import ConfigError
from app.run_config import FIELDS, RunConfig
from app.units import parse_quantity
from design.core import derive_design
from design.waveforms import ALL_SHAPES
from rates.model import basic_rate, compare_modulators, zalm_rate
from utils.logger import get_logger

logger = get_logger(__name__)

SWEEPABLE_NAMESPACES = ("design", "rates")
SCALES = ("linear", "log")

# Output name -> unit; design outputs come straight from DesignPoint
DESIGN_OUTPUTS: Dict[str, str] = {
    "bin_spacing": "Hz",
    "bin_pulse_width": "s",
    "time_bin_spacing": "s",
    "drive_freq": "Hz",
    "pump_rate": "Hz",
    "peak_voltage": "V",
    "freq_shift": "Hz",
    "bins_real": "1",
    "bins_usable": "1",
}
RATE_OUTPUTS: Dict[str, str] = {"zalm_rate": "Hz", "basic_rate": "Hz"}
OUTPUTS = {**DESIGN_OUTPUTS, **RATE_OUTPUTS}

# Fields compare_modulators replaces with each modulator's own values
MODULATOR_FIELDS = ("design.v_pi", "rates.insertion_loss")


@dataclass(frozen=True)
class SweepSpec:
    """A one-dimensional sweep.

    Attributes:
        variable: Namespaced field, e.g. "design.rf_power"
        start: First value, SI units
        stop: Last value, SI units
        points: Number of values, at least 2
        scale: linear or log spacing
    """

    variable: str
    start: float
    stop: float
    points: int
    scale: str = "linear"

    @classmethod
    def parse(cls, variable: str, start: str, stop: str, points: int, scale: str) -> "SweepSpec":
        """Build from command-line text, resolving unit suffixes against the field."""
        spec = FIELDS.get(variable)
        if spec is None:
            raise ConfigError("unknown sweep variable", variable)
        return cls(
            variable=variable,
            start=parse_quantity(start, spec.dimension, "--start"),
            stop=parse_quantity(stop, spec.dimension, "--stop"),
            points=points,
            scale=scale.strip().lower(),
        ).validate()

    def validate(self) -> "SweepSpec":
        spec = FIELDS.get(self.variable)
        if spec is None or self.variable.split(".", 1)[0] not in SWEEPABLE_NAMESPACES:
            raise ConfigError("only design.* and rates.* fields can be swept", self.variable)
        if spec.kind not in ("float", "tbp"):
            raise ConfigError("only real-valued fields can be swept", self.variable)
        if self.points < 2:
            raise ConfigError(f"need at least 2 points, got {self.points}", "--points")
        if not self.start < self.stop:
            raise ConfigError(f"start {self.start} must be below stop {self.stop}", "--start")
        if self.scale not in SCALES:
            raise ConfigError(f"scale must be one of {SCALES}, got {self.scale!r}", "--scale")
        if self.scale == "log" and not self.start > 0:
            raise ConfigError("log scale needs a positive start", "--start")
        return self

    @property
    def unit(self) -> str:
        return FIELDS[self.variable].unit or "1"

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


def parse_outputs(names: Sequence[str]) -> List[str]:
    outputs = [n.strip() for n in names if n.strip()]
    if not outputs:
        raise ConfigError("no outputs requested", "--outputs")
    unknown = [n for n in outputs if n not in OUTPUTS]
    if unknown:
        raise ConfigError(f"unknown outputs {unknown} (known: {', '.join(OUTPUTS)})", "--outputs")
    return outputs


def _evaluate(config: RunConfig, outputs: Sequence[str]) -> Dict[str, float]:
    """Every requested output, keyed by column name without the unit."""
    row: Dict[str, float] = {}
    design_outputs = [o for o in outputs if o in DESIGN_OUTPUTS]
    rate_outputs = [o for o in outputs if o in RATE_OUTPUTS]

    if design_outputs:
        for shape in ALL_SHAPES:
            point = derive_design(config.design_params(shape)).as_dict()
            for name in design_outputs:
                row[f"{name}:{shape.value}"] = point[name]

    if rate_outputs:
        modulators = config.modulators()
        if modulators:
            comparison = compare_modulators(
                config.design_params(), config.rate_params(), modulators
            )
            for entry in comparison.entries:
                values = {
                    "zalm_rate": entry.report.zalm_rate,
                    "basic_rate": entry.report.basic_rate,
                }
                for name in rate_outputs:
                    row[f"{name}:{entry.modulator.label}"] = values[name]
        else:
            params = config.rate_params()
            for shape in ALL_SHAPES:
                design = derive_design(config.design_params(shape))
                values = {
                    "zalm_rate": zalm_rate(design, params).zalm_rate,
                    "basic_rate": basic_rate(design, params),
                }
                for name in rate_outputs:
                    row[f"{name}:{shape.value}"] = values[name]
    return row


def run_sweep(
    config: RunConfig, spec: SweepSpec, outputs: Sequence[str], workers: int = 1
) -> pd.DataFrame:
    """Evaluate the outputs at every sweep value.

    Args:
        config: Base configuration
        spec: Sweep definition
        outputs: Output names from OUTPUTS
        workers: Threads evaluating sweep points

    Returns:
        DataFrame with one row per point; column headers carry units

    Raises:
        ConfigError: If a rate output is swept over a field rates.modulators overrides
    """
    spec.validate()
    outputs = parse_outputs(outputs)
    rate_outputs = [o for o in outputs if o in RATE_OUTPUTS]
    if rate_outputs and spec.variable in MODULATOR_FIELDS and config.modulators():
        raise ConfigError(
            f"rates.modulators fixes this field for {', '.join(rate_outputs)}; "
            "clear rates.modulators or sweep another field",
            spec.variable,
        )
    xs = spec.values()

    def point(x: float) -> Dict[str, float]:
        return _evaluate(config.with_value(spec.variable, float(x)), outputs)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(point, xs))
    else:
        rows = [point(x) for x in xs]

    frame = pd.DataFrame(rows)
    frame.columns = [f"{c} [{OUTPUTS[c.split(':', 1)[0]]}]" for c in frame.columns]
    frame.insert(0, f"{spec.variable} [{spec.unit}]", xs)
    logger.info(
        f"Swept {spec.variable} over {spec.points} {spec.scale} points "
        f"({spec.start:g} to {spec.stop:g} {spec.unit})"
    )
    return frame
