"""Run configuration: flat `key = value` files with unit-suffixed values.

Files are read with python-dotenv (no variable interpolation). Every key
belongs to one namespace (design, jsa, rates, sim, shear) and maps onto
exactly one typed field; unknown keys are rejected. `to_text()` writes the
resolved configuration in canonical SI form, which parses back to an equal
RunConfig.
"""

import io
import re
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, Mapping, Optional, Tuple, Union

from dotenv import dotenv_values

from app.constants import (
    DEFAULT_ALLOWED_PHASE,
    DEFAULT_CIRCULATOR_LOSS_DB,
    DEFAULT_CONTAINMENT,
    DEFAULT_FILTER_ORDER,
    DEFAULT_JSA_GRID,
    DEFAULT_JSA_SPAN_HZ,
    DEFAULT_PM_FWHM_HZ,
    DEFAULT_TRACE_SAMPLES,
    MIN_PHASE_SWEEP_POINTS,
    TBP_FLAT_TOP,
    TBP_GAUSSIAN,
    TBP_LORENTZIAN,
)
from app.errors import ConfigError, InvalidParameterError
from app.units import ANGLE, FREQUENCY, LOSS, POWER, TIME, VOLTAGE, BASE_UNITS
from app.units import format_quantity, parse_quantity
from design.core import DesignParams, drive_multiple
from design.noise import max_voltage_offset
from design.waveforms import Waveform, WaveformShape
from rates.model import STANDARD_MODULATORS, Modulator, RateParams
from shearing.drive import DriveSignal
from shearing.pulses import PulseTrain, gaussian_pair
from simulation.streams import check_run
from spectral.jsa import FilterSpec, JsaParams

NAMESPACES = ("design", "jsa", "rates", "sim", "shear")

TBP_NAMES = {
    "flat_top": TBP_FLAT_TOP,
    "gaussian": TBP_GAUSSIAN,
    "lorentzian": TBP_LORENTZIAN,
}

_AUTO = ("auto", "none", "")
_CUSTOM_MODULATOR = re.compile(r"^\s*([0-9.]+)\s*V\s*-\s*([0-9.]+)\s*dB\s*$", re.IGNORECASE)


@dataclass(frozen=True)
class FieldSpec:
    """One configurable field.

    Attributes:
        key: Namespaced key, e.g. "design.bin_width"
        kind: float, int, tbp, shape or names
        default: Value in SI units
        dimension: Unit dimension for float fields
        optional: Whether "auto" (None) is accepted
        description: One-line help text
    """

    key: str
    kind: str
    default: Any
    dimension: Optional[str] = None
    optional: bool = False
    description: str = ""

    @property
    def unit(self) -> str:
        return BASE_UNITS.get(self.dimension, "1") if self.kind == "float" else ""


def _spec(key, kind, default, dimension=None, optional=False, description=""):
    return FieldSpec(key, kind, default, dimension, optional, description)


FIELDS: Dict[str, FieldSpec] = {
    s.key: s
    for s in [
        _spec("design.bin_width", "float", 12.5e9, FREQUENCY, description="Frequency-bin FWHM"),
        _spec("design.guard_band", "float", 2e9, FREQUENCY, description="Added bin spacing"),
        _spec("design.tbp", "tbp", TBP_FLAT_TOP, description="Time-bandwidth product"),
        _spec("design.rf_power", "float", 10.0, POWER, description="Average RF drive power"),
        _spec("design.v_pi", "float", 1.0, VOLTAGE, description="Shearing modulator V_pi"),
        _spec("design.waveform", "shape", "sine", description="sawtooth, triangle or sine"),
        _spec("design.sine_phase", "float", 0.0, ANGLE, description="Sine phase at the pulse"),
        _spec(
            "design.containment",
            "float",
            DEFAULT_CONTAINMENT,
            description="Ramp containment in pulse sigmas",
        ),
        _spec(
            "design.drive_multiple",
            "int",
            None,
            optional=True,
            description="Force D * time_bin_spacing",
        ),
        _spec(
            "design.allowed_phase",
            "float",
            DEFAULT_ALLOWED_PHASE,
            ANGLE,
            description="Phase error tolerated from a voltage offset",
        ),
        _spec("jsa.pump_duration", "float", 70e-12, TIME, description="Pump FWHM duration"),
        _spec("jsa.pump_bandwidth", "float", 12.9e9, FREQUENCY, description="Pump FWHM bandwidth"),
        _spec("jsa.pm_fwhm", "float", DEFAULT_PM_FWHM_HZ, FREQUENCY, description="Phase matching"),
        _spec(
            "jsa.filter_fwhm",
            "float",
            None,
            FREQUENCY,
            optional=True,
            description="Filter FWHM (auto: bin width)",
        ),
        _spec("jsa.filter_order", "int", DEFAULT_FILTER_ORDER, description="Super-Gaussian order"),
        _spec("jsa.grid_size", "int", DEFAULT_JSA_GRID, description="Samples per axis"),
        _spec("jsa.span", "float", DEFAULT_JSA_SPAN_HZ, FREQUENCY, description="Axis half-width"),
        _spec("rates.pair_prob", "float", 0.01, description="Pair probability per pulse per bin"),
        _spec("rates.eta_a", "float", 1.0, description="Output transmission A"),
        _spec("rates.eta_b", "float", 1.0, description="Output transmission B"),
        _spec("rates.herald_eta", "float", 1.0, description="Heralding-path transmission"),
        _spec(
            "rates.circulator_loss",
            "float",
            DEFAULT_CIRCULATOR_LOSS_DB,
            LOSS,
            description="Loss per circulator",
        ),
        _spec("rates.insertion_loss", "float", 6.0, LOSS, description="Feedforward modulator loss"),
        _spec("rates.bsm_eff", "float", 0.5, description="BSM success probability"),
        _spec(
            "rates.modulators",
            "names",
            (),
            description="Modulators to compare: 3V-3dB, 1V-6dB, hero or <v>V-<l>dB",
        ),
        _spec("sim.n_pulses", "int", 1_000_000, description="Pump pulses to simulate"),
        _spec("sim.seed", "int", 0, description="64-bit unsigned seed"),
        _spec("sim.workers", "int", 1, description="Worker threads"),
        _spec("shear.pulse_fwhm", "float", 200e-12, TIME, description="Time-bin pulse FWHM"),
        _spec("shear.bin_spacing", "float", 2.1e-9, TIME, description="Early/late separation"),
        _spec(
            "shear.drive_multiple",
            "float",
            2.0,
            description="D * bin_spacing when drive_freq is auto",
        ),
        _spec(
            "shear.drive_freq",
            "float",
            None,
            FREQUENCY,
            optional=True,
            description="Drive frequency (auto: drive_multiple / bin_spacing)",
        ),
        _spec("shear.peak_voltage", "float", 2.5, VOLTAGE, description="Drive peak voltage"),
        _spec("shear.v_pi", "float", 5.0, VOLTAGE, description="Modulator V_pi"),
        _spec("shear.waveform", "shape", "sine", description="sawtooth, triangle or sine"),
        _spec(
            "shear.harmonics",
            "int",
            None,
            optional=True,
            description="Fourier terms kept (auto: exact shape)",
        ),
        _spec("shear.samples", "int", DEFAULT_TRACE_SAMPLES, description="Trace samples"),
        _spec("shear.phase_points", "int", 36, description="Drive phases in a scan"),
        _spec("shear.drive_phase", "float", 0.0, ANGLE, description="Drive phase for single runs"),
    ]
}

# Parameter names raised by the builders -> config keys that set them
DESIGN_KEYS = {
    "bin_width": "design.bin_width",
    "guard_band": "design.guard_band",
    "tbp": "design.tbp",
    "rf_power": "design.rf_power",
    "v_pi": "design.v_pi",
    "containment": "design.containment",
    "drive_multiple": "design.drive_multiple",
    "waveform.phase": "design.sine_phase",
    "allowed_phase": "design.allowed_phase",
}
RATE_KEYS = {
    "pair_prob": "rates.pair_prob",
    "eta_a": "rates.eta_a",
    "eta_b": "rates.eta_b",
    "herald_eta": "rates.herald_eta",
    "circulator_loss": "rates.circulator_loss",
    "bsm_eff": "rates.bsm_eff",
    "modulator.v_pi": "design.v_pi",
    "modulator.insertion_loss": "rates.insertion_loss",
}
JSA_KEYS = {
    "pump_fwhm_duration": "jsa.pump_duration",
    "pump_fwhm_bandwidth": "jsa.pump_bandwidth",
    "pm_fwhm": "jsa.pm_fwhm",
    "filter.fwhm": "jsa.filter_fwhm",
    "filter.shape_order": "jsa.filter_order",
    "grid_size": "jsa.grid_size",
    "span": "jsa.span",
}
SIM_KEYS = {"n_pulses": "sim.n_pulses", "seed": "sim.seed", "workers": "sim.workers"}
SHEAR_KEYS = {
    "bin_fwhm": "shear.pulse_fwhm",
    "spacing": "shear.bin_spacing",
    "bin_centers": "shear.bin_spacing",
    "sample_period": "shear.samples",
    "drive.peak_voltage": "shear.peak_voltage",
    "drive.harmonics_kept": "shear.harmonics",
}


@contextmanager
def config_keys(keys: Mapping[str, str]) -> Iterator[None]:
    """Re-raise InvalidParameterError as ConfigError naming the config key."""
    try:
        yield
    except InvalidParameterError as e:
        key = keys.get(e.name)
        if key is None:
            raise
        raise ConfigError(e.message, key) from None


def _parse_int(text: str, key: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        pass
    # Allows "1e6"
    value = float(parse_quantity(text, None, key))
    if not value.is_integer():
        raise ConfigError(f"expected an integer, got {text!r}", key)
    return int(value)


def _parse_tbp(text: str, key: str) -> float:
    name = text.strip().lower().replace("-", "_")
    if name in TBP_NAMES:
        return TBP_NAMES[name]
    return parse_quantity(text, None, key)


def _parse_names(text: str, key: str) -> Tuple[str, ...]:
    names = tuple(part.strip() for part in text.split(",") if part.strip())
    for name in names:
        parse_modulator(name, key)
    return names


def parse_modulator(name: str, key: Optional[str] = None) -> Modulator:
    """Standard modulator by label, or a custom one written as <v>V-<l>dB."""
    for modulator in STANDARD_MODULATORS:
        if modulator.label.lower() == name.strip().lower():
            return modulator
    match = _CUSTOM_MODULATOR.match(name)
    if match is None:
        raise ConfigError(f"unknown modulator {name!r}", key)
    try:
        return Modulator(float(match.group(1)), float(match.group(2)), name.strip())
    except ValueError as e:
        raise ConfigError(f"bad modulator {name!r}: {e}", key) from None


def parse_value(spec: FieldSpec, text: Optional[str]) -> Any:
    """Parse one field's text into its typed value."""
    if text is None:
        raise ConfigError("missing value", spec.key)
    if spec.optional and text.strip().lower() in _AUTO:
        return None

    parsers: Dict[str, Callable[[str, str], Any]] = {
        "float": lambda t, k: parse_quantity(t, spec.dimension, k),
        "int": _parse_int,
        "tbp": _parse_tbp,
        "shape": lambda t, k: _parse_shape(t, k),
        "names": _parse_names,
    }
    return parsers[spec.kind](text, spec.key)


def _parse_shape(text: str, key: str) -> str:
    try:
        return WaveformShape.parse(text).value
    except InvalidParameterError as e:
        raise ConfigError(str(e), key) from None


def format_value(spec: FieldSpec, value: Any) -> str:
    if value is None:
        return "auto"
    if spec.kind in ("float", "tbp"):
        return format_quantity(value)
    if spec.kind == "names":
        return ",".join(value)
    return str(value)


def defaults() -> Dict[str, Any]:
    return {key: spec.default for key, spec in FIELDS.items()}


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run configuration, keyed by namespaced field name."""

    values: Dict[str, Any] = field(default_factory=defaults)

    def __getitem__(self, key: str) -> Any:
        return self.values[key]

    @classmethod
    def from_mapping(
        cls, entries: Mapping[str, Optional[str]], base: Optional["RunConfig"] = None
    ) -> "RunConfig":
        """Apply textual assignments on top of `base` (defaults when None).

        Raises:
            ConfigError: On unknown keys or unparsable values
        """
        values = dict(base.values if base is not None else defaults())
        for key, text in entries.items():
            key = key.strip()
            spec = FIELDS.get(key)
            if spec is None:
                raise ConfigError("unknown key", key)
            values[key] = parse_value(spec, text)
        return cls(values)

    @classmethod
    def from_text(cls, text: str, base: Optional["RunConfig"] = None) -> "RunConfig":
        entries = dotenv_values(stream=io.StringIO(text), interpolate=False)
        return cls.from_mapping(entries, base)

    @classmethod
    def from_file(cls, path: Union[str, Path], base: Optional["RunConfig"] = None) -> "RunConfig":
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file {path} not found")
        entries = dotenv_values(path, interpolate=False)
        return cls.from_mapping(entries, base)

    def with_values(self, **updates: Any) -> "RunConfig":
        """Copy with typed values replaced; keys use '__' for '.' (design__rf_power)."""
        values = dict(self.values)
        for name, value in updates.items():
            key = name.replace("__", ".")
            if key not in FIELDS:
                raise ConfigError("unknown key", key)
            values[key] = value
        return RunConfig(values)

    def with_value(self, key: str, value: Any) -> "RunConfig":
        if key not in FIELDS:
            raise ConfigError("unknown key", key)
        values = dict(self.values)
        values[key] = value
        return RunConfig(values)

    def to_text(self) -> str:
        """Canonical `key = value` text in SI units, grouped by namespace."""
        lines: List[str] = []
        for namespace in NAMESPACES:
            lines.append(f"# {namespace}")
            for key, spec in FIELDS.items():
                if not key.startswith(namespace + "."):
                    continue
                unit = f" [{spec.unit}]" if spec.unit else ""
                lines.append(f"## {spec.description}{unit}")
                lines.append(f"{key} = {format_value(spec, self.values[key])}")
            lines.append("")
        return "\n".join(lines)

    # Builders

    def waveform(self, shape: Optional[WaveformShape] = None) -> Waveform:
        shape = WaveformShape(shape or self["design.waveform"])
        phase = self["design.sine_phase"] if shape is WaveformShape.SINE else 0.0
        return Waveform(shape, phase)

    def design_params(self, shape: Optional[WaveformShape] = None) -> DesignParams:
        """DesignParams for the configured (or given) waveform."""
        return DesignParams(
            bin_width=self["design.bin_width"],
            guard_band=self["design.guard_band"],
            tbp=self["design.tbp"],
            rf_power=self["design.rf_power"],
            v_pi=self["design.v_pi"],
            waveform=self.waveform(shape),
            containment=self["design.containment"],
            drive_multiple=self["design.drive_multiple"],
        )

    def jsa_params(self) -> JsaParams:
        filter_fwhm = self["jsa.filter_fwhm"] or self["design.bin_width"]
        return JsaParams(
            pump_fwhm_duration=self["jsa.pump_duration"],
            pump_fwhm_bandwidth=self["jsa.pump_bandwidth"],
            pm_fwhm=self["jsa.pm_fwhm"],
            filter=FilterSpec(fwhm=filter_fwhm, shape_order=self["jsa.filter_order"]),
            grid_size=self["jsa.grid_size"],
            span=self["jsa.span"],
        )

    def modulator(self) -> Modulator:
        """Feedforward modulator implied by design.v_pi and rates.insertion_loss."""
        return Modulator(self["design.v_pi"], self["rates.insertion_loss"])

    def modulators(self) -> List[Modulator]:
        return [parse_modulator(name, "rates.modulators") for name in self["rates.modulators"]]

    def rate_params(self, modulator: Optional[Modulator] = None) -> RateParams:
        return RateParams(
            pair_prob=self["rates.pair_prob"],
            eta_a=self["rates.eta_a"],
            eta_b=self["rates.eta_b"],
            herald_eta=self["rates.herald_eta"],
            circulator_loss=self["rates.circulator_loss"],
            modulator=modulator or self.modulator(),
            bsm_eff=self["rates.bsm_eff"],
        )

    def shear_drive_freq(self) -> float:
        explicit = self["shear.drive_freq"]
        if explicit is not None:
            return explicit
        return self["shear.drive_multiple"] / self["shear.bin_spacing"]

    def shear_drive(self) -> DriveSignal:
        return DriveSignal(
            waveform=Waveform(WaveformShape(self["shear.waveform"])),
            frequency=self.shear_drive_freq(),
            peak_voltage=self["shear.peak_voltage"],
            phase_offset=self["shear.drive_phase"],
            harmonics_kept=self["shear.harmonics"],
        )

    def pulse_train(self) -> PulseTrain:
        return gaussian_pair(
            self["shear.pulse_fwhm"], self["shear.bin_spacing"], self["shear.samples"]
        )

    def check(self) -> "RunConfig":
        """Build every parameter set once so out-of-range values fail as config errors.

        Raises:
            ConfigError: Naming the offending key
        """
        with config_keys(DESIGN_KEYS):
            params = self.design_params().validate()
            if params.drive_multiple is None:
                drive_multiple(params)
            max_voltage_offset(self["design.allowed_phase"], params.v_pi)

        with config_keys(RATE_KEYS):
            self.rate_params().check_ranges()

        with config_keys(JSA_KEYS):
            self.jsa_params().validate()

        with config_keys(SIM_KEYS):
            check_run(self["sim.n_pulses"], self["sim.seed"], self["sim.workers"])

        with config_keys(SHEAR_KEYS):
            self.pulse_train()
        frequency_key = "shear.drive_freq"
        if self["shear.drive_freq"] is None:
            frequency_key = "shear.drive_multiple"
        with config_keys({**SHEAR_KEYS, "drive.frequency": frequency_key}):
            self.shear_drive()
        if not self["shear.v_pi"] > 0:
            raise ConfigError(f"must be > 0, got {self['shear.v_pi']}", "shear.v_pi")
        if self["shear.phase_points"] < MIN_PHASE_SWEEP_POINTS:
            raise ConfigError(
                f"must be >= {MIN_PHASE_SWEEP_POINTS}, got {self['shear.phase_points']}",
                "shear.phase_points",
            )
        return self


def load_run_config(
    path: Optional[Union[str, Path]] = None,
    preset: Optional[Mapping[str, str]] = None,
) -> RunConfig:
    """Defaults, then preset assignments, then the config file."""
    config = RunConfig()
    if preset:
        config = RunConfig.from_mapping(preset, config)
    if path is not None:
        config = RunConfig.from_file(path, config)
    return config


def field_names(prefixes: Tuple[str, ...] = NAMESPACES) -> List[str]:
    return [key for key in FIELDS if key.split(".", 1)[0] in prefixes]
