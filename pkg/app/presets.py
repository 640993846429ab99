"""Named parameter sets for regenerating the published design curves."""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from app.errors import ConfigError

FIG5_MODULATORS = "3V-3dB,1V-6dB,hero"


@dataclass(frozen=True)
class SweepDefaults:
    """Sweep a preset runs when `sweep` gets no --var."""

    variable: str
    start: str
    stop: str
    points: int
    scale: str = "linear"
    outputs: Tuple[str, ...] = ("bins_real",)


@dataclass(frozen=True)
class Preset:
    """Config assignments plus an optional default sweep."""

    description: str
    assignments: Dict[str, str] = field(default_factory=dict)
    sweep: Optional[SweepDefaults] = None


_POWER_SWEEP = SweepDefaults("design.rf_power", "0.1 W", "100 W", 61, "log")

PRESETS: Dict[str, Preset] = {
    "baseline": Preset("12.5 GHz bins, 2 GHz guard band, flat-top TBP, 10 W, 1 V"),
    "fig2a": Preset("Bins versus RF power", sweep=_POWER_SWEEP),
    "fig2b": Preset(
        "Bins versus modulator V_pi",
        sweep=SweepDefaults("design.v_pi", "0.5 V", "10 V", 40, "log"),
    ),
    "fig2c": Preset(
        "Bins versus time-bandwidth product",
        sweep=SweepDefaults("design.tbp", "0.17", "0.89", 37),
    ),
    "fig3": Preset(
        "Bins, drive frequency, pump rate and time-domain widths versus bin width",
        sweep=SweepDefaults(
            "design.bin_width",
            "5 GHz",
            "50 GHz",
            46,
            outputs=(
                "bins_real",
                "drive_freq",
                "pump_rate",
                "bin_pulse_width",
                "time_bin_spacing",
            ),
        ),
    ),
    "fig4b": Preset(
        "JSA with pump duration equal to the bin pulse width",
        {"jsa.pump_duration": "70 ps", "jsa.pump_bandwidth": "12.9 GHz"},
    ),
    "fig4c": Preset(
        "JSA with pump duration half the bin pulse width",
        {"jsa.pump_duration": "35 ps", "jsa.pump_bandwidth": "25.8 GHz"},
    ),
    "fig5a": Preset(
        "Heralded rate per waveform",
        {"rates.pair_prob": "0.01"},
        SweepDefaults("design.rf_power", "0.1 W", "100 W", 61, "log", ("zalm_rate",)),
    ),
    "fig5b": Preset(
        "Heralded rate per modulator at P_p = 0.01",
        {"rates.pair_prob": "0.01", "rates.modulators": FIG5_MODULATORS},
        SweepDefaults("design.rf_power", "0.1 W", "100 W", 61, "log", ("zalm_rate",)),
    ),
    "fig5c": Preset(
        "Heralded rate per modulator at P_p = 0.1",
        {"rates.pair_prob": "0.1", "rates.modulators": FIG5_MODULATORS},
        SweepDefaults("design.rf_power", "0.1 W", "100 W", 61, "log", ("zalm_rate",)),
    ),
    "shear952": Preset(
        "200 ps pulses 2.1 ns apart, 2.5 V sine at twice the inverse spacing",
        {"shear.drive_multiple": "2", "shear.waveform": "sine"},
    ),
    "shear833": Preset(
        "Same pulses, sine at 1.75 times the inverse spacing",
        {"shear.drive_multiple": "1.75", "shear.waveform": "sine"},
    ),
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name.strip().lower()]
    except KeyError:
        known = ", ".join(PRESETS)
        raise ConfigError(f"unknown preset {name!r} (known: {known})", "--preset") from None
