"""Run configuration, unit parsing and presets"""
import math

import pytest

from app.errors import ConfigError
from app.presets import PRESETS, get_preset
from app.run_config import FIELDS, RunConfig, load_run_config, parse_modulator
from app.units import ANGLE, FREQUENCY, TIME, parse_quantity
from design.waveforms import WaveformShape


@pytest.mark.parametrize(
    "text, dimension, expected",
    [
        ("12.5 GHz", FREQUENCY, 12.5e9),
        ("12.5GHz", FREQUENCY, 12.5e9),
        ("12.5Ghz", FREQUENCY, 12.5e9),
        ("70ps", TIME, 70e-12),
        ("1.25e10", FREQUENCY, 1.25e10),
        ("180 deg", ANGLE, math.pi),
    ],
)
def test_quantities(text, dimension, expected):
    assert parse_quantity(text, dimension) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("text", ["12.5 Gz", "12.5 ns", "fast", "1.2.3 GHz"])
def test_bad_quantities(text):
    with pytest.raises(ConfigError):
        parse_quantity(text, FREQUENCY, "design.bin_width")


def test_error_names_the_key():
    with pytest.raises(ConfigError) as info:
        RunConfig.from_text("design.bin_width = 12.5 Gz\n")
    assert info.value.key == "design.bin_width"
    assert "Gz" in str(info.value)


def test_unknown_key_is_rejected():
    with pytest.raises(ConfigError) as info:
        RunConfig.from_text("design.bin_widht = 12.5 GHz\n")
    assert info.value.key == "design.bin_widht"


def test_text_overrides_defaults():
    config = RunConfig.from_text(
        "design.rf_power = 500 mW\n"
        "design.waveform = sawtooth\n"
        "design.tbp = gaussian\n"
        "sim.n_pulses = 1e6\n"
        "shear.harmonics = auto\n"
    )
    assert config["design.rf_power"] == pytest.approx(0.5)
    assert config["design.tbp"] == pytest.approx(0.44)
    assert config["sim.n_pulses"] == 1_000_000
    assert config["shear.harmonics"] is None
    assert config.design_params().waveform.shape is WaveformShape.SAWTOOTH
    assert config["design.bin_width"] == FIELDS["design.bin_width"].default


def test_large_seed_keeps_precision():
    seed = 2**64 - 1
    assert RunConfig.from_text(f"sim.seed = {seed}\n")["sim.seed"] == seed


def test_dumped_text_parses_back():
    config = RunConfig.from_text(
        "design.rf_power = 3.3 W\n"
        "design.drive_multiple = 4\n"
        "jsa.filter_fwhm = 11 GHz\n"
        "rates.modulators = 3V-3dB,hero\n"
        "sim.seed = 12345678901234567\n"
    )
    assert RunConfig.from_text(config.to_text()) == config
    assert RunConfig.from_text(RunConfig().to_text()) == RunConfig()


def test_file_loading(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# bins\ndesign.bin_width = 25 GHz\n")
    config = load_run_config(path, get_preset("fig4c").assignments)
    assert config["design.bin_width"] == 25e9
    assert config["jsa.pump_duration"] == pytest.approx(35e-12)
    assert config.jsa_params().filter.fwhm == 25e9

    with pytest.raises(ConfigError):
        RunConfig.from_file(tmp_path / "missing.cfg")


def test_file_wins_over_preset(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("jsa.pump_duration = 50 ps\n")
    config = load_run_config(path, get_preset("fig4b").assignments)
    assert config["jsa.pump_duration"] == pytest.approx(50e-12)
    assert config["jsa.pump_bandwidth"] == pytest.approx(12.9e9)


def test_builders_follow_values():
    config = RunConfig().with_values(design__v_pi=3.0, rates__insertion_loss=3.0)
    modulator = config.modulator()
    assert modulator.v_pi == 3.0
    assert modulator.transmission == pytest.approx(10 ** (-0.3))
    assert config.rate_params().modulator == modulator
    assert config.shear_drive_freq() == pytest.approx(2 / 2.1e-9)
    assert config.with_value("shear.drive_freq", 1e9).shear_drive_freq() == 1e9

    with pytest.raises(ConfigError):
        config.with_value("design.nothing", 1.0)


def test_modulator_names():
    assert parse_modulator("HERO").v_pi == 0.5
    custom = parse_modulator("2V-4dB")
    assert (custom.v_pi, custom.insertion_loss) == (2.0, 4.0)
    with pytest.raises(ConfigError):
        parse_modulator("fast")
    with pytest.raises(ConfigError):
        RunConfig.from_text("rates.modulators = 3V-3dB,slow\n")


def test_every_preset_resolves():
    for name, preset in PRESETS.items():
        RunConfig.from_mapping(preset.assignments).check()
        if preset.sweep is not None:
            assert preset.sweep.variable in FIELDS, name
    assert get_preset(" Fig5B ").assignments["rates.pair_prob"] == "0.01"
    assert len(RunConfig.from_mapping(get_preset("fig5c").assignments).modulators()) == 3
    with pytest.raises(ConfigError):
        get_preset("fig9")


def test_defaults_pass_check():
    config = RunConfig()
    assert config.check() is config


@pytest.mark.parametrize(
    "key, value",
    [
        ("design.tbp", 2.0),
        ("design.guard_band", -1e9),
        ("design.sine_phase", 4.0),
        ("design.allowed_phase", -0.1),
        ("rates.eta_a", 1.5),
        ("rates.bsm_eff", 0.0),
        ("rates.insertion_loss", -1.0),
        ("jsa.grid_size", 32),
        ("jsa.pump_bandwidth", 0.0),
        ("sim.workers", 0),
        ("shear.pulse_fwhm", 0.0),
        ("shear.bin_spacing", -2.1e-9),
        ("shear.drive_freq", 0.0),
        ("shear.peak_voltage", -1.0),
        ("shear.v_pi", 0.0),
        ("shear.phase_points", 4),
    ],
)
def test_check_names_the_out_of_range_key(key, value):
    with pytest.raises(ConfigError) as info:
        RunConfig().with_value(key, value).check()
    assert info.value.key == key
    assert str(info.value).startswith(f"{key}: ")


def test_zero_v_pi_modulator_is_a_config_error():
    with pytest.raises(ConfigError) as info:
        RunConfig.from_text("rates.modulators = 0V-3dB\n").modulators()
    assert info.value.key == "rates.modulators"
    assert "0V-3dB" in str(info.value)
