"""Design equations"""
import logging
import math
from dataclasses import replace

import numpy as np
import pytest

from app.errors import InvalidParameterError
from design.core import (
    DesignParams,
    bins_closed_form,
    closed_form_coefficient,
    containment_bound_multiple,
    derive_design,
)
from design.waveforms import ALL_SHAPES, Waveform, WaveformShape
from utils.math_utils import r_squared_deficit


def design_for(shape, **kwargs):
    return derive_design(DesignParams(waveform=Waveform(shape), **kwargs))


def test_default_hardware_numbers(sine_design):
    assert sine_design.drive_freq == pytest.approx(1.378e9, rel=0.02)
    assert sine_design.pump_rate == pytest.approx(459.4e6, rel=0.02)
    assert sine_design.time_bin_spacing == pytest.approx(725.6e-12, rel=1e-3)
    assert sine_design.bin_pulse_width == pytest.approx(71.2e-12, rel=1e-9)
    assert sine_design.bin_spacing == pytest.approx(16.045e9, rel=1e-4)


@pytest.mark.parametrize(
    "shape, bins_real, usable",
    [
        (WaveformShape.SAWTOOTH, 20.69, 19),
        (WaveformShape.SINE, 18.07, 17),
        (WaveformShape.TRIANGLE, 14.25, 13),
    ],
)
def test_bin_counts_at_defaults(shape, bins_real, usable):
    design = design_for(shape)
    assert design.bins_real == pytest.approx(bins_real, abs=0.01)
    assert design.bins_usable == usable
    assert design.bins_usable % 2 == 1


def test_drive_multiples_follow_containment():
    assert containment_bound_multiple(DesignParams(waveform=Waveform(WaveformShape.SAWTOOTH))) == 3
    assert containment_bound_multiple(DesignParams()) == pytest.approx(1.5)
    assert design_for(WaveformShape.SAWTOOTH).drive_multiple == 3
    assert design_for(WaveformShape.TRIANGLE).drive_multiple == 1
    # All shapes share the pump rate
    rates = {design_for(s).pump_rate for s in ALL_SHAPES}
    assert len(rates) == 1


def test_containment_without_integer_multiple_is_rejected():
    with pytest.raises(InvalidParameterError, match="containment"):
        derive_design(DesignParams(waveform=Waveform(WaveformShape.SAWTOOTH), containment=25))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"tbp": 0.0},
        {"tbp": 1.5},
        {"v_pi": 0.0},
        {"bin_width": -1.0},
        {"guard_band": -1.0},
        {"rf_power": -0.1},
        {"containment": 1.0},
        {"drive_multiple": 0},
    ],
)
def test_invalid_parameters(kwargs):
    with pytest.raises(InvalidParameterError):
        derive_design(DesignParams(**kwargs))


def test_zero_power_leaves_center_bin(caplog):
    with caplog.at_level(logging.WARNING):
        design = derive_design(DesignParams(rf_power=0.0))
    assert design.bins_real == 1.0
    assert design.bins_usable == 1
    assert design.freq_shift == 0.0
    assert "RF power is zero" in caplog.text


def test_drive_multiple_override_warns_above_bound(caplog):
    with caplog.at_level(logging.WARNING):
        design = derive_design(DesignParams(drive_multiple=2))
    assert design.drive_freq == pytest.approx(2 / design.time_bin_spacing)
    assert "exceeds the containment bound" in caplog.text


@pytest.mark.parametrize(
    "shape, expected",
    [
        (WaveformShape.SAWTOOTH, 28.44697),
        (WaveformShape.TRIANGLE, 19.14679),
        (WaveformShape.SINE, 24.66150),
    ],
)
def test_closed_form_coefficients(shape, expected):
    assert closed_form_coefficient(shape) == pytest.approx(expected, rel=1e-3)


def test_closed_form_matches_composed_pipeline():
    """Random draws at the default containment of 8, where the drive multiples are integers."""
    rng = np.random.default_rng(20240611)
    for _ in range(1000):
        params = DesignParams(
            bin_width=rng.uniform(5e9, 50e9),
            guard_band=rng.uniform(0, 5e9),
            tbp=rng.uniform(0.1, 1.0),
            rf_power=rng.uniform(0.01, 100),
            v_pi=rng.uniform(0.3, 10),
        )
        closed = bins_closed_form(params)
        for shape in ALL_SHAPES:
            composed = derive_design(replace(params, waveform=Waveform(shape)))
            assert closed[shape] == pytest.approx(composed.bins_real, rel=1e-6)


def test_closed_form_departs_from_pipeline_off_reference_containment():
    params = DesignParams(containment=4.0)
    closed = bins_closed_form(params)
    composed = [derive_design(replace(params, waveform=Waveform(s))).bins_real for s in ALL_SHAPES]
    assert any(closed[s] != pytest.approx(c, rel=1e-3) for s, c in zip(ALL_SHAPES, composed))


def test_closed_form_sine_phase_factor():
    params = DesignParams(waveform=Waveform(WaveformShape.SINE, phase=math.pi / 3))
    closed = bins_closed_form(params)
    design = derive_design(params)
    assert closed[WaveformShape.SINE] == pytest.approx(design.bins_real, rel=1e-9)
    assert design.freq_shift == pytest.approx(derive_design(DesignParams()).freq_shift / 2)


def test_bins_monotone_in_power_and_v_pi():
    powers = np.geomspace(0.1, 100, 25)
    v_pis = np.geomspace(0.5, 10, 25)
    for shape in ALL_SHAPES:
        by_power = [design_for(shape, rf_power=p).bins_real for p in powers]
        by_v_pi = [design_for(shape, v_pi=v).bins_real for v in v_pis]
        assert np.all(np.diff(by_power) > 0)
        assert np.all(np.diff(by_v_pi) < 0)


def test_waveform_ordering_pointwise():
    for power in np.geomspace(0.1, 100, 25):
        saw = design_for(WaveformShape.SAWTOOTH, rf_power=power).bins_real
        sine = design_for(WaveformShape.SINE, rf_power=power).bins_real
        tri = design_for(WaveformShape.TRIANGLE, rf_power=power).bins_real
        assert saw > sine > tri


def test_drive_and_pump_rate_linear_in_bin_width():
    widths = np.linspace(5e9, 50e9, 46)
    for shape in ALL_SHAPES:
        designs = [design_for(shape, bin_width=w) for w in widths]
        for values in ([d.drive_freq for d in designs], [d.pump_rate for d in designs]):
            fitted = np.polyval(np.polyfit(widths, values, 1), widths)
            assert r_squared_deficit(np.array(values), fitted) < 1e-9


def test_bins_saturate_with_bin_width():
    def bins_at(width):
        return design_for(WaveformShape.SINE, bin_width=width).bins_real

    step = 1e9
    slope_10 = (bins_at(10e9 + step) - bins_at(10e9 - step)) / (2 * step)
    slope_50 = (bins_at(50e9 + step) - bins_at(50e9 - step)) / (2 * step)
    assert 0 < slope_50 < slope_10


def test_time_domain_widths_shrink_with_bin_width():
    narrow = derive_design(DesignParams(bin_width=5e9))
    wide = derive_design(DesignParams(bin_width=50e9))
    assert wide.bin_pulse_width < narrow.bin_pulse_width
    assert narrow.time_bin_spacing / narrow.bin_pulse_width == pytest.approx(24 / 2.355)


def test_waveform_phase_validation():
    with pytest.raises(InvalidParameterError):
        Waveform(WaveformShape.TRIANGLE, phase=0.5)
    with pytest.raises(InvalidParameterError):
        Waveform(WaveformShape.SINE, phase=math.pi)
    assert Waveform("Sawtooth").shape is WaveformShape.SAWTOOTH
