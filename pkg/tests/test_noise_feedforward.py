"""Voltage-noise bound and feedforward schedule"""
import logging
import math
from dataclasses import replace

import pytest

from app.errors import InvalidParameterError
from design.feedforward import center_first_bins, is_feasible, shift_schedule
from design.noise import max_voltage_offset, noise_spec, phase_error_from_offset


def test_five_degree_offset_bound():
    offset = max_voltage_offset(math.radians(5), 1.0)
    assert offset == pytest.approx(27.78e-3, abs=0.5e-3)
    assert offset == pytest.approx(28e-3, abs=0.5e-3)


def test_offset_and_phase_error_are_inverse():
    offset = max_voltage_offset(0.2, 3.0)
    assert phase_error_from_offset(offset, 3.0) == pytest.approx(0.2, rel=1e-12)
    for phase, v_pi in [(math.radians(5), 1.0), (1e-6, 0.5), (3.0, 7.25)]:
        round_trip = phase_error_from_offset(max_voltage_offset(phase, v_pi), v_pi)
        assert round_trip == pytest.approx(phase, rel=1e-12)
    assert max_voltage_offset(0.0, 3.0) == 0.0


@pytest.mark.parametrize("phase, v_pi", [(-0.1, 1.0), (0.1, 0.0), (math.inf, 1.0)])
def test_noise_bound_rejects_bad_inputs(phase, v_pi):
    with pytest.raises(InvalidParameterError):
        max_voltage_offset(phase, v_pi)


def test_noise_spec_shift():
    spec = noise_spec(math.radians(5), 1.0, slope=4e9)
    assert spec.frequency_shift == pytest.approx(2e9)
    assert spec.offset == pytest.approx(max_voltage_offset(math.radians(5), 1.0))


def test_center_first_order():
    assert center_first_bins(1) == [0]
    assert center_first_bins(5) == [0, 1, -1, 2, -2]
    assert len(center_first_bins(17)) == 17


def test_schedule_covers_usable_bins(sine_design):
    schedule = shift_schedule(sine_design)
    assert [s.index for s in schedule] == center_first_bins(17)
    assert all(s.feasible for s in schedule)

    center = schedule[0]
    assert center.attenuation == 0.0
    assert center.required_shift == 0.0
    assert not center.phase_flip

    for s in schedule[1:]:
        assert s.chain_depth == abs(s.index)
        assert s.required_shift == pytest.approx(-s.index * sine_design.bin_spacing)
        assert 0 < s.attenuation <= 1
        assert s.attenuation == pytest.approx(
            abs(s.index) * sine_design.bin_spacing / sine_design.freq_shift
        )
        assert s.phase_flip == (s.index > 0)


def test_schedule_warns_on_unreachable_bins(sine_design, caplog):
    widened = replace(sine_design, bins_usable=21)
    with caplog.at_level(logging.WARNING):
        schedule = shift_schedule(widened)
    unreachable = sorted(s.index for s in schedule if not s.feasible)
    assert unreachable == [-10, -9, 9, 10]
    assert not is_feasible(9, sine_design)
    assert "need more shift" in caplog.text
