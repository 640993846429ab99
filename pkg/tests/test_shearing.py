"""Spectral shearing of time-bin pulse pairs"""
import math

import numpy as np
import pandas as pd
import pytest

from app.constants import FWHM_PER_SIGMA_EXACT
from app.errors import FitDegenerateError, InvalidParameterError
from design.noise import max_voltage_offset
from design.waveforms import Waveform, WaveformShape
from shearing.drive import DriveSignal, LinearRamp, synth_drive
from shearing.pulses import gaussian_pair
from shearing.simulator import (
    applied_phase,
    differential_phase_experiment,
    export_trace,
    find_max_differential,
    modulate,
    scan_phases,
    shear,
    shift_vs_phase,
)

PULSE_FWHM = 200e-12
BIN_SPACING = 2.1e-9
PEAK_VOLTAGE = 2.5
V_PI = 5.0


def drive(shape=WaveformShape.SINE, multiple=2.0, harmonics=None, phase=0.0):
    return DriveSignal(
        waveform=Waveform(shape),
        frequency=multiple / BIN_SPACING,
        peak_voltage=PEAK_VOLTAGE,
        phase_offset=phase,
        harmonics_kept=harmonics,
    )


def test_exact_shapes_cross_zero_upward_at_origin():
    period = 1e-9
    for shape in (WaveformShape.SINE, WaveformShape.TRIANGLE, WaveformShape.SAWTOOTH):
        signal = DriveSignal(Waveform(shape), 1 / period, 1.0)
        assert synth_drive(signal, 0.0) == pytest.approx(0.0, abs=1e-12)
        assert synth_drive(signal, 1e-13) > 0

    triangle = DriveSignal(Waveform(WaveformShape.TRIANGLE), 1 / period, 1.0)
    assert synth_drive(triangle, period / 4) == pytest.approx(1.0)
    assert synth_drive(triangle, 3 * period / 4) == pytest.approx(-1.0)

    sawtooth = DriveSignal(Waveform(WaveformShape.SAWTOOTH), 1 / period, 1.0)
    assert synth_drive(sawtooth, 0.4 * period) == pytest.approx(0.8)


@pytest.mark.parametrize("shape", [WaveformShape.TRIANGLE, WaveformShape.SAWTOOTH])
def test_fourier_series_converges_to_exact_shape(shape):
    t = np.linspace(0.05e-9, 0.4e-9, 50)
    exact = DriveSignal(Waveform(shape), 1e9, 1.0).voltage(t)
    series = DriveSignal(Waveform(shape), 1e9, 1.0, harmonics_kept=400).voltage(t)
    assert np.max(np.abs(series - exact)) < 5e-3


def test_fundamental_triangle_is_scaled_sine():
    t = np.linspace(0, 2e-9, 101)
    fundamental = DriveSignal(Waveform(WaveformShape.TRIANGLE), 1e9, 1.0, harmonics_kept=1)
    np.testing.assert_allclose(fundamental.voltage(t), 8 / np.pi**2 * np.sin(2 * np.pi * 1e9 * t))


def test_synth_drive_keeps_shape():
    ramp = LinearRamp(slope=2.0, offset=1.0)
    assert synth_drive(ramp, 3.0) == 7.0
    assert synth_drive(ramp, np.zeros((2, 3))).shape == (2, 3)


@pytest.mark.parametrize("multiple", [1, 2, 3])
def test_integer_drive_multiple_leaves_no_differential_phase(pulse_pair, multiple):
    _, results = scan_phases(pulse_pair, drive(multiple=multiple), V_PI, n_points=16)
    for result in results:
        assert abs(result.differential_phase) < 1e-6
        assert result.shift_late == pytest.approx(result.shift_early, rel=1e-9, abs=1.0)


def test_periodic_sawtooth_gives_zero_differential(pulse_pair):
    sawtooth = drive(WaveformShape.SAWTOOTH, multiple=1)
    for phase in np.linspace(0, 2 * np.pi, 8, endpoint=False):
        value = differential_phase_experiment(pulse_pair, sawtooth.with_phase(phase), V_PI)
        assert abs(value) < 1e-6


def test_non_integer_multiple_adds_differential_phase(pulse_pair):
    phase, value = find_max_differential(pulse_pair, drive(multiple=1.75), V_PI, n_points=32)
    assert 0 <= phase < 2 * np.pi
    assert abs(value) > 0.1

    _, results = scan_phases(pulse_pair, drive(multiple=1.75), V_PI, n_points=32)
    assert abs(value) >= max(abs(r.differential_phase) for r in results) - 1e-9


def test_sine_shift_versus_phase_is_sinusoidal(pulse_pair):
    sweep = shift_vs_phase(pulse_pair, drive(), V_PI, n_points=36)
    assert sweep.fit.r2_deficit < 1e-6
    assert len(sweep.shifts) == 36

    frame = sweep.to_frame()
    assert list(frame.columns) == [
        "phase_offset [rad]",
        "centroid_shift [Hz]",
        "sinusoid_fit [Hz]",
    ]
    assert np.allclose(frame["sinusoid_fit [Hz]"], frame["centroid_shift [Hz]"], rtol=0, atol=1e7)


def test_fundamental_triangle_shift_versus_phase_is_sinusoidal(pulse_pair):
    sweep = shift_vs_phase(pulse_pair, drive(WaveformShape.TRIANGLE, harmonics=1), V_PI)
    assert sweep.fit.r2_deficit < 1e-6


def test_shift_magnitude_matches_averaged_serrodyne_estimate(pulse_pair):
    frequency = 2 / BIN_SPACING
    sigma = PULSE_FWHM / FWHM_PER_SIGMA_EXACT
    averaging = math.exp(-((2 * math.pi * frequency * sigma) ** 2) / 2)
    expected = math.pi * PEAK_VOLTAGE * frequency / V_PI * averaging

    sweep = shift_vs_phase(pulse_pair, drive(), V_PI, n_points=36)
    assert sweep.fit.amplitude == pytest.approx(expected, rel=0.01)
    assert sweep.fit.amplitude == pytest.approx(1.31e9, rel=0.01)


def test_linear_ramp_gives_slope_shift_and_offset_phase(pulse_pair):
    offset = max_voltage_offset(0.1, V_PI)
    slope = 2e10
    result = shear(pulse_pair, LinearRamp(slope, offset), V_PI)
    assert result.shift_early == pytest.approx(slope / (2 * V_PI), rel=1e-9)
    assert result.shift_late == pytest.approx(slope / (2 * V_PI), rel=1e-9)
    assert result.phase_early == pytest.approx(0.1, abs=1e-9)
    assert result.centroid_shift == pytest.approx(slope / (2 * V_PI), rel=1e-4)


def test_zero_drive_changes_nothing(pulse_pair):
    result = shear(pulse_pair, LinearRamp(0.0), V_PI)
    assert result.shift_early == 0.0
    assert result.differential_phase == 0.0
    assert abs(result.centroid_shift) < 1.0


def test_empty_bin_is_degenerate(pulse_pair):
    early_only = np.where(pulse_pair.times < BIN_SPACING / 2, pulse_pair.envelope, 0)
    with pytest.raises(FitDegenerateError):
        shear(pulse_pair.with_envelope(early_only), drive(), V_PI)


def test_invalid_inputs(pulse_pair):
    with pytest.raises(InvalidParameterError):
        shear(pulse_pair, drive(), 0.0)
    with pytest.raises(InvalidParameterError):
        gaussian_pair(PULSE_FWHM, 3 * PULSE_FWHM)
    with pytest.raises(InvalidParameterError):
        gaussian_pair(PULSE_FWHM, BIN_SPACING, n_samples=512)
    with pytest.raises(InvalidParameterError):
        shift_vs_phase(pulse_pair, drive(), V_PI, n_points=4)
    with pytest.raises(InvalidParameterError):
        DriveSignal(Waveform(), frequency=0.0, peak_voltage=1.0)


def test_pulse_pair_geometry(pulse_pair):
    assert pulse_pair.spacing == pytest.approx(BIN_SPACING, rel=1e-12)
    assert pulse_pair.bin_centers[0] == 0.0
    assert pulse_pair.sample_period <= PULSE_FWHM / 20
    half = pulse_pair.intensity.max() / 2
    early = pulse_pair.times[(pulse_pair.intensity >= half) & (pulse_pair.times < BIN_SPACING / 2)]
    assert early[-1] - early[0] == pytest.approx(PULSE_FWHM, rel=0.01)


def test_trace_export(pulse_pair, tmp_path):
    path = export_trace(pulse_pair, drive(), tmp_path / "trace.csv")
    frame = pd.read_csv(path)
    assert list(frame.columns) == ["time [s]", "voltage [V]", "intensity [a.u.]"]
    assert len(frame) == len(pulse_pair.envelope)


@pytest.mark.parametrize("shape", [WaveformShape.SINE, WaveformShape.SAWTOOTH])
def test_modulation_preserves_energy(pulse_pair, shape):
    sheared = modulate(pulse_pair, applied_phase(pulse_pair, drive(shape), V_PI))
    assert sheared.energy == pytest.approx(pulse_pair.energy, rel=1e-12)


@pytest.mark.parametrize("multiple", [0.02, 0.005])
def test_slow_drive_shift_approaches_ramp_slope(pulse_pair, multiple):
    # The early pulse sits on the sine's zero crossing, where the slope is 2*pi*f*V_peak
    slow = drive(multiple=multiple)
    slope = 2 * math.pi * slow.frequency * PEAK_VOLTAGE
    result = shear(pulse_pair, slow, V_PI)
    assert result.shift_early == pytest.approx(slope / (2 * V_PI), rel=0.01)


def test_fundamental_triangle_amplitude_is_scaled_sine(pulse_pair):
    sine = shift_vs_phase(pulse_pair, drive(), V_PI)
    triangle = shift_vs_phase(pulse_pair, drive(WaveformShape.TRIANGLE, harmonics=1), V_PI)
    assert triangle.fit.amplitude < sine.fit.amplitude
    assert triangle.fit.amplitude / sine.fit.amplitude == pytest.approx(8 / math.pi**2, rel=1e-6)


def test_zero_peak_voltage_sweep_is_flat(pulse_pair):
    silent = DriveSignal(Waveform(WaveformShape.SINE), 2 / BIN_SPACING, 0.0)
    sweep = shift_vs_phase(pulse_pair, silent, V_PI, n_points=12)
    assert np.all(sweep.shifts == 0.0)
    assert sweep.fit.amplitude == 0.0
