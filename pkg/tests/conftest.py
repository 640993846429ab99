"""Shared fixtures"""
import pytest

from design.core import DesignParams, derive_design
from design.waveforms import Waveform, WaveformShape
from rates.model import Modulator, RateParams
from shearing.pulses import gaussian_pair

PULSE_FWHM = 200e-12
BIN_SPACING = 2.1e-9


@pytest.fixture
def default_params():
    return DesignParams()


@pytest.fixture
def sine_design(default_params):
    return derive_design(default_params)


@pytest.fixture
def sawtooth_design():
    return derive_design(DesignParams(waveform=Waveform(WaveformShape.SAWTOOTH)))


@pytest.fixture
def single_bin_design():
    """Zero RF power leaves only the center bin."""
    return derive_design(DesignParams(rf_power=0.0))


@pytest.fixture
def lossless_rates():
    return RateParams(
        pair_prob=0.01,
        eta_a=1.0,
        eta_b=1.0,
        herald_eta=1.0,
        circulator_loss=0.0,
        modulator=Modulator(1.0, 0.0),
    )


@pytest.fixture
def pulse_pair():
    return gaussian_pair(PULSE_FWHM, BIN_SPACING)
