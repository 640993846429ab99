"""Analytic heralded-coincidence rates"""
import logging
import math
from dataclasses import replace

import numpy as np
import pytest

from app.errors import InvalidParameterError
from design.core import DesignParams
from rates.model import (
    MODULATOR_1V_6DB,
    MODULATOR_3V_3DB,
    MODULATOR_HERO,
    Modulator,
    RateParams,
    basic_rate,
    compare_modulators,
    zalm_rate,
)


def test_basic_rate_direct_evaluation(sine_design, lossless_rates):
    design = replace(sine_design, pump_rate=459e6)
    assert basic_rate(design, lossless_rates) == pytest.approx(22.95e3, rel=1e-3)
    assert basic_rate(sine_design, lossless_rates) == pytest.approx(22.97e3, rel=2e-3)


def test_basic_rate_scalings(sine_design, lossless_rates):
    base = basic_rate(sine_design, lossless_rates)
    assert basic_rate(sine_design, replace(lossless_rates, pair_prob=0.0)) == 0.0
    assert basic_rate(sine_design, replace(lossless_rates, eta_a=0.5)) == pytest.approx(base / 2)
    assert basic_rate(sine_design, replace(lossless_rates, herald_eta=0.5)) == pytest.approx(
        base / 4
    )


def test_lossless_multiplexing_is_linear(sine_design, lossless_rates):
    report = zalm_rate(sine_design, lossless_rates)
    assert report.bins_used == 17
    assert report.zalm_rate == pytest.approx(17 * report.basic_rate, rel=1e-12)
    assert report.multiplexing_gain == pytest.approx(17)
    assert report.zalm_rate == pytest.approx(math.fsum(report.per_bin_rates))
    assert report.bin_indices[:3] == [0, 1, -1]


def test_default_losses_bound_the_rate(sine_design):
    params = RateParams()
    report = zalm_rate(sine_design, params)
    ceiling = 17 * report.basic_rate * 10 ** (-0.6)
    floor = report.basic_rate * 10 ** (-0.6)
    assert floor < report.zalm_rate < ceiling
    assert report.per_bin_rates == sorted(report.per_bin_rates, reverse=True)
    assert all(rate >= 0 for rate in report.per_bin_rates)


def test_sine_close_to_sawtooth(sine_design, sawtooth_design):
    params = RateParams()
    ratio = zalm_rate(sine_design, params).zalm_rate / zalm_rate(sawtooth_design, params).zalm_rate
    assert 0.8 <= ratio < 1.0
    assert ratio == pytest.approx(0.975, abs=0.005)


def test_rate_non_decreasing_in_bins(sine_design):
    params = RateParams()
    rates = [
        zalm_rate(replace(sine_design, bins_usable=n), params).zalm_rate for n in (1, 3, 9, 17)
    ]
    assert np.all(np.diff(rates) > 0)


def test_pair_probability_scales_quadratically(sine_design):
    low = zalm_rate(sine_design, RateParams(pair_prob=0.01)).zalm_rate
    high = zalm_rate(sine_design, RateParams(pair_prob=0.1)).zalm_rate
    assert high / low == pytest.approx(100, rel=1e-12)


def test_large_pair_probability_warns(sine_design, caplog):
    with caplog.at_level(logging.WARNING):
        zalm_rate(sine_design, RateParams(pair_prob=0.2))
    assert "first-order rate model" in caplog.text


@pytest.mark.parametrize(
    "kwargs",
    [
        {"eta_a": 1.5},
        {"pair_prob": -0.1},
        {"herald_eta": 2.0},
        {"circulator_loss": -1.0},
        {"bsm_eff": 0.0},
    ],
)
def test_invalid_rate_params(sine_design, kwargs):
    with pytest.raises(InvalidParameterError):
        zalm_rate(sine_design, RateParams(**kwargs))


def test_invalid_modulator():
    with pytest.raises(InvalidParameterError):
        Modulator(0.0, 3.0)
    with pytest.raises(InvalidParameterError):
        Modulator(1.0, -1.0)


def test_low_power_prefers_low_insertion_loss():
    comparison = compare_modulators(DesignParams(rf_power=0.1), RateParams())
    assert comparison.outrates("3V-3dB", "1V-6dB")
    assert comparison.ranking[0] == "hero"


def test_hero_dominates_across_power():
    for power in np.geomspace(0.1, 100, 20):
        rates = compare_modulators(DesignParams(rf_power=power), RateParams()).rates()
        assert rates["hero"] >= rates["3V-3dB"]
        assert rates["hero"] >= rates["1V-6dB"]


def test_identical_modulators_tie():
    twin = Modulator(MODULATOR_3V_3DB.v_pi, MODULATOR_3V_3DB.insertion_loss, "twin")
    comparison = compare_modulators(DesignParams(), RateParams(), [MODULATOR_3V_3DB, twin])
    rates = comparison.rates()
    assert rates["3V-3dB"] == rates["twin"]
    assert comparison.ranking == ["3V-3dB", "twin"]


def test_comparison_rederives_design_per_modulator():
    comparison = compare_modulators(
        DesignParams(), RateParams(), [MODULATOR_1V_6DB, MODULATOR_HERO]
    )
    low, hero = comparison.entries
    assert hero.design.bins_usable > low.design.bins_usable
    assert hero.report.bins_used == hero.design.bins_usable
