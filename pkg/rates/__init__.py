"""Analytic heralded-coincidence rate model"""
from rates.model import (
    MODULATOR_1V_6DB,
    MODULATOR_3V_3DB,
    MODULATOR_HERO,
    STANDARD_MODULATORS,
    Modulator,
    ModulatorComparison,
    RateParams,
    RateReport,
    basic_rate,
    compare_modulators,
    zalm_rate,
)

__all__ = [
    "Modulator",
    "MODULATOR_1V_6DB",
    "MODULATOR_3V_3DB",
    "MODULATOR_HERO",
    "STANDARD_MODULATORS",
    "ModulatorComparison",
    "RateParams",
    "RateReport",
    "basic_rate",
    "compare_modulators",
    "zalm_rate",
]
