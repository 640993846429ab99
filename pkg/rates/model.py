"""Analytic heralded-coincidence rates.

A heralded swap of two SPDC sources needs a pair from each (P_p^2), both
heralding photons detected (eta_H^2) and a linear-optics BSM (1/2); the
delivered photons then survive eta_A and eta_B. The multiplexed source runs
one such swap per frequency bin: bins deeper in the filter chain lose
circulator passes on the heralding path, and the feedforward modulator's
insertion loss sits on one output path.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence

from app.constants import BSM_EFFICIENCY, DEFAULT_CIRCULATOR_LOSS_DB, MAX_FIRST_ORDER_PAIR_PROB
from app.errors import InvalidParameterError
from design.core import DesignParams, DesignPoint, derive_design
from design.feedforward import center_first_bins, chain_depth
from utils.logger import get_logger
from utils.math_utils import db_to_linear

logger = get_logger(__name__)


@dataclass(frozen=True)
class Modulator:
    """Feedforward phase modulator.

    Attributes:
        v_pi: Pi-voltage, V
        insertion_loss: Insertion loss, dB
        name: Label used in reports and sweep headers
    """

    v_pi: float
    insertion_loss: float
    name: str = ""

    def __post_init__(self):
        if not (self.v_pi > 0 and math.isfinite(self.v_pi)):
            raise InvalidParameterError("modulator.v_pi", f"must be > 0, got {self.v_pi}")
        if not (self.insertion_loss >= 0 and math.isfinite(self.insertion_loss)):
            raise InvalidParameterError(
                "modulator.insertion_loss", f"must be >= 0, got {self.insertion_loss}"
            )

    @property
    def label(self) -> str:
        return self.name or f"{self.v_pi:g}V-{self.insertion_loss:g}dB"

    @property
    def transmission(self) -> float:
        return db_to_linear(self.insertion_loss)


# Commercial devices and the low-V_pi, low-loss device class
MODULATOR_3V_3DB = Modulator(3.0, 3.0, "3V-3dB")
MODULATOR_1V_6DB = Modulator(1.0, 6.0, "1V-6dB")
MODULATOR_HERO = Modulator(0.5, 1.0, "hero")
STANDARD_MODULATORS = (MODULATOR_3V_3DB, MODULATOR_1V_6DB, MODULATOR_HERO)


@dataclass(frozen=True)
class RateParams:
    """Loss and brightness parameters of the rate model.

    Attributes:
        pair_prob: Pair probability per pulse per bin per source
        eta_a: Output transmission to node A
        eta_b: Output transmission to node B (modulator loss applied separately)
        herald_eta: Base heralding-path transmission per detector
        circulator_loss: Loss per chained circulator pass, dB
        modulator: Feedforward modulator
        bsm_eff: Bell-state measurement success probability
    """

    pair_prob: float = 0.01
    eta_a: float = 1.0
    eta_b: float = 1.0
    herald_eta: float = 1.0
    circulator_loss: float = DEFAULT_CIRCULATOR_LOSS_DB
    modulator: Modulator = field(default_factory=lambda: MODULATOR_1V_6DB)
    bsm_eff: float = BSM_EFFICIENCY

    def check_ranges(self) -> "RateParams":
        """Raise InvalidParameterError for out-of-range fields."""
        for name in ("pair_prob", "eta_a", "eta_b", "herald_eta"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise InvalidParameterError(name, f"must lie in [0, 1], got {value}")
        if not 0 < self.bsm_eff <= 1:
            raise InvalidParameterError("bsm_eff", f"must lie in (0, 1], got {self.bsm_eff}")
        if not (self.circulator_loss >= 0 and math.isfinite(self.circulator_loss)):
            raise InvalidParameterError(
                "circulator_loss", f"must be >= 0, got {self.circulator_loss}"
            )
        return self

    def validate(self) -> "RateParams":
        """check_ranges, plus a warning where the first-order model is optimistic."""
        self.check_ranges()
        if self.pair_prob > MAX_FIRST_ORDER_PAIR_PROB:
            logger.warning(
                f"Pair probability {self.pair_prob} exceeds {MAX_FIRST_ORDER_PAIR_PROB}: "
                f"multi-pair events make the first-order rate model optimistic"
            )
        return self

    def herald_transmission(self, depth: int) -> float:
        """Heralding-path transmission of one detector at chain depth `depth`."""
        return self.herald_eta * db_to_linear(depth * self.circulator_loss)

    def herald_probability(self, depth: int) -> float:
        """Probability per pulse of a successful herald in a bin at `depth`."""
        photon = self.pair_prob * self.herald_transmission(depth)
        return photon**2 * self.bsm_eff

    @property
    def output_transmission(self) -> float:
        """Both delivered photons survive, modulator loss included."""
        return self.eta_a * self.eta_b * self.modulator.transmission


@dataclass(frozen=True)
class RateReport:
    """Heralded-coincidence rates for one design.

    Attributes:
        basic_rate: Single-bin, modulator-free swap rate, Hz
        zalm_rate: Sum of per-bin rates, Hz
        per_bin_rates: Rate of each bin in center-first order, Hz
        bin_indices: Bin index of each per_bin_rates entry
        bins_used: Number of bins summed (odd)
    """

    basic_rate: float
    zalm_rate: float
    per_bin_rates: List[float]
    bin_indices: List[int]
    bins_used: int

    @property
    def multiplexing_gain(self) -> float:
        return self.zalm_rate / self.basic_rate if self.basic_rate > 0 else 0.0


def basic_rate(design: DesignPoint, params: RateParams) -> float:
    """Heralded rate of a single-bin entanglement swap with no modulator.

    R_P * (P_p * eta_H)^2 * bsm_eff * eta_A * eta_B.
    """
    params.validate()
    return design.pump_rate * params.herald_probability(0) * params.eta_a * params.eta_b


def bin_rate(design: DesignPoint, params: RateParams, index: int) -> float:
    """Heralded-coincidence rate contributed by frequency bin `index`."""
    depth = chain_depth(index)
    return design.pump_rate * params.herald_probability(depth) * params.output_transmission


def zalm_rate(design: DesignPoint, params: RateParams) -> RateReport:
    """Multiplexed heralded-coincidence rate summed over the usable bins.

    Args:
        design: Derived design point (supplies R_P and bins_usable)
        params: Rate parameters

    Returns:
        RateReport with per-bin rates in center-first chain order
    """
    params.validate()
    if design.bins_usable < 1:
        raise InvalidParameterError("bins_usable", f"must be >= 1, got {design.bins_usable}")

    indices = center_first_bins(design.bins_usable)
    per_bin = [bin_rate(design, params, b) for b in indices]
    return RateReport(
        basic_rate=basic_rate(design, params),
        zalm_rate=float(math.fsum(per_bin)),
        per_bin_rates=per_bin,
        bin_indices=indices,
        bins_used=len(indices),
    )


@dataclass(frozen=True)
class ModulatorRate:
    """One modulator's design and rates."""

    modulator: Modulator
    design: DesignPoint
    report: RateReport


@dataclass(frozen=True)
class ModulatorComparison:
    """Rates for several modulators at otherwise fixed parameters.

    Attributes:
        entries: One ModulatorRate per modulator, in input order
        ranking: Modulator labels by decreasing zalm_rate (stable on ties)
    """

    entries: List[ModulatorRate]
    ranking: List[str]

    def rates(self) -> Dict[str, float]:
        return {e.modulator.label: e.report.zalm_rate for e in self.entries}

    def outrates(self, first: str, second: str) -> bool:
        rates = self.rates()
        return rates[first] > rates[second]


def compare_modulators(
    design_params: DesignParams,
    rate_params: RateParams,
    modulators: Optional[Sequence[Modulator]] = None,
) -> ModulatorComparison:
    """Evaluate zalm_rate for each modulator at fixed RF power, waveform and losses.

    The design is rederived per modulator since V_pi sets the shift and hence
    the number of usable bins.

    Args:
        design_params: Shared hardware parameters (their v_pi is replaced)
        rate_params: Shared rate parameters (their modulator is replaced)
        modulators: Devices to compare; defaults to STANDARD_MODULATORS

    Returns:
        ModulatorComparison
    """
    modulators = list(modulators if modulators is not None else STANDARD_MODULATORS)
    entries = []
    for modulator in modulators:
        design = derive_design(replace(design_params, v_pi=modulator.v_pi))
        report = zalm_rate(design, replace(rate_params, modulator=modulator))
        entries.append(ModulatorRate(modulator, design, report))

    ranked = sorted(entries, key=lambda e: e.report.zalm_rate, reverse=True)
    ranking = [e.modulator.label for e in ranked]
    summary = ", ".join(f"{e.modulator.label}={e.report.zalm_rate:.4g} Hz" for e in ranked)
    logger.debug(f"Modulator ranking at {design_params.rf_power:g} W: {summary}")
    return ModulatorComparison(entries=entries, ranking=ranking)
