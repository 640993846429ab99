"""Event-level Monte Carlo of the multiplexed heralding pipeline.

Per pulse and per frequency bin both sources may emit a pair; a herald in
that bin needs both heralding photons to survive the filter chain and the
BSM to succeed. The first heralded bin in center-first order is consumed,
provided the feedforward can shift it onto the center bin; the delivered
photons then have to survive their output paths. Feedforward dead time is
taken as zero.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from app.constants import MC_BATCH_CELLS, MC_MIN_EXPECTED_EVENTS, MC_Z_THRESHOLD
from design.core import DesignPoint
from design.feedforward import center_first_bins, chain_depth, is_feasible
from rates.model import RateParams, RateReport, zalm_rate
from simulation.streams import check_run, split_pulses, worker_generators
from utils.io import write_csv_atomic, write_text_atomic
from utils.logger import get_logger

logger = get_logger(__name__)

# Uniform draws per (pulse, bin): pair A, pair B, herald A, herald B, BSM
_BIN_STAGES = 5


@dataclass(frozen=True)
class SimConfig:
    """Monte Carlo run settings.

    Attributes:
        design: Design point (R_P, bins, feedforward range)
        rate_params: Brightness and loss parameters
        n_pulses: Pump pulses to simulate
        seed: 64-bit unsigned seed
        workers: Worker threads; results depend on (seed, workers)
    """

    design: DesignPoint
    rate_params: RateParams = field(default_factory=RateParams)
    n_pulses: int = 1_000_000
    seed: int = 0
    workers: int = 1

    def validate(self) -> "SimConfig":
        check_run(self.n_pulses, self.seed, self.workers)
        self.rate_params.validate()
        return self


@dataclass(frozen=True)
class SimResult:
    """Outcome of a Monte Carlo run.

    Attributes:
        bin_indices: Bins in center-first order
        heralds_per_bin: Consumed heralds per bin, aligned with bin_indices
        coincidences: Heralded pulses whose delivered photons both survived
        estimated_rate: coincidences / pulses_run * R_P, Hz
        std_error: Binomial standard error of estimated_rate, Hz
        pulses_run: Pulses simulated
        seed_used: Seed the streams were derived from
        workers: Worker count the streams were split over
        infeasible_heralds: Heralds dropped because the feedforward could not reach them
    """

    bin_indices: List[int]
    heralds_per_bin: List[int]
    coincidences: int
    estimated_rate: float
    std_error: float
    pulses_run: int
    seed_used: int
    workers: int
    infeasible_heralds: int = 0

    @property
    def total_heralds(self) -> int:
        return int(sum(self.heralds_per_bin))

    @property
    def herald_fraction(self) -> float:
        return self.total_heralds / self.pulses_run

    def to_text(self) -> str:
        """key = value lines, one metric per line, units in the key."""
        lines = [
            f"pulses_run = {self.pulses_run}",
            f"seed_used = {self.seed_used}",
            f"workers = {self.workers}",
            f"heralds_total = {self.total_heralds}",
            f"infeasible_heralds = {self.infeasible_heralds}",
            f"coincidences = {self.coincidences}",
            f"estimated_rate [Hz] = {self.estimated_rate:.10g}",
            f"std_error [Hz] = {self.std_error:.10g}",
        ]
        return "\n".join(lines) + "\n"

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"bin_index": self.bin_indices, "heralds [count]": self.heralds_per_bin}
        )


@dataclass(frozen=True)
class ConvergenceReport:
    """Monte Carlo estimate against the analytic rate.

    Attributes:
        estimated_rate: Simulated rate, Hz
        analytic_rate: Analytic zalm_rate, Hz
        std_error: Standard deviation used for the z-score, Hz
        z_score: (estimated - analytic) / std_error
        passed: |z| below the threshold
        expected_events: Analytic coincidences expected over the run
        low_statistics: Fewer expected events than a meaningful comparison needs
        result: Underlying SimResult
    """

    estimated_rate: float
    analytic_rate: float
    std_error: float
    z_score: float
    passed: bool
    expected_events: float
    low_statistics: bool
    result: SimResult

    def to_text(self) -> str:
        return self.result.to_text() + "\n".join(
            [
                f"analytic_rate [Hz] = {self.analytic_rate:.10g}",
                f"z_score = {self.z_score:.6g}",
                f"expected_events = {self.expected_events:.6g}",
                f"low_statistics = {str(self.low_statistics).lower()}",
                f"passed = {str(self.passed).lower()}",
            ]
        ) + "\n"


@dataclass(frozen=True)
class _BinModel:
    """Per-bin probabilities, in center-first order."""

    indices: List[int]
    herald_transmission: np.ndarray
    feasible: np.ndarray


def _bin_model(design: DesignPoint, params: RateParams) -> _BinModel:
    indices = center_first_bins(design.bins_usable)
    transmission = np.array([params.herald_transmission(chain_depth(b)) for b in indices])
    feasible = np.array([is_feasible(b, design) for b in indices])
    return _BinModel(indices, transmission, feasible)


def _simulate_batch(
    rng: np.random.Generator, pulses: int, model: _BinModel, params: RateParams
) -> Tuple[np.ndarray, int, int]:
    """Simulate `pulses` pulses.

    Returns:
        Tuple of (consumed heralds per bin, coincidences, infeasible heralds dropped)
    """
    n_bins = len(model.indices)
    draws = rng.random((_BIN_STAGES, pulses, n_bins))
    outputs = rng.random((2, pulses))

    pair_a = draws[0] < params.pair_prob
    pair_b = draws[1] < params.pair_prob
    herald_a = draws[2] < model.herald_transmission
    herald_b = draws[3] < model.herald_transmission
    bsm = draws[4] < params.bsm_eff
    heralded = pair_a & pair_b & herald_a & herald_b & bsm

    has_herald = heralded.any(axis=1)
    first = np.argmax(heralded, axis=1)
    usable = has_herald & model.feasible[first]
    dropped = int(np.count_nonzero(has_herald & ~usable))

    delivered = (outputs[0] < params.eta_a) & (
        outputs[1] < params.eta_b * params.modulator.transmission
    )
    coincidences = int(np.count_nonzero(usable & delivered))
    heralds = np.bincount(first[usable], minlength=n_bins)
    return heralds, coincidences, dropped


def batch_pulses(n_bins: int) -> int:
    """Pulses per batch so a batch draws at most MC_BATCH_CELLS pulse-bin cells."""
    return max(1, MC_BATCH_CELLS // max(1, n_bins))


def _run_worker(
    rng: np.random.Generator, pulses: int, model: _BinModel, params: RateParams
) -> Tuple[np.ndarray, int, int]:
    heralds = np.zeros(len(model.indices), dtype=np.int64)
    coincidences = 0
    dropped = 0
    remaining = pulses
    size = batch_pulses(len(model.indices))
    while remaining > 0:
        batch = min(remaining, size)
        h, c, d = _simulate_batch(rng, batch, model, params)
        heralds += h
        coincidences += c
        dropped += d
        remaining -= batch
    return heralds, coincidences, dropped


def run(config: SimConfig) -> SimResult:
    """Simulate config.n_pulses pump pulses.

    Args:
        config: Run settings

    Returns:
        SimResult; identical for identical (seed, workers)

    Raises:
        InvalidParameterError: If the config is invalid
    """
    config.validate()
    params = config.rate_params
    model = _bin_model(config.design, params)
    generators = worker_generators(config.seed, config.workers)
    shares = split_pulses(config.n_pulses, config.workers)

    if config.workers == 1:
        outcomes = [_run_worker(generators[0], shares[0], model, params)]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as executor:
            outcomes = list(
                executor.map(
                    lambda job: _run_worker(job[0], job[1], model, params),
                    zip(generators, shares),
                )
            )

    heralds = np.sum([o[0] for o in outcomes], axis=0)
    coincidences = sum(o[1] for o in outcomes)
    dropped = sum(o[2] for o in outcomes)
    if dropped:
        logger.warning(f"{dropped} heralds fell outside the feedforward range and were dropped")

    n = config.n_pulses
    pump_rate = config.design.pump_rate
    p_hat = coincidences / n
    result = SimResult(
        bin_indices=list(model.indices),
        heralds_per_bin=[int(h) for h in heralds],
        coincidences=int(coincidences),
        estimated_rate=p_hat * pump_rate,
        std_error=pump_rate * math.sqrt(p_hat * (1 - p_hat) / n),
        pulses_run=n,
        seed_used=config.seed,
        workers=config.workers,
        infeasible_heralds=int(dropped),
    )
    logger.info(
        f"Simulated {n} pulses over {len(model.indices)} bins: "
        f"{result.coincidences} coincidences, rate {result.estimated_rate:.4g} "
        f"+- {result.std_error:.2g} Hz"
    )
    return result


def convergence_check(config: SimConfig, oracle: Optional[RateReport] = None) -> ConvergenceReport:
    """Run the simulation and score it against the analytic rate.

    The z-score uses the binomial spread implied by the analytic rate, or the
    empirical spread when the analytic rate is zero.

    Args:
        config: Run settings
        oracle: Analytic rates; defaults to zalm_rate(config.design, config.rate_params)

    Returns:
        ConvergenceReport
    """
    result = run(config)
    if oracle is None:
        oracle = zalm_rate(config.design, config.rate_params)

    pump_rate = config.design.pump_rate
    n = result.pulses_run
    p0 = min(1.0, oracle.zalm_rate / pump_rate)
    sigma = pump_rate * math.sqrt(p0 * (1 - p0) / n)
    if sigma == 0:
        sigma = result.std_error

    difference = result.estimated_rate - oracle.zalm_rate
    if sigma > 0:
        z = difference / sigma
    else:
        z = 0.0 if difference == 0 else math.copysign(math.inf, difference)

    expected = p0 * n
    low = expected < MC_MIN_EXPECTED_EVENTS
    if low:
        logger.warning(
            f"Only {expected:.3g} coincidences expected over {n} pulses; "
            f"the comparison has little statistical power"
        )

    return ConvergenceReport(
        estimated_rate=result.estimated_rate,
        analytic_rate=oracle.zalm_rate,
        std_error=sigma,
        z_score=z,
        passed=abs(z) < MC_Z_THRESHOLD,
        expected_events=expected,
        low_statistics=low,
        result=result,
    )


def write_result(
    result: Union[SimResult, ConvergenceReport],
    path: Union[str, Path],
    bins_path: Optional[Union[str, Path]] = None,
) -> Path:
    """Write the key-value summary and, optionally, per-bin counts as CSV."""
    sim = result.result if isinstance(result, ConvergenceReport) else result
    if bins_path is not None:
        write_csv_atomic(bins_path, sim.to_frame())
    return write_text_atomic(path, result.to_text())
