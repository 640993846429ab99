"""Subcommand implementations.

Each command takes a resolved RunConfig, writes its artifacts atomically and
returns the summary text the entry point prints to stdout.
"""

import math
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from app.run_config import RunConfig
from cli.sweep import SweepSpec, run_sweep
from design.core import bins_closed_form, derive_design
from design.feedforward import shift_schedule
from design.noise import noise_spec
from design.waveforms import ALL_SHAPES
from rates.model import RateReport, compare_modulators, zalm_rate
from shearing.simulator import (
    export_trace,
    find_max_differential,
    fit_sinusoid,
    scan_frame,
    scan_phases,
)
from simulation.montecarlo import SimConfig, convergence_check, write_result
from spectral.export import export_csv, export_pgm
from spectral.jsa import Axis, build_jsa, marginal_fwhm, purity, schmidt_number
from utils.io import write_csv_atomic
from utils.logger import get_logger

logger = get_logger(__name__)

# DesignPoint field -> (display unit, SI scale)
DESIGN_DISPLAY = {
    "bin_spacing": ("GHz", 1e9),
    "bin_pulse_width": ("ps", 1e-12),
    "time_bin_spacing": ("ps", 1e-12),
    "drive_freq": ("GHz", 1e9),
    "pump_rate": ("MHz", 1e6),
    "peak_voltage": ("V", 1.0),
    "freq_shift": ("GHz", 1e9),
    "bins_real": ("1", 1.0),
    "bins_usable": ("1", 1.0),
}


def sibling(path: Path, suffix: str) -> Path:
    """out.csv -> out_<suffix>"""
    return path.with_name(f"{path.stem}_{suffix}")


def design_table(config: RunConfig) -> pd.DataFrame:
    """Every DesignPoint field per waveform, in display units."""
    points = {
        shape.value: derive_design(config.design_params(shape)).as_dict() for shape in ALL_SHAPES
    }
    rows = []
    for name, (unit, scale) in DESIGN_DISPLAY.items():
        row = {"quantity": f"{name} [{unit}]"}
        for shape, values in points.items():
            row[shape] = values[name] / scale
        rows.append(row)

    closed = bins_closed_form(config.design_params())
    rows.append(
        {"quantity": "bins_closed_form [1]", **{s.value: closed[s] for s in ALL_SHAPES}}
    )
    return pd.DataFrame(rows)


def cmd_design(config: RunConfig, out: Optional[Path] = None) -> str:
    """Design table for every waveform plus the feedforward schedule of the configured one."""
    table = design_table(config)
    if out is not None:
        write_csv_atomic(out, table)

    design = derive_design(config.design_params())
    schedule = shift_schedule(design)
    settings = ", ".join(
        f"{s.index:+d}:{s.attenuation:.3f}{'(flip)' if s.phase_flip else ''}" for s in schedule
    )
    v_pi = config["design.v_pi"]
    # Ramp slope A = 2 * V_pi * shift
    noise = noise_spec(config["design.allowed_phase"], v_pi, slope=2 * v_pi * design.freq_shift)
    return (
        table.to_string(index=False, float_format=lambda v: f"{v:.6g}")
        + f"\nfeedforward ({design.waveform}, bin:attenuation): {settings}\n"
        + f"voltage_offset_bound={noise.offset * 1e3:.2f} mV "
        f"(allowed_phase={math.degrees(noise.allowed_phase):.2f} deg, v_pi={v_pi:g} V, "
        f"ramp_shift={noise.frequency_shift / 1e9:.4f} GHz)\n"
    )


def cmd_sweep(
    config: RunConfig,
    spec: SweepSpec,
    outputs: Sequence[str],
    out: Optional[Path] = None,
    workers: int = 1,
) -> str:
    """Sweep table; written to `out` or returned as CSV text."""
    frame = run_sweep(config, spec, outputs, workers)
    if out is None:
        return frame.to_csv(index=False, float_format="%.10g")
    write_csv_atomic(out, frame)
    return f"wrote {len(frame)} rows x {len(frame.columns)} columns to {out}\n"


def cmd_jsa(config: RunConfig, out: Optional[Path] = None) -> str:
    """Build the JSA, report purity and marginal widths, export the grid."""
    params = config.jsa_params()
    grid = build_jsa(params)
    value = purity(grid)

    if out is not None:
        export_csv(grid, out)
        export_pgm(grid, out.with_suffix(".pgm"))

    return (
        f"purity={value:.4f} schmidt_number={schmidt_number(grid):.4f} "
        f"signal_marginal_fwhm={marginal_fwhm(grid, Axis.SIGNAL) / 1e9:.3f} GHz "
        f"idler_marginal_fwhm={marginal_fwhm(grid, Axis.IDLER) / 1e9:.3f} GHz "
        f"filter_fwhm={params.filter.fwhm / 1e9:.3f} GHz\n"
    )


def _rate_rows(labels: List[str], reports: List[RateReport]) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "configuration": labels,
            "bins_used [1]": [r.bins_used for r in reports],
            "basic_rate [Hz]": [r.basic_rate for r in reports],
            "zalm_rate [Hz]": [r.zalm_rate for r in reports],
            "multiplexing_gain [1]": [r.multiplexing_gain for r in reports],
        }
    )


def cmd_rates(config: RunConfig, out: Optional[Path] = None) -> str:
    """Rates per modulator when rates.modulators is set, otherwise per waveform."""
    modulators = config.modulators()
    if modulators:
        comparison = compare_modulators(config.design_params(), config.rate_params(), modulators)
        labels = [e.modulator.label for e in comparison.entries]
        reports = [e.report for e in comparison.entries]
        footer = f"ranking: {' > '.join(comparison.ranking)}\n"
    else:
        params = config.rate_params()
        labels = [shape.value for shape in ALL_SHAPES]
        reports = [zalm_rate(derive_design(config.design_params(s)), params) for s in ALL_SHAPES]
        footer = ""

    frame = _rate_rows(labels, reports)
    if out is not None:
        write_csv_atomic(out, frame)

    lines = [
        f"{label}: zalm_rate={r.zalm_rate:.6g} Hz basic_rate={r.basic_rate:.6g} Hz "
        f"bins={r.bins_used}"
        for label, r in zip(labels, reports)
    ]
    return "\n".join(lines) + "\n" + footer


def cmd_sim(config: RunConfig, out: Optional[Path] = None) -> str:
    """Monte Carlo run scored against the analytic rate."""
    design = derive_design(config.design_params())
    sim_config = SimConfig(
        design=design,
        rate_params=config.rate_params(),
        n_pulses=config["sim.n_pulses"],
        seed=config["sim.seed"],
        workers=config["sim.workers"],
    )
    report = convergence_check(sim_config)
    if out is not None:
        write_result(report, out, sibling(out, "bins.csv"))

    return (
        f"estimated_rate={report.estimated_rate:.6g} Hz std_error={report.std_error:.3g} Hz "
        f"analytic_rate={report.analytic_rate:.6g} Hz z={report.z_score:.3f} "
        f"passed={str(report.passed).lower()}"
        + (" low_statistics=true" if report.low_statistics else "")
        + "\n"
    )


def cmd_shear(config: RunConfig, out: Optional[Path] = None, workers: int = 1) -> str:
    """Shear a time-bin pair across a full drive-phase scan."""
    train = config.pulse_train()
    drive = config.shear_drive()
    v_pi = config["shear.v_pi"]
    n_points = config["shear.phase_points"]

    phases, results = scan_phases(train, drive, v_pi, n_points, workers)
    shifts = np.array([r.centroid_shift for r in results])
    fit = fit_sinusoid(phases, shifts)

    if out is not None:
        frame = scan_frame(phases, results)
        frame["sinusoid_fit [Hz]"] = fit.evaluate(phases)
        write_csv_atomic(out, frame)
        export_trace(train, drive, sibling(out, "trace.csv"))

    best_phase, best_differential = find_max_differential(train, drive, v_pi, n_points, workers)
    return (
        f"drive={drive.waveform} {drive.frequency / 1e6:.3f} MHz "
        f"(D*dt_b={drive.frequency * train.spacing:.4g}) "
        f"shift_amplitude={fit.amplitude / 1e9:.4f} GHz fit_1-R2={fit.r2_deficit:.2e} "
        f"max_differential_phase={abs(best_differential):.3e} rad "
        f"at_drive_phase={best_phase:.4f} rad\n"
    )
