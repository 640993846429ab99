"""Joint spectral amplitude, Schmidt purity and marginals"""
from spectral.export import export_csv, export_pgm, grid_frame, to_pgm
from spectral.jsa import (
    Axis,
    FilterSpec,
    JsaGrid,
    JsaParams,
    build_jsa,
    marginal,
    marginal_fwhm,
    purity,
    schmidt_number,
)

__all__ = [
    "Axis",
    "FilterSpec",
    "JsaGrid",
    "JsaParams",
    "build_jsa",
    "purity",
    "schmidt_number",
    "marginal",
    "marginal_fwhm",
    "grid_frame",
    "export_csv",
    "export_pgm",
    "to_pgm",
]
