"""Difference-set Gabor frames, Gabor fusion frames and sparse recovery."""

from ._dsframes import (
    Error,
    basis_pursuit,
    block_basis_pursuit,
    catalog,
    catalog_lookup,
    derive_params,
    fusion_operator,
    fusion_report,
    gabor_frame,
    generator,
    is_etf,
    mutual_coherence,
    predicted_coherence,
    quadratic_residue_set,
    run_classic_experiment,
    run_fusion_experiment,
    search_difference_set,
    verify_difference_set,
    welch_bound,
)

__version__ = "0.3.0"

__all__ = [
    "Error",
    "basis_pursuit",
    "block_basis_pursuit",
    "catalog",
    "catalog_lookup",
    "derive_params",
    "fusion_operator",
    "fusion_report",
    "gabor_frame",
    "generator",
    "is_etf",
    "mutual_coherence",
    "predicted_coherence",
    "quadratic_residue_set",
    "run_classic_experiment",
    "run_fusion_experiment",
    "search_difference_set",
    "verify_difference_set",
    "welch_bound",
]
