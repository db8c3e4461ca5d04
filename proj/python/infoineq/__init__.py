"""Generalized Cramer-Rao, Bhattacharyya and HCR bounds with escort families."""

from ._infoineq import (
    DomainError,
    Error,
    InvalidArgument,
    NotPositiveDefinite,
    NoValidEscort,
    SupportViolation,
    SynthesizedDensity,
    attainment_suite,
    bound,
    list_models,
    mc_expectation,
    reduction_suite,
    run_cli,
    synth_location,
    synth_scale,
    variance,
)

__all__ = [
    "DomainError",
    "Error",
    "InvalidArgument",
    "NotPositiveDefinite",
    "NoValidEscort",
    "SupportViolation",
    "SynthesizedDensity",
    "attainment_suite",
    "bound",
    "list_models",
    "mc_expectation",
    "reduction_suite",
    "run_cli",
    "synth_location",
    "synth_scale",
    "variance",
]
