"""Exact conditional goodness-of-fit tests for the geometric distribution."""

from ._condgof import (
    ALL_STATISTICS,
    DEFAULT_SEED,
    DegenerateSampleError,
    EstimationError,
    InfeasibleTotalError,
    ParseError,
    fit,
    fixture,
    fixture_names,
    p_values,
    parse_dataset,
    power_study,
    sample_compositions,
    statistic,
    type1_study,
)

__all__ = [
    "ALL_STATISTICS",
    "DEFAULT_SEED",
    "DegenerateSampleError",
    "EstimationError",
    "InfeasibleTotalError",
    "ParseError",
    "fit",
    "fixture",
    "fixture_names",
    "p_values",
    "parse_dataset",
    "power_study",
    "sample_compositions",
    "statistic",
    "type1_study",
]

__version__ = "0.1.0"
