"""Kernel estimation of a frontier from Poisson points."""

import json

from ._core import (
    Frontier,
    Kernel,
    cell_max_cdf,
    cell_maxima,
    confidence_interval,
    estimate,
    expected_cell_max_flat,
    kernel_names,
    normalization,
    run_experiment,
    sample_points,
    select_hyperparams,
)

__version__ = "0.1.0"


def experiment(**kwargs):
    """run_experiment with the report parsed into a dict."""
    return json.loads(run_experiment(**kwargs))


__all__ = [
    "Frontier",
    "Kernel",
    "cell_max_cdf",
    "cell_maxima",
    "confidence_interval",
    "estimate",
    "expected_cell_max_flat",
    "experiment",
    "kernel_names",
    "normalization",
    "run_experiment",
    "sample_points",
    "select_hyperparams",
]
