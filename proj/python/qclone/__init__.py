"""Probabilistic cloning of phase-oracle states: families, efficiencies, scores."""

import json

from ._core import (
    BoolFunc,
    DimensionError,
    DomainError,
    GaugeError,
    MeasurementError,
    ValidationError,
    h_set_of,
    max_efficiencies,
    overlap,
    residual_min_eigenvalue,
)
from . import _core

__all__ = [
    "BoolFunc",
    "DimensionError",
    "DomainError",
    "GaugeError",
    "MeasurementError",
    "ValidationError",
    "analytic",
    "efficiencies",
    "family",
    "h_set_of",
    "max_efficiencies",
    "overlap",
    "residual_min_eigenvalue",
    "simulate",
]


def family(variant="A", n=None):
    return json.loads(_core.family_json(variant, n))


def efficiencies(variant="A", n=None):
    return json.loads(_core.efficiency_report_json(variant, n))


def analytic(variant="A", n=None):
    return json.loads(_core.analytic_json(variant, n))


def simulate(variant="A", n=None, trials=100_000, seed=7, threads=1,
             distinct_f12=False, physical_wrong_branch=False):
    return json.loads(_core.simulate_json(variant, n, trials, seed, threads,
                                          distinct_f12, physical_wrong_branch))
