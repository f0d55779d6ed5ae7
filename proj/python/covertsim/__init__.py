"""Closed-form budgets and parameter sweeps for covert communication with friendly jamming."""

import csv
import io
import json

from ._covert import (
    REPORT_SCHEMA,
    InvalidArgument,
    RegimeViolation,
    ScenarioParams,
    covert_budget,
    expected_inv_noise_bound,
    nearest_distance_cdf,
    nearest_distance_moment,
    run_sweep,
    scalar_gaussian_kl,
)

__all__ = [
    "REPORT_SCHEMA",
    "InvalidArgument",
    "RegimeViolation",
    "ScenarioParams",
    "covert_budget",
    "expected_inv_noise_bound",
    "nearest_distance_cdf",
    "nearest_distance_moment",
    "run_sweep",
    "scalar_gaussian_kl",
    "sweep_records",
    "sweep_rows",
]


def sweep_records(params_text, theorem=None, workers=None, seed=None):
    """Run a sweep and return its JSON-lines records as dicts (header record first)."""
    text = run_sweep(params_text, theorem=theorem, format="jsonl", workers=workers, seed=seed)
    return [json.loads(line) for line in io.StringIO(text) if line.strip()]


def sweep_rows(params_text, theorem=None, workers=None, seed=None):
    """Run a sweep and return its CSV rows as dicts of strings."""
    text = run_sweep(params_text, theorem=theorem, format="csv", workers=workers, seed=seed)
    return list(csv.DictReader(io.StringIO(text)))
