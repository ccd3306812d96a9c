"""Inertial gradient dynamics with convergence-rate verification."""

import json
from typing import Any, Mapping, Union

from ._core import (
    Branch,
    ConfigError,
    LyapunovParams,
    Objective,
    ProbeReport,
    RateRegime,
    fit_exponent,
    probe_H1,
    probe_H2,
    prox_power,
    theoretical_rate,
)
from . import _core

Config = Union[str, Mapping[str, Any]]


def _as_json(config: Config) -> str:
    return config if isinstance(config, str) else json.dumps(dict(config))


def simulate(config: Config) -> dict:
    """Run the configured dynamics and return arrays n, t, x, v, gap."""
    return _core.simulate(_as_json(config))


def run_experiment(config: Config) -> dict:
    """Run one config, write its CSV/JSON outputs and return the verdict."""
    return _core.run_experiment(_as_json(config))


__all__ = [
    "Branch",
    "ConfigError",
    "LyapunovParams",
    "Objective",
    "ProbeReport",
    "RateRegime",
    "fit_exponent",
    "probe_H1",
    "probe_H2",
    "prox_power",
    "run_experiment",
    "simulate",
    "theoretical_rate",
]
