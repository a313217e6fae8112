"""Contextual bandits with online hyper-parameter tuning."""

from ._synbandit import (
    Error,
    ConfigError,
    Exp3,
    Ridge,
    ExperimentConfig,
    RegretTrace,
    Summary,
    aggregate,
    exp3_beta,
    mahalanobis,
    parse_config,
    run_experiment,
    run_repeats,
    theoretical_alpha,
)

__all__ = [
    "Error",
    "ConfigError",
    "Exp3",
    "Ridge",
    "ExperimentConfig",
    "RegretTrace",
    "Summary",
    "aggregate",
    "exp3_beta",
    "mahalanobis",
    "parse_config",
    "run_experiment",
    "run_repeats",
    "theoretical_alpha",
]
