"""Python bindings for the lcmc sampling library."""

from ._lcmc import (
    ChainDivergence,
    Error,
    InvalidInput,
    NonConvergence,
    ParseError,
    Sampler,
    Target,
    Unsupported,
    diagnostics,
    diagonal_gaussian_target,
    exact_mixture_samples,
    experiment_ids,
    gaussian_target,
    logistic_target,
    mixture_target,
    preset_config,
    run_chain,
    run_experiment,
    synthetic_logistic_data,
    theory,
    verify_suite,
)

__version__ = "0.1.0"

__all__ = [
    "ChainDivergence",
    "Error",
    "InvalidInput",
    "NonConvergence",
    "ParseError",
    "Sampler",
    "Target",
    "Unsupported",
    "diagnostics",
    "diagonal_gaussian_target",
    "exact_mixture_samples",
    "experiment_ids",
    "gaussian_target",
    "logistic_target",
    "mixture_target",
    "preset_config",
    "run_chain",
    "run_experiment",
    "synthetic_logistic_data",
    "theory",
    "verify_suite",
]
