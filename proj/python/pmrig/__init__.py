"""Python bindings for the pmrig library.

The compiled extension carries the numerics; this package adds a thin
convenience layer for running configured experiments.
"""

import json
import os

from ._pmrig import (
    ConfigError,
    ConvergenceError,
    DomainError,
    Error,
    HoloMap,
    Pseudometric,
    __version__,
    dilate,
    f_epsilon,
    kobayashi_distance,
    kobayashi_metric,
    mu_max,
    poincare,
    pullback,
    quotient,
    rigidity_scan,
    run_config,
    scale,
    theorem_2_2_check,
)


def run(command, output_dir, **keys):
    """Runs one subcommand with key=value settings; returns (exit_code, report dict)."""
    lines = [f"command = {command}"] + [f"{k} = {v}" for k, v in keys.items()]
    code, text = run_config("\n".join(lines) + "\n", os.fspath(output_dir))
    return code, json.loads(text)


__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "Error",
    "HoloMap",
    "Pseudometric",
    "__version__",
    "dilate",
    "f_epsilon",
    "kobayashi_distance",
    "kobayashi_metric",
    "mu_max",
    "poincare",
    "pullback",
    "quotient",
    "rigidity_scan",
    "run",
    "run_config",
    "scale",
    "theorem_2_2_check",
]
