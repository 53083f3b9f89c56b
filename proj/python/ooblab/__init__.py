"""Python front end for the out-of-band injection lab.

Scenarios are plain dicts in the same schema as the bundled JSON files.
"""

import json

from ._ooblab import (
    ConfigError,
    DomainError,
    EstimationError,
    RangeError,
    SyncTimeout,
    UnsupportedError,
    alias_decompose,
    auto_adapt,
    combine_coherent_sources,
    digitize,
    drift_deviation,
    predict_phase_pacing,
    predict_sideswing,
    predict_switching,
    spl_at_distance,
)
from . import _ooblab

__all__ = [
    "ConfigError",
    "DomainError",
    "EstimationError",
    "RangeError",
    "SyncTimeout",
    "UnsupportedError",
    "alias_decompose",
    "auto_adapt",
    "combine_coherent_sources",
    "digitize",
    "drift_deviation",
    "estimate_sample_rate",
    "load_scenarios",
    "predict_phase_pacing",
    "predict_sideswing",
    "predict_switching",
    "run",
    "run_to_dir",
    "spl_at_distance",
    "sweep_defenses",
]


def load_scenarios(path):
    """Return {variant name: scenario dict}, base first."""
    return {name: json.loads(text) for name, text in _ooblab.load_scenario_file(str(path))}


def run(scenario, variant="base"):
    """Run one scenario dict and return its report as a dict."""
    return json.loads(_ooblab.run_scenario(json.dumps(scenario), variant))


def run_to_dir(scenario, out_dir, variant="base"):
    """Run and write report.json plus the CSVs under out_dir."""
    _ooblab.run_to_dir(json.dumps(scenario), str(out_dir), variant)


def estimate_sample_rate(scenario):
    return _ooblab.estimate_sample_rate(json.dumps(scenario))


def sweep_defenses(scenario):
    return _ooblab.sweep_defenses(json.dumps(scenario))
