"""Python front end for the mhd1d solver.

Configs are plain dicts using the same schema as the CLI's JSON files;
missing keys take the defaults.
"""

import json

from . import _core
from ._core import BoundaryError, DomainError, NumericalError, __version__

__all__ = [
    "BoundaryError",
    "DomainError",
    "NumericalError",
    "__version__",
    "canonical_config",
    "fingerprint",
    "fit_rate",
    "initial_state",
    "potential_energy_bounds",
    "simulate",
    "sweep",
    "verify",
]


def _text(config):
    return json.dumps(config or {})


def canonical_config(config=None):
    """Fully populated config with defaults filled in."""
    return json.loads(_core.canonical_config(_text(config)))


def fingerprint(config=None):
    return _core.config_fingerprint(_text(config))


def initial_state(config=None):
    return _core.initial_state(_text(config))


def simulate(config=None):
    """Runs one simulation. Returns diagnostics columns, the CSV text,
    the final state and the clipping count."""
    return _core.simulate(_text(config))


def sweep(config=None, jobs=1):
    """Runs the resistive/non-resistive pairs over config["nu_list"]."""
    return json.loads(_core.sweep(_text(config), jobs))


def verify():
    """Built-in verification battery as (name, passed, detail) tuples."""
    return _core.verify()


def fit_rate(nu, errors):
    """Log-log least squares: (slope, intercept, rms residual)."""
    return _core.fit_rate(list(nu), list(errors))


def potential_energy_bounds(gamma, rho_bar):
    """Empirical (c1, c2, C1, C2)."""
    return _core.potential_energy_bounds(gamma, rho_bar)
