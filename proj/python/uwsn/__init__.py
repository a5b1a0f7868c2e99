"""Python bindings for the uwsn simulator core.

Structured arguments are plain dicts using the same JSON schema as the CLI config
files; every key is optional and missing ones take their defaults.
"""

import json

from . import _uwsn
from ._uwsn import ConfigError, DomainError

__all__ = [
    "ConfigError",
    "DomainError",
    "conductivity",
    "attenuation_coefficient",
    "phase_velocity",
    "total_attenuation",
    "delivery_probability",
    "deploy",
    "optimize",
    "run",
    "experiment",
]


def _enc(obj):
    return "" if obj is None else json.dumps(obj)


def conductivity(environment=None):
    return _uwsn.conductivity(_enc(environment))


def attenuation_coefficient(environment=None):
    return _uwsn.attenuation_coefficient(_enc(environment))


def phase_velocity(environment=None):
    return _uwsn.phase_velocity(_enc(environment))


def total_attenuation(distance_m, from_auv=False, environment=None):
    return _uwsn.total_attenuation(distance_m, from_auv, _enc(environment))


def delivery_probability(attenuation_db, slope, theta):
    return _uwsn.delivery_probability(attenuation_db, slope, theta)


def deploy(spec=None):
    """Random topology for ``spec`` (counts, seed, field_size, environment)."""
    return json.loads(_uwsn.deploy(_enc(spec)))


def optimize(topology, spec=None):
    """KMeans -> GA -> PSO placement of ``topology``'s sensors and AUVs."""
    return json.loads(_uwsn.optimize(json.dumps(topology), _enc(spec)))


def run(spec=None, run_index=0):
    """One seeded run of every requested scenario (seed = spec seed + run_index)."""
    return json.loads(_uwsn.run(_enc(spec), run_index))


def experiment(spec=None):
    """Monte-Carlo batch; returns per-scenario stats, the raw table and ``runs_csv``."""
    return json.loads(_uwsn.experiment(_enc(spec)))
