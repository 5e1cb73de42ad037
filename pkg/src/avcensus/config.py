"""Desk-scale limits and tunables.

Values come from hard defaults, optionally overridden by a versioned JSON
key-value file (``{"version": 1, "weil.max_g": 4, ...}``).  Keys are dotted
``module.name`` strings; unknown keys are rejected so typos do not go
unnoticed.
"""

import json
import os
from pathlib import Path

from .errors import PreconditionError

CONFIG_VERSION = 1

DEFAULTS = {
    "weil.max_g": 4,
    "weil.max_q": 9,
    "lattice.hilb_max_j": 12,
    "lattice.hilb_brute_max_j": 4,
    "lattice.hilb_brute_max_ell": 3,
    "lattice.max_enumeration_size": 24,
    "numfield.max_d": 10**6,
    "numfield.max_minkowski_n": 32,
    "hermitian.max_rank": 4,
    "hermitian.max_rank_symmetric": 8,
    # Multiplier on the Hermite-constant bound for Gram diagonal entries.
    "hermitian.diagonal_bound_factor": 2,
    "cl.prng": "philox4x64-10",
    "cl.batch_size": 4096,
    "ec.max_point_count_p": 10**5,
    "ec.max_scan_p": 10**3,
    "ec.max_density_x": 10**7,
    "census.cache_dir": None,
    "census.threads": 1,
}

_current = dict(DEFAULTS)


def get(key):
    return _current[key]


def set_value(key, value):
    if key not in DEFAULTS:
        raise PreconditionError(f"unknown config key {key!r}")
    _current[key] = value


def reset():
    _current.clear()
    _current.update(DEFAULTS)


def load(path):
    """Merge a JSON config file into the active configuration."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise PreconditionError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"malformed config {path}: {exc}") from exc
    version = data.pop("version", CONFIG_VERSION)
    if version != CONFIG_VERSION:
        raise PreconditionError(
            f"config {path} has version {version}, expected {CONFIG_VERSION}")
    for key, value in data.items():
        set_value(key, value)
    return dict(_current)


def snapshot():
    return dict(_current)


def from_environment():
    """Load ``$AVCENSUS_CONFIG`` if set."""
    path = os.environ.get("AVCENSUS_CONFIG")
    if path:
        load(path)
