"""
Seed derivation.

Every random stream in a run is derived from the master seed and a tag, so
adding a sweep point or a metric never perturbs another stream. Python's
built-in hash() is randomized per process and must not be used here.
"""

import hashlib
import json
import random
from typing import Any, Dict

import numpy as np

_SEED_MODULUS = 2**32 - 1


def derive_seed(master_seed: int, tag) -> int:
    combined = f"{int(master_seed)}-{tag}"
    return int(hashlib.sha256(combined.encode("utf-8")).hexdigest(), 16) % _SEED_MODULUS


def simulation_rng(seed: int) -> random.Random:
    """The single stream a simulation run consumes."""
    return random.Random(derive_seed(seed, "simulation"))


def numpy_rng(seed: int, tag: str) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, tag))


def point_seed(master_seed: int, values: Dict[str, Any]) -> int:
    """Seed of a sweep point, keyed on its parameter values rather than its place in the grid."""
    return derive_seed(master_seed, "point-" + json.dumps(values, sort_keys=True))
