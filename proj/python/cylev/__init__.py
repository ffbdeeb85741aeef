"""Simulation and verification toolkit for cylindrical Levy processes.

Thin dict-friendly layer over the compiled core: process descriptors and
scenario configs are plain dictionaries serialized to the JSON schema the
CLI uses.
"""

import json

try:
    from . import _core  # installed package layout
except ImportError:  # pragma: no cover - in-tree test layout
    import _core

__all__ = [
    "run_scenario",
    "list_scenarios",
    "bundled_scenario",
    "sample_joint",
    "decompose",
    "m2_samples",
    "latent_samples",
    "estimate_q2",
    "factorize",
    "char_value",
    "char_empirical",
    "normalize_driver",
]


def _as_json(spec):
    return spec if isinstance(spec, str) else json.dumps(spec)


def run_scenario(config, seed=None, n_paths=None, threads=None):
    """Run a scenario config (dict or JSON text); returns summary and reports."""
    return json.loads(_core.run_scenario(_as_json(config), seed, n_paths, threads))


def list_scenarios():
    return _core.list_scenarios()


def bundled_scenario(scenario_id):
    return json.loads(_core.bundled_scenario(scenario_id))


def sample_joint(process, functionals, grid, seed, path_index=0):
    return _core.sample_joint(_as_json(process), functionals, list(grid), seed, path_index)


def decompose(process, a, grid, seed, path_index=0):
    return _core.decompose(_as_json(process), a, list(grid), seed, path_index)


def m2_samples(process, functionals, t, n_paths, seed):
    return _core.m2_samples(_as_json(process), functionals, t, n_paths, seed)


def latent_samples(process, t, n_paths, seed):
    return _core.latent_samples(_as_json(process), t, n_paths, seed)


def estimate_q2(process, functionals, n_paths, seed):
    return _core.estimate_q2(_as_json(process), functionals, n_paths, seed)


def factorize(q, rank_tol=1e-12):
    return _core.factorize(q, rank_tol)


def char_value(process, t, a):
    return _core.char_value(_as_json(process), t, a)


def char_empirical(latent, a):
    return _core.char_empirical(latent, a)


def normalize_driver(triplet):
    return _core.normalize_driver(_as_json(triplet))
