import math

import numpy as np
import pytest

import cylev

POISSON = {"kind": "cyl_poisson", "lambda": 2.0, "zeta": [1.0, -0.5, 0.25]}


def test_sample_joint_shapes_and_determinism():
    functionals = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 1.0]])
    grid = [0.0, 0.5, 1.0]
    times, values = cylev.sample_joint(POISSON, functionals, grid, seed=7)
    assert times == grid
    assert values.shape == (2, 3)
    assert values[0, 0] == 0.0
    _, again = cylev.sample_joint(POISSON, functionals, grid, seed=7)
    assert np.array_equal(values, again)


def test_decompose_reconstructs_the_path():
    grid = [0.0, 0.5, 1.0]
    d = cylev.decompose(POISSON, np.array([0.5, 0.0, 0.0]), grid, seed=3)
    for j, t in enumerate(d["times"]):
        rebuilt = d["drift_rate"] * t + d["wiener"][j] + d["small_jumps"][j] + d["big_jumps"][j]
        assert abs(rebuilt - d["total"][j]) <= 1e-10


def test_estimate_q2_matches_poisson_target():
    functionals = np.eye(3)
    q, se = cylev.estimate_q2(POISSON, functionals, n_paths=20000, seed=11)
    zeta = np.array([1.0, -0.5, 0.25])
    target = 2.0 * np.outer(zeta, zeta)
    assert np.all(np.abs(q - target) <= 4.0 * np.maximum(se, 1e-12))


def test_factorize_roundtrip():
    rng = np.random.default_rng(5)
    b = rng.normal(size=(4, 4))
    q = b @ b.T
    i_q, preimages = cylev.factorize(q)
    assert np.allclose(i_q @ i_q.T, q, atol=1e-10)
    # i_Q^T a_k = e_k
    coords = i_q.T @ preimages.T
    assert np.allclose(coords, np.eye(i_q.shape[1]), atol=1e-10)


def test_char_value_closed_form():
    # Cylindrical Poisson at zeta(a) = pi, lambda = 1, t = 1: exp(e^{i pi} - 1).
    proc = {"kind": "cyl_poisson", "lambda": 1.0, "zeta": [math.pi]}
    value = cylev.char_value(proc, 1.0, np.array([1.0]))
    assert value == pytest.approx(math.exp(-2.0), rel=1e-12)


def test_char_empirical_agrees_with_closed_form():
    latent = cylev.latent_samples(POISSON, t=1.0, n_paths=20000, seed=13)
    a = np.array([0.3, 0.7, -0.2])
    est, se = cylev.char_empirical(latent, a)
    ref = cylev.char_value(POISSON, 1.0, a)
    assert abs(est - ref) <= 4.0 * se


def test_normalize_driver():
    out = cylev.normalize_driver(
        {
            "jumps": {"type": "compound_poisson", "rate": 4.0, "law": {"kind": "point_mass", "value": 1.0}},
            "centered": True,
        }
    )
    assert out["jump_second_moment"] == pytest.approx(1.0)
    assert out["variance_rate"] == pytest.approx(1.0)


def test_run_scenario_end_to_end():
    result = cylev.run_scenario(cylev.bundled_scenario("nonlinearity_witness"), n_paths=1000)
    assert result["summary"]["failed"] == 0
    report = result["reports"]["nonlinearity_witness"]
    assert report["p_bit_exact"] is True
    assert report["jump_count"] >= 1


def test_scenario_catalog():
    ids = {entry[0] for entry in cylev.list_scenarios()}
    assert {"poisson_q2", "translation_counterexample", "mehler_identity"} <= ids
