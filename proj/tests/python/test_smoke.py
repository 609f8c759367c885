import math

import numpy as np
import pytest

import dsframes as dsf


def test_verify_fano():
    r = dsf.verify_difference_set(7, [1, 2, 4])
    assert r["is_difference_set"]
    assert r["lambda"] == 1


def test_catalog_has_singer_set():
    assert dsf.catalog_lookup(40, 13) is not None
    assert dsf.derive_params(40, 13) == {"N": 40, "K": 13, "lambda": 4}
    assert len(dsf.catalog()) >= 10


def test_frame_is_tight_and_coherence_matches():
    g = dsf.generator("difference_set", 7, 3)
    phi = dsf.gabor_frame(g)
    assert phi.shape == (7, 49)
    assert np.abs(phi @ phi.conj().T - 7 * np.eye(7)).max() < 1e-9
    mu = dsf.mutual_coherence(g)
    assert abs(mu - math.sqrt(4 / 18)) < 1e-10
    assert abs(dsf.mutual_coherence(g, fast=True) - mu) < 1e-12
    assert abs(dsf.predicted_coherence(7, 3, 1) - mu) < 1e-10
    assert abs(dsf.welch_bound(49, 7) - math.sqrt(1 / 8)) < 1e-15


def test_three_point_etf():
    g = np.array([1, 1, 0], dtype=complex) / math.sqrt(2)
    assert dsf.is_etf(dsf.gabor_frame(g), 1e-12)


def test_fusion_report():
    r = dsf.fusion_report(7, 3)
    assert r["tight_bound"] == 3
    assert r["distance_squared"] == 2
    assert r["optimal_packing"]
    assert r["sparsity"] == 21


def test_basis_pursuit_recovers_sparse_vector():
    phi = dsf.gabor_frame(dsf.generator("alltop", 11))
    x = np.zeros(121, dtype=complex)
    x[[3, 50, 99]] = [1.0, -0.5j, 2.0 + 1.0j]
    r = dsf.basis_pursuit(phi, phi @ x)
    assert r["status"] == "converged"
    assert np.linalg.norm(r["solution"] - x) ** 2 / np.linalg.norm(x) ** 2 < 1e-10


def test_block_basis_pursuit_single_block_is_least_norm():
    rng = np.random.default_rng(1)
    A = rng.standard_normal((3, 6)) + 1j * rng.standard_normal((3, 6))
    y = rng.standard_normal(3) + 0j
    r = dsf.block_basis_pursuit(A, y, 6)
    least = A.conj().T @ np.linalg.solve(A @ A.conj().T, y)
    assert np.linalg.norm(r["solution"] - least) < 1e-8


def test_fusion_operator_shape():
    a = np.ones((2, 7))
    assert dsf.fusion_operator(a, 7, 3).shape == (14, 21)


def test_experiments_are_deterministic():
    a = dsf.run_fusion_experiment(7, 3, [1, 3], [1, 2], trials=5, seed=3)
    b = dsf.run_fusion_experiment(7, 3, [1, 3], [1, 2], trials=5, seed=3, threads=1)
    assert a == b
    c = dsf.run_classic_experiment(7, 3, ["difference_set"], [1], trials=5, seed=1)
    assert c[0]["points"][0][3] == 1.0


def test_errors_are_raised():
    with pytest.raises(dsf.Error):
        dsf.generator("alltop", 4)
    with pytest.raises(dsf.Error):
        dsf.verify_difference_set(7, [1, 1])
