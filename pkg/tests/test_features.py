"""Kernel feature map and streaming-similarity detector tests."""

import numpy as np
import pytest

from sentrynet.features import (KeaVector, RandomFeatureMap, anomaly_score,
                                expected_similarity, map_features,
                                normalize_metrics, rbf_kernel, update_kea)


def test_normalize_zero_case():
    v = normalize_metrics((0, 0, 0), (20, 2.0, 512))
    assert np.array_equal(v, [0.0, 0.0, 0.0])


def test_normalize_direct_arithmetic():
    v = normalize_metrics((10, 1.0, 256), (20, 2.0, 512))
    assert np.allclose(v, [0.5, 0.5, 0.5])


def test_normalize_clamps_at_one():
    v = normalize_metrics((100, 1.0, 256), (20, 2.0, 512))
    assert np.allclose(v, [1.0, 0.5, 0.5])


def test_normalize_rejects_nonfinite_sample():
    assert normalize_metrics((float("nan"), 0, 0), (1, 1, 1)) is None
    assert normalize_metrics((0, float("inf"), 0), (1, 1, 1)) is None


def test_normalize_requires_positive_scales():
    with pytest.raises(ValueError):
        normalize_metrics((1, 1, 1), (1, 0, 1))


def test_map_construction_validates_parameters():
    with pytest.raises(ValueError):
        RandomFeatureMap(m=0, sigma_sq=0.35, seed=1)
    with pytest.raises(ValueError):
        RandomFeatureMap(m=8, sigma_sq=0.0, seed=1)


def test_map_zero_vector_gives_cos_sin_pattern():
    fmap = RandomFeatureMap(m=8, sigma_sq=0.35, seed=1)
    f = map_features((0.0, 0.0, 0.0), fmap)
    expect = np.zeros(16)
    expect[0::2] = 1.0 / np.sqrt(8)
    assert np.allclose(f, expect)


def test_feature_norm_is_one():
    fmap = RandomFeatureMap(m=64, sigma_sq=0.35, seed=2)
    rng = np.random.default_rng(0)
    for _ in range(50):
        f = map_features(rng.uniform(0, 1, 3), fmap)
        assert abs(f @ f - 1.0) < 1e-12


def test_kernel_fidelity_small():
    # Monte Carlo error vs the closed form stays inside the coarse envelope
    fmap = RandomFeatureMap(m=200, sigma_sq=0.35, seed=3)
    rng = np.random.default_rng(1)
    errs = []
    for _ in range(200):
        x, y = rng.uniform(0, 1, 3), rng.uniform(0, 1, 3)
        approx = float(map_features(x, fmap) @ map_features(y, fmap))
        errs.append(abs(approx - rbf_kernel(x, y, 0.35)))
    assert max(errs) <= 0.2
    assert np.mean(errs) <= 0.08


def test_shift_invariance():
    fmap = RandomFeatureMap(m=128, sigma_sq=0.5, seed=4)
    rng = np.random.default_rng(2)
    for _ in range(20):
        x, y = rng.uniform(0, 0.5, 3), rng.uniform(0, 0.5, 3)
        shift = rng.uniform(0, 0.5, 3)
        a = float(map_features(x, fmap) @ map_features(y, fmap))
        b = float(map_features(x + shift, fmap) @ map_features(y + shift, fmap))
        assert abs(a - b) < 1e-9


def test_map_is_frozen_after_construction():
    fmap = RandomFeatureMap(m=16, sigma_sq=0.35, seed=5)
    z0 = fmap.z.copy()
    map_features((0.3, 0.4, 0.5), fmap)
    assert np.array_equal(fmap.z, z0)


def test_similarity_requires_history():
    fmap = RandomFeatureMap(m=16, sigma_sq=0.35, seed=6)
    mu = KeaVector(16)
    with pytest.raises(ValueError):
        expected_similarity(map_features((0.1, 0.2, 0.3), fmap), mu)


def test_self_similarity_is_one():
    fmap = RandomFeatureMap(m=32, sigma_sq=0.35, seed=7)
    f = map_features((0.2, 0.8, 0.1), fmap)
    mu = KeaVector(32)
    update_kea(mu, f, gamma=0.2, gate_open=True)
    assert abs(expected_similarity(f, mu) - 1.0) < 1e-12


def test_zero_embedding_gives_zero_similarity():
    fmap = RandomFeatureMap(m=32, sigma_sq=0.35, seed=8)
    mu = KeaVector(32)
    mu.initialized = True  # hypothetical zero history vector
    f = map_features((0.2, 0.8, 0.1), fmap)
    assert expected_similarity(f, mu) == 0.0


def test_similarity_tracks_kernel_mean():
    # mean embedding of nearby samples approximates the mean closed-form kernel
    fmap = RandomFeatureMap(m=200, sigma_sq=0.35, seed=9)
    rng = np.random.default_rng(3)
    center = np.array([0.5, 0.5, 0.5])
    samples = [np.clip(center + rng.normal(0, 0.05, 3), 0, 1) for _ in range(10)]
    mu = KeaVector(200)
    mu.data = np.mean([map_features(s, fmap) for s in samples], axis=0)
    mu.initialized = True
    probe = np.clip(center + rng.normal(0, 0.05, 3), 0, 1)
    approx = expected_similarity(map_features(probe, fmap), mu)
    exact = np.mean([rbf_kernel(probe, s, 0.35) for s in samples])
    assert abs(approx - exact) < 0.2


@pytest.mark.parametrize("sim,expected", [
    (1.0, 0.0),
    (0.0, 1.0),
    (-0.05, 1.0),
    (1.3, 0.0),
    (0.25, 0.75),
])
def test_anomaly_score(sim, expected):
    assert anomaly_score(sim) == pytest.approx(expected)


def test_anomaly_score_bounds():
    rng = np.random.default_rng(4)
    for s in rng.uniform(-2, 2, 200):
        assert 0.0 <= anomaly_score(s) <= 1.0


def test_update_full_replacement():
    fmap = RandomFeatureMap(m=16, sigma_sq=0.35, seed=10)
    mu = KeaVector(16)
    f0 = map_features((0.1, 0.1, 0.1), fmap)
    f1 = map_features((0.9, 0.9, 0.9), fmap)
    update_kea(mu, f0, gamma=1.0, gate_open=True)
    update_kea(mu, f1, gamma=1.0, gate_open=True)
    assert np.array_equal(mu.data, f1)


def test_update_gamma_zero_keeps_history():
    fmap = RandomFeatureMap(m=16, sigma_sq=0.35, seed=11)
    mu = KeaVector(16)
    f0 = map_features((0.1, 0.1, 0.1), fmap)
    f1 = map_features((0.9, 0.9, 0.9), fmap)
    update_kea(mu, f0, gamma=0.0, gate_open=True)
    update_kea(mu, f1, gamma=0.0, gate_open=True)
    assert np.array_equal(mu.data, f0)


def test_update_rejects_bad_gamma():
    mu = KeaVector(4)
    with pytest.raises(ValueError):
        update_kea(mu, np.zeros(8), gamma=1.5, gate_open=True)


def _unrolled_ewma(vectors, gamma, mu0):
    """Independent replay oracle: gamma * sum (1-gamma)^k phi_k + (1-gamma)^n mu0."""
    acc = np.array(mu0, dtype=float)
    for f in vectors:
        acc = gamma * f + (1.0 - gamma) * acc
    return acc


def test_incremental_matches_unrolled_recurrence():
    fmap = RandomFeatureMap(m=32, sigma_sq=0.35, seed=12)
    rng = np.random.default_rng(5)
    mu = KeaVector(32)
    f_init = map_features(rng.uniform(0, 1, 3), fmap)
    update_kea(mu, f_init, gamma=0.2, gate_open=True)
    fs = [map_features(rng.uniform(0, 1, 3), fmap) for _ in range(5)]
    for f in fs:
        update_kea(mu, f, gamma=0.2, gate_open=True)
    oracle = _unrolled_ewma(fs, 0.2, f_init)
    assert np.max(np.abs(mu.data - oracle)) < 1e-12


def test_incremental_matches_unrolled_on_random_gate_sequences():
    fmap = RandomFeatureMap(m=16, sigma_sq=0.35, seed=13)
    rng = np.random.default_rng(6)
    for _ in range(100):
        gamma = rng.uniform(0.05, 0.95)
        mu = KeaVector(16)
        f_init = map_features(rng.uniform(0, 1, 3), fmap)
        update_kea(mu, f_init, gamma, gate_open=True)
        open_fs = []
        for _ in range(rng.integers(1, 12)):
            f = map_features(rng.uniform(0, 1, 3), fmap)
            gate = bool(rng.integers(0, 2))
            update_kea(mu, f, gamma, gate_open=gate)
            if gate:
                open_fs.append(f)
        oracle = _unrolled_ewma(open_fs, gamma, f_init)
        assert np.max(np.abs(mu.data - oracle)) < 1e-12


def test_closed_gate_keeps_embedding_bitwise_constant():
    fmap = RandomFeatureMap(m=16, sigma_sq=0.35, seed=14)
    rng = np.random.default_rng(7)
    mu = KeaVector(16)
    update_kea(mu, map_features((0.5, 0.5, 0.5), fmap), 0.3, gate_open=True)
    frozen = mu.data.tobytes()
    for _ in range(25):
        update_kea(mu, map_features(rng.uniform(0, 1, 3), fmap), 0.3, gate_open=False)
        assert mu.data.tobytes() == frozen


def test_embedding_norm_stays_below_one():
    fmap = RandomFeatureMap(m=32, sigma_sq=0.35, seed=15)
    rng = np.random.default_rng(8)
    mu = KeaVector(32)
    update_kea(mu, map_features(rng.uniform(0, 1, 3), fmap), 0.25, gate_open=True)
    for _ in range(50):
        update_kea(mu, map_features(rng.uniform(0, 1, 3), fmap), 0.25, gate_open=True)
        assert np.linalg.norm(mu.data) <= 1.0 + 1e-12


def test_bootstrap_happens_even_with_closed_gate():
    fmap = RandomFeatureMap(m=16, sigma_sq=0.35, seed=16)
    mu = KeaVector(16)
    f = map_features((0.4, 0.2, 0.6), fmap)
    update_kea(mu, f, gamma=0.2, gate_open=False)
    assert mu.initialized
    assert np.array_equal(mu.data, f)
