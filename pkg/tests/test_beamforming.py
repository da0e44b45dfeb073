import numpy as np
import pytest

from beamsteer.arrays import ArrayConfig, steering_vector
from beamsteer.beamforming import (DegeneratePrecoder, SingularEquivalentChannel,
                                   abs_beamformer, abs_beamformer_set,
                                   build_rf_matrix, equivalent_channel,
                                   hbs_beamformer_set, hbs_composite,
                                   vector_normalize, zf_precoder)
from beamsteer.channel import PathParams, los_channel


def random_los_setup(rng, n_tx, n_users, spacing=0.5):
    cfg = ArrayConfig(n_tx, spacing)
    angles = rng.uniform(0, 2 * np.pi, n_users)
    gains = (rng.standard_normal(n_users) + 1j * rng.standard_normal(n_users)) / np.sqrt(2)
    h = np.stack([los_channel(PathParams(g, a), cfg) for g, a in zip(gains, angles)])
    return cfg, angles, gains, h


def test_abs_beamformer_is_steering_vector():
    cfg = ArrayConfig(4, 0.5)
    assert np.allclose(abs_beamformer(0.0, cfg), [0.5, 0.5, 0.5, 0.5])
    cfg2 = ArrayConfig(2, 0.5)
    assert np.allclose(abs_beamformer(np.pi / 2, cfg2),
                       np.array([1, -1]) / np.sqrt(2), atol=1e-12)


def test_abs_gain_onto_own_channel():
    cfg = ArrayConfig(16, 0.5)
    h = los_channel(PathParams(1.0, 0.9), cfg)
    assert abs(h @ abs_beamformer(0.9, cfg)) == pytest.approx(4.0, abs=1e-12)


def test_rf_matrix_columns():
    cfg = ArrayConfig(8, 0.5)
    rf = build_rf_matrix([0.4], cfg)
    assert rf.shape == (8, 1)
    assert np.allclose(rf[:, 0], steering_vector(0.4, cfg))
    rf2 = build_rf_matrix([1.0, 1.0], cfg)
    assert np.allclose(rf2[:, 0], rf2[:, 1])
    gram = rf2.conj().T @ rf2
    assert np.allclose(np.diag(gram).real, 1.0, atol=1e-12)


def test_rf_matrix_empty_rejected():
    with pytest.raises(ValueError):
        build_rf_matrix([], ArrayConfig(4))


def test_equivalent_channel_matched_single_user():
    cfg = ArrayConfig(16, 0.5)
    alpha = 0.7 - 0.3j
    h = los_channel(PathParams(alpha, 1.4), cfg)[None, :]
    h_hat = equivalent_channel(h, build_rf_matrix([1.4], cfg))
    assert h_hat[0, 0] == pytest.approx(np.sqrt(16) * alpha, abs=1e-12)


def test_equivalent_channel_matches_dense_product():
    rng = np.random.default_rng(11)
    cfg, angles, _, h = random_los_setup(rng, 16, 3)
    rf = build_rf_matrix(angles, cfg)
    h_hat = equivalent_channel(h, rf)
    expected = np.array([[sum(h[k, m] * rf[m, i] for m in range(16))
                          for i in range(3)] for k in range(3)])
    assert np.allclose(h_hat, expected, atol=1e-12)


def test_equivalent_channel_dimension_mismatch():
    with pytest.raises(ValueError):
        equivalent_channel(np.ones((2, 4)), np.ones((5, 2)))


def test_zf_scalar():
    assert np.allclose(zf_precoder(np.array([[2.0]])), [[0.5]])


def test_zf_diagonal():
    d = np.diag([2.0, 1j, -0.5 + 0.5j])
    assert np.allclose(zf_precoder(d), np.diag(1 / np.diag(d)), atol=1e-12)


def test_zf_residual_random():
    rng = np.random.default_rng(12)
    h_hat = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    w = zf_precoder(h_hat)
    assert np.abs(h_hat @ w - np.eye(4)).max() < 1e-10


def test_zf_scale_equivariance():
    rng = np.random.default_rng(13)
    h_hat = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    w = zf_precoder(h_hat)
    w_scaled = zf_precoder(5.0 * h_hat)
    assert np.allclose(w_scaled, w / 5.0, atol=1e-12)


def test_zf_singular_on_coincident_angles():
    cfg = ArrayConfig(8, 0.5)
    rng = np.random.default_rng(14)
    _, _, gains, _ = random_los_setup(rng, 8, 2)
    angles = np.array([0.3, 0.3])
    h = np.stack([los_channel(PathParams(g, a), cfg) for g, a in zip(gains, angles)])
    h_hat = equivalent_channel(h, build_rf_matrix(angles, cfg))
    with pytest.raises(SingularEquivalentChannel):
        zf_precoder(h_hat)


def test_zf_non_square_rejected():
    with pytest.raises(ValueError):
        zf_precoder(np.ones((2, 3)))


def test_vector_normalize_unit_composite_columns():
    rng = np.random.default_rng(15)
    cfg, angles, _, h = random_los_setup(rng, 32, 3)
    rf = build_rf_matrix(angles, cfg)
    w = vector_normalize(zf_precoder(equivalent_channel(h, rf)), rf)
    assert np.allclose(np.linalg.norm(rf @ w, axis=0), 1.0, atol=1e-10)


def test_vector_normalize_scale_invariance():
    rng = np.random.default_rng(16)
    cfg, angles, _, _ = random_los_setup(rng, 8, 2)
    rf = build_rf_matrix(angles, cfg)
    w = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    scaled = w.copy()
    scaled[:, 0] *= 10.0
    assert np.allclose(vector_normalize(w, rf)[:, 0],
                       vector_normalize(scaled, rf)[:, 0], atol=1e-12)


def test_vector_normalize_zero_column_rejected():
    cfg = ArrayConfig(4, 0.5)
    rf = build_rf_matrix([0.1, 0.9], cfg)
    w = np.array([[1.0, 0.0], [0.5j, 0.0]])
    with pytest.raises(DegeneratePrecoder):
        vector_normalize(w, rf)


def test_composite_identity_digital():
    cfg = ArrayConfig(8, 0.5)
    rf = build_rf_matrix([0.2, 1.2], cfg)
    bf = hbs_composite(rf, np.eye(2))
    assert np.allclose(bf.composite, rf, atol=1e-12)


def test_pure_abs_composite_is_steering():
    cfg = ArrayConfig(8, 0.5)
    angles = [0.2, 1.2, 4.0]
    bf = abs_beamformer_set(angles, cfg)
    assert np.array_equal(bf.composite, build_rf_matrix(angles, cfg))


def test_hbs_single_user_end_to_end():
    cfg = ArrayConfig(16, 0.5)
    alpha = 1.1 - 0.6j
    h = los_channel(PathParams(alpha, 2.2), cfg)[None, :]
    bf = hbs_beamformer_set(h, [2.2], cfg)
    assert abs(h[0] @ bf.composite[:, 0]) == pytest.approx(4 * abs(alpha), abs=1e-9)


def test_hbs_null_interference():
    rng = np.random.default_rng(17)
    cfg, angles, _, h = random_los_setup(rng, 32, 3)
    bf = hbs_beamformer_set(h, angles, cfg)
    gains = np.abs(h @ bf.composite)
    for k in range(3):
        for i in range(3):
            if i != k:
                assert gains[k, i] / gains[k, k] < 1e-8


def test_hbs_invariant_to_equivalent_channel_scaling():
    rng = np.random.default_rng(18)
    cfg, angles, _, h = random_los_setup(rng, 16, 3)
    rf = build_rf_matrix(angles, cfg)
    h_hat = equivalent_channel(h, rf)
    w1 = vector_normalize(zf_precoder(h_hat), rf)
    w2 = vector_normalize(zf_precoder(3.0 * h_hat), rf)
    assert np.allclose(w1, w2, atol=1e-10)


def test_hbs_composite_dimension_mismatch():
    with pytest.raises(ValueError):
        hbs_composite(np.ones((4, 2)), np.ones((3, 3)))
