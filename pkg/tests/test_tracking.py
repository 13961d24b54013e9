import numpy as np
import pytest

from mcdas.errors import FilterDivergenceError, ValidationError
from mcdas.tracking import (
    FilterConfig,
    JointTracker,
    JointTrackState,
    check_covariance,
    kalman_gain,
    measurement_matrix,
    predict,
    step,
    transition_matrix,
    update,
    white_noise_acceleration,
)

from oracles import kalman_cycle

T = 0.5


def cfg(q=0.0, r=0.25, p0=1.0, t=T):
    return FilterConfig(t, q * np.eye(8), r * np.eye(4), p0 * np.eye(8))


def random_psd(rng, n, scale=1.0):
    m = rng.normal(size=(n, n))
    return scale * (m @ m.T) / n + 1e-3 * np.eye(n)


def test_transition_matrix_layout():
    a = transition_matrix(0.5)
    expected = np.eye(8)
    for i in (0, 2, 4, 6):
        expected[i, i + 1] = 0.5
    np.testing.assert_array_equal(a, expected)
    np.testing.assert_allclose(transition_matrix(1e-300), np.eye(8), atol=1e-300)
    np.testing.assert_array_equal(a @ np.array([0, 10, 0, 0, 0, 0, 0, 0.0]), [5, 10, 0, 0, 0, 0, 0, 0])
    with pytest.raises(ValidationError):
        transition_matrix(0)


def test_measurement_matrix():
    c = measurement_matrix()
    np.testing.assert_array_equal(c @ np.arange(1, 9.0), [1, 3, 5, 7])
    np.testing.assert_array_equal(c @ np.zeros(8), np.zeros(4))
    np.testing.assert_array_equal(c.sum(axis=1), np.ones(4))


def test_predict_examples():
    s = JointTrackState(np.array([1, 0, 2, 0, 3, 0, 4, 0.0]), np.eye(8))
    out = predict(s, cfg())
    np.testing.assert_array_equal(out.state, s.state)
    assert out.tick == 1

    s = JointTrackState(np.array([0, 10, 0, 0, 0, 0, 0, 0.0]), np.eye(8))
    out = predict(s, cfg())
    assert out.state[0] == 5
    assert out.covariance[0, 0] == pytest.approx(1.25, abs=1e-15)


def test_predict_flags_divergence():
    s = JointTrackState(np.full(8, np.inf), np.eye(8))
    with pytest.raises(FilterDivergenceError):
        predict(s, cfg())


def test_update_limits():
    rng = np.random.default_rng(3)
    x = rng.normal(size=8)
    z = rng.normal(size=4) * 10
    s = JointTrackState(x, np.eye(8))

    ignored = update(s, z, cfg(r=1e12))
    np.testing.assert_allclose(ignored.state, x, atol=1e-6)

    trusted = update(s, z, cfg(r=1e-12))
    np.testing.assert_allclose(measurement_matrix() @ trusted.state, z, atol=1e-6)


def test_gain_half_for_unit_covariances():
    k = kalman_gain(np.eye(8), measurement_matrix(), np.eye(4))
    for row, col in enumerate((0, 2, 4, 6)):
        assert k[col, row] == pytest.approx(0.5, abs=1e-15)


def test_ill_conditioned_innovation_raises():
    p = np.zeros((8, 8))
    c = cfg(r=1.0)
    r = np.diag([1.0, 1.0, 1.0, 1e-14])
    with pytest.raises(FilterDivergenceError):
        kalman_gain(p, measurement_matrix(), r)
    with pytest.raises(ValidationError):
        FilterConfig(T, np.eye(8), -np.eye(4), np.eye(8))
    assert c.sample_time == T


def test_partial_observation_keeps_unobserved_prediction():
    s = JointTrackState(np.arange(8.0), np.eye(8))
    z = np.array([100.0, 100.0, 0.0, 0.0])
    out = update(s, z, cfg(), observed=(True, False))
    np.testing.assert_array_equal(out.state[4:], s.state[4:])
    assert out.state[0] != s.state[0]


def test_joseph_matches_printed_form():
    rng = np.random.default_rng(11)
    c = FilterConfig(T, random_psd(rng, 8), random_psd(rng, 4), np.eye(8))
    s = predict(JointTrackState(rng.normal(size=8), random_psd(rng, 8)), c)
    out = update(s, rng.normal(size=4), c)
    h = measurement_matrix()
    k = kalman_gain(s.covariance, h, c.measurement_noise_cov)
    printed = (np.eye(8) - k @ h) @ s.covariance
    np.testing.assert_allclose(out.covariance, printed, atol=1e-9)


def test_oracle_equivalence_random_instances():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        q = random_psd(rng, 8, 0.5)
        r = random_psd(rng, 4, 0.5)
        p = random_psd(rng, 8, 5.0)
        x = rng.normal(size=8) * 20
        z = rng.normal(size=4) * 20
        c = FilterConfig(T, q, r, np.eye(8))
        got = step(JointTrackState(x, p), z, c)
        xo, po, _, _ = kalman_cycle(list(x), p.tolist(), list(z), T, q.tolist(), r.tolist())
        np.testing.assert_allclose(got.state, xo, atol=1e-9, rtol=0)
        np.testing.assert_allclose(got.covariance, np.array(po), atol=1e-9, rtol=0)


def test_covariance_health_and_contraction():
    rng = np.random.default_rng(5)
    c = FilterConfig.default(T)
    s = JointTrackState(np.zeros(8), 10 * np.eye(8))
    for _ in range(50):
        prior = predict(s, c)
        check_covariance(prior.covariance)
        s = update(prior, rng.normal(size=4), c)
        check_covariance(s.covariance)
        assert np.trace(s.covariance) <= np.trace(prior.covariance) + 1e-9


def cv_truth(n, t=T):
    a = transition_matrix(t)
    x = np.array([-30, 60 / 3.6, 0.2, 0, 30, 40 / 3.6, -0.4, 0])
    out = []
    for _ in range(n):
        out.append(x)
        x = a @ x
    return out


@pytest.mark.parametrize("seed", range(10))
def test_noiseless_convergence_any_initial_covariance(seed):
    rng = np.random.default_rng(seed)
    p0 = random_psd(rng, 8)
    p0 *= rng.uniform(0, 1e4) / np.trace(p0)
    c = FilterConfig(T, white_noise_acceleration(T, 0.1), 0.25 * np.eye(4), p0)
    tracker = JointTracker(c)
    h = measurement_matrix()
    for k, x in enumerate(cv_truth(20)):
        est = tracker.observe(h @ x)
    np.testing.assert_allclose(h @ est.state, h @ x, atol=1e-3)


def test_noiseless_step_from_exact_truth_preserved():
    x = cv_truth(1)[0]
    c = cfg(q=0.0, r=1e-9)
    out = step(JointTrackState(x, np.eye(8)), measurement_matrix() @ transition_matrix(T) @ x, c)
    np.testing.assert_allclose(out.state, transition_matrix(T) @ x, atol=1e-9)


def test_eleven_sample_window_does_not_diverge():
    rng = np.random.default_rng(0)
    tracker = JointTracker(FilterConfig.default(T))
    h = measurement_matrix()
    for x in cv_truth(11):
        est = tracker.observe(h @ x + rng.normal(scale=0.5, size=4))
        check_covariance(est.covariance)
    assert np.all(np.isfinite(est.state))


def test_tracker_startup_seeds_position_then_velocity():
    tracker = JointTracker(FilterConfig.default(T))
    tracker.observe([1, 2, 3, 4])
    s = tracker.observe([2, 2, 3, 5])
    np.testing.assert_allclose(s.state, [2, 2, 2, 0, 3, 0, 5, 2])
    assert tracker.initialized(0) and tracker.initialized(1)


def test_monte_carlo_filter_beats_raw_measurements():
    rng = np.random.default_rng(99)
    h = measurement_matrix()
    truth = cv_truth(12)
    filt, raw = [], []
    for _ in range(500):
        tracker = JointTracker(FilterConfig.default(T))
        f_err, r_err = [], []
        for x in truth:
            z = h @ x + rng.normal(scale=0.5, size=4)
            est = tracker.observe(z)
            f_err.append(np.sum((h @ est.state - h @ x) ** 2))
            r_err.append(np.sum((z - h @ x) ** 2))
        filt.append(np.mean(f_err))
        raw.append(np.mean(r_err))
    assert np.mean(filt) < np.mean(raw)
