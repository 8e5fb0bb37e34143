import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prony_adapt.errors import DivergenceError, LengthMismatch
from prony_adapt.lms import LmsConfig, LmsState, denoise_experiment, lms_run, lms_step
from prony_adapt.signals import ComponentSpec, gaussian_noise, gen_damped_sinusoids


def single_tap(w):
    return LmsState(weights=[w], delay_line=[0.0])


def test_step_hand_computed():
    cfg = LmsConfig(taps=1, mu=0.5)
    y, e, s = lms_step(single_tap(0.0), 1.0, 1.0, cfg)
    assert (y, e) == (0.0, 1.0)
    np.testing.assert_array_equal(s.weights, [0.5])
    y, e, s = lms_step(s, 1.0, 1.0, cfg)
    assert (y, e) == (0.5, 0.5)
    np.testing.assert_array_equal(s.weights, [0.75])


def test_step_zero_mu():
    y, e, s = lms_step(single_tap(0.3), 2.0, 1.0, LmsConfig(taps=1, mu=0.0))
    np.testing.assert_array_equal(s.weights, [0.3])


def test_delay_line_newest_first():
    st0 = LmsState(weights=np.zeros(3), delay_line=[1.0, 2.0, 3.0])
    _, _, s = lms_step(st0, 9.0, 0.0, LmsConfig(taps=3))
    np.testing.assert_array_equal(s.delay_line, [9.0, 1.0, 2.0])


def test_zero_reference():
    desired = np.sin(np.arange(50))
    r = lms_run(LmsConfig(taps=4, mu=0.1), np.zeros(50), desired)
    np.testing.assert_array_equal(r.y, 0)
    np.testing.assert_array_equal(r.e, desired)
    np.testing.assert_array_equal(r.final_state.weights, 0)


def test_system_identification():
    taps = np.array([0.7, -0.2])
    u = gaussian_noise(5000, 1.0, 3)
    d = np.convolve(u, taps)[: u.shape[0]]
    r = lms_run(LmsConfig(taps=2, mu=0.01), u, d)
    np.testing.assert_allclose(r.final_state.weights, taps, rtol=0.05)


def test_divergence():
    u = gaussian_noise(2000, 1.0, 4)
    with pytest.raises(DivergenceError) as info:
        lms_run(LmsConfig(taps=4, mu=10.0), u, u)
    assert info.value.step is not None and 0 < info.value.step < 2000
    assert f"step {info.value.step}" in str(info.value)


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        lms_run(LmsConfig(), np.zeros(3), np.zeros(4))


def test_initial_weights():
    cfg = LmsConfig(taps=2, mu=0.0, initial_weights=[1.0, 0.5])
    r = lms_run(cfg, [1.0, 2.0, 0.0], [0.0, 0.0, 0.0])
    np.testing.assert_array_equal(r.y, [1.0, 2.5, 1.0])


def test_history():
    r = lms_run(LmsConfig(taps=3, mu=0.05), np.ones(10), np.ones(10), record_history=True)
    assert r.weight_history.shape == (10, 3)
    np.testing.assert_array_equal(r.weight_history[-1], r.final_state.weights)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 8), st.floats(0, 0.05))
def test_invariants(seed, taps, mu):
    rng = np.random.default_rng(seed)
    ref, des = rng.standard_normal(80), rng.standard_normal(80)
    r = lms_run(LmsConfig(taps=taps, mu=mu), ref, des, record_history=True)
    np.testing.assert_array_equal(r.e, des - r.y)
    np.testing.assert_allclose(r.e + r.y, des, rtol=1e-15, atol=1e-15)
    if mu == 0:
        assert np.all(r.weight_history == 0)
    again = lms_run(LmsConfig(taps=taps, mu=mu), ref, des)
    assert again.e.tobytes() == r.e.tobytes()


def test_mu_zero_frozen_nonzero_start():
    cfg = LmsConfig(taps=3, mu=0.0, initial_weights=[0.2, -0.1, 0.4])
    rng = np.random.default_rng(0)
    r = lms_run(cfg, rng.standard_normal(100), rng.standard_normal(100), record_history=True)
    assert np.all(r.weight_history == np.array([0.2, -0.1, 0.4]))


def test_denoise_no_noise():
    clean, _ = gen_damped_sinusoids([ComponentSpec(1.0, 0.0, 0.05)], 64)
    recovered, pm = denoise_experiment(clean, np.zeros(64), LmsConfig())
    np.testing.assert_array_equal(recovered, clean.samples)
    assert pm == 64


def test_denoise_error_decreases():
    n = 1000
    clean, _ = gen_damped_sinusoids([ComponentSpec(1.0, 0.0, 0.01)], n)
    noise = gaussian_noise(n, 0.1, 0)
    recovered, pm = denoise_experiment(clean, noise, LmsConfig(taps=32, mu=0.01))
    err = (recovered - clean.samples) ** 2
    q = n // 4
    assert err[-q:].mean() < err[:q].mean()
    assert pm < n
