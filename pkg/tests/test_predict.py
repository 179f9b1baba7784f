"""Frequency-channel bank: stepping, schedules, continuation runs."""

import numpy as np
import pytest

from oscint.predict import (
    ModulatorSchedule,
    PredictorSpec,
    predict_series,
    prediction_step,
    predictive_basis,
)


def test_spec_validation_and_rotator_entries():
    pspec = PredictorSpec((2.0,), tau_y=10.0)
    assert pspec.n_channels == 1
    assert pspec.w_diag[0] == pytest.approx(1.0 + 0.12566370614359174j, abs=1e-15)
    with pytest.raises(ValueError, match="distinct"):
        PredictorSpec((3.0, 3.0))
    with pytest.raises(ValueError, match="non-negative"):
        PredictorSpec((-1.0,))
    with pytest.raises(ValueError):
        pspec.w_diag[0] = 0.0


def test_prediction_step_single_channel_hand_case():
    pspec = PredictorSpec((2.0,), tau_y=10.0)
    y1 = prediction_step(pspec, np.array([1.0 + 0j]), 0.0, 0.0, 0.0, 0.1)
    assert y1[0] == pytest.approx(1.0 + 0.0012566370614359175j, abs=1e-16)


def test_prediction_step_competition_hand_case():
    # Two unit channels, input 2, b = 1: beta = 1/2, each channel's
    # competition is the other's real part (1), so the drive is w_j - 1/2.
    pspec = PredictorSpec((0.0, 5.0), tau_y=10.0)
    y = np.array([1.0 + 0j, 1.0 + 0j])
    out = prediction_step(pspec, y, 2.0, 0.0, 1.0, 1.0)
    assert out[0] == pytest.approx(1.05 + 0j, abs=1e-15)
    assert out[1] == pytest.approx(1.05 + 0.03141592653589793j, abs=1e-15)


def test_real_and_complex_competition_agree_on_real_states():
    pspec = PredictorSpec((1.0, 3.0, 7.0))
    rng = np.random.default_rng(11)
    y = rng.standard_normal(3).astype(np.complex128)
    real_form = prediction_step(pspec, y, 0.4, 0.2, 0.6, 0.5, real_input=True)
    complex_form = prediction_step(pspec, y, 0.4, 0.2, 0.6, 0.5, real_input=False)
    assert np.abs(real_form - complex_form).max() < 1e-15

    y_complex = y + 1j * rng.standard_normal(3)
    real_form = prediction_step(pspec, y_complex, 0.4, 0.2, 0.6, 0.5, real_input=True)
    complex_form = prediction_step(pspec, y_complex, 0.4, 0.2, 0.6, 0.5,
                                   real_input=False)
    assert np.abs(real_form - complex_form).max() > 1e-6


def test_predictive_basis_shape_and_zero_frequency_hold():
    pspec = PredictorSpec((0.0, 4.0))
    basis = predictive_basis(pspec, 0, horizon=50.0, dt=0.5)
    assert basis.shape == (101,)
    assert basis[0] == 1.0 + 0j
    # the zero-frequency channel with zero gains is an exact hold
    assert np.array_equal(basis, np.ones(101, dtype=np.complex128))
    with pytest.raises(ValueError, match="channel"):
        predictive_basis(pspec, 2, horizon=10.0, dt=0.5)


def test_predictive_basis_first_order_in_dt():
    pspec = PredictorSpec((3.0,), tau_y=10.0)
    horizon = 100.0
    w = pspec.w_diag[0]
    exact = np.exp((w - 1.0) * horizon / 10.0)
    errs = []
    for dt in (0.5, 0.25):
        basis = predictive_basis(pspec, 0, horizon=horizon, dt=dt)
        errs.append(abs(basis[-1] - exact))
    assert errs[0] / errs[1] == pytest.approx(2.0, rel=0.1)


def test_schedule_lookup_and_validation():
    sched = ModulatorSchedule(((0.0, 1.0, 2.0), (10.0, 3.0, 4.0)))
    assert sched.at(-5.0) == (1.0, 2.0)
    assert sched.at(0.0) == (1.0, 2.0)
    assert sched.at(9.999) == (1.0, 2.0)
    assert sched.at(10.0) == (3.0, 4.0)
    assert sched.at(1e9) == (3.0, 4.0)
    with pytest.raises(ValueError, match="sorted"):
        ModulatorSchedule(((5.0, 0.0, 0.0), (0.0, 0.0, 0.0)))
    with pytest.raises(ValueError, match="at least one"):
        ModulatorSchedule(())


def test_predict_series_zero_input_stays_zero():
    pspec = PredictorSpec((2.0, 8.0))
    sched = ModulatorSchedule(((-100.0, 0.1, 0.1), (0.0, 0.0, 0.0)))
    result = predict_series(pspec, np.zeros(500), sched, horizon=100.0, dt=0.2)
    assert np.all(result.y == 0)
    assert np.all(result.readout == 0)


def test_predict_series_timeline_and_index():
    pspec = PredictorSpec((1.0,))
    sched = ModulatorSchedule(((-50.0, 0.1, 0.1), (0.0, 0.0, 0.0)))
    result = predict_series(pspec, np.zeros(100), sched, horizon=20.0, dt=0.5)
    assert result.times[0] == pytest.approx(-50.0)
    assert result.times[-1] == pytest.approx(20.0)
    assert len(result.times) == 141
    assert result.sample_index(0.0) == 100
    with pytest.raises(ValueError, match="1-d"):
        predict_series(pspec, np.zeros((5, 2)), sched, horizon=10.0, dt=0.5)


def test_free_run_conserves_channel_magnitudes():
    pspec = PredictorSpec((2.0, 8.0), tau_y=10.0)
    dt = 0.1
    past_t = np.arange(-500.0, 0.0, dt)
    x = np.sin(2 * np.pi * 2e-3 * past_t) + 0.5 * np.sin(2 * np.pi * 8e-3 * past_t)
    sched = ModulatorSchedule(((-500.0, 0.01, 0.01), (0.0, 0.0, 0.0)))
    result = predict_series(pspec, x, sched, horizon=2000.0, dt=dt)
    i0 = result.sample_index(0.0)
    mags0 = np.abs(result.y[i0])
    assert mags0.min() > 1e-4
    drift = np.abs(np.abs(result.y[i0:]) - mags0).max()
    assert drift < 1e-12 * mags0.max()


def test_channels_select_their_own_frequency():
    pspec = PredictorSpec((1.0, 2.0, 4.0, 8.0), tau_y=10.0)
    dt = 0.2
    past_t = np.arange(-2500.0, 0.0, dt)
    x = np.sin(2 * np.pi * 4e-3 * past_t)
    sched = ModulatorSchedule(((-2500.0, 0.1, 0.1), (0.0, 0.0, 0.0)))
    result = predict_series(pspec, x, sched, horizon=0.0, dt=dt)
    mags = np.abs(result.y[-1])
    assert int(np.argmax(mags)) == 2
    assert mags[2] > 3.0 * np.delete(mags, 2).max()


def test_raised_recurrent_gain_damps_every_channel():
    pspec = PredictorSpec((2.0, 8.0), tau_y=10.0)
    dt = 0.1
    past_t = np.arange(-200.0, 0.0, dt)
    x = np.sin(2 * np.pi * 2e-3 * past_t)
    sched = ModulatorSchedule(((-200.0, 0.1, 0.1), (0.0, 5.0, 0.0)))
    result = predict_series(pspec, x, sched, horizon=500.0, dt=dt)
    i0 = result.sample_index(0.0)
    mags = np.abs(result.y[i0:])
    assert np.all(np.diff(mags, axis=0) <= 0)
    assert mags[-1].max() < 1e-3 * mags[0].max()
