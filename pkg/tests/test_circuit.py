"""Conductance-circuit realization: gain units, compartment cells, simulator."""

import numpy as np
import pytest

from oscint.circuit import (
    CircuitParams,
    CircuitState,
    pfc_step,
    simulate_circuit,
    split_signed,
    steady_state_vs,
    thalamic_step,
    total_conductance,
)
from oscint.model import NetworkSpec


def test_split_signed_partition():
    plus, minus = split_signed(np.array([1.5, -2.0, 0.0]))
    assert np.array_equal(plus, [1.5, 0.0, 0.0])
    assert np.array_equal(minus, [0.0, 2.0, 0.0])
    v = np.random.default_rng(3).standard_normal(20)
    plus, minus = split_signed(v)
    assert np.array_equal(plus - minus, v)
    assert np.all(plus * minus == 0)


def test_total_conductance_values():
    params = CircuitParams()
    assert total_conductance(params, 0.0, 0.0) == pytest.approx(1.0)
    # defaults R_a = 10, R_b = 1: 1 + 1/20 + 1/2
    assert total_conductance(params, 1.0, 1.0) == pytest.approx(1.55)
    equal_r = CircuitParams(r_apical=10.0, r_basal=10.0)
    assert total_conductance(equal_r, 1.0, 1.0) == pytest.approx(1.1)
    # each dendritic term saturates at 1/R
    g_inf = total_conductance(params, 1e12, 1e12)
    assert g_inf == pytest.approx(1.0 + 0.1 + 1.0, rel=1e-9)


def test_steady_state_vs_matches_rate_target_when_gains_off():
    # With both gains at zero and unit soma leak the equilibrium potential
    # is exactly the recurrent prediction, the rate model's relaxation target.
    params = CircuitParams()
    yhat = np.array([0.3, -0.7, 0.0])
    out = steady_state_vs(params, np.array([5.0, 5.0, 5.0]), yhat, 0.0, 0.0)
    assert np.array_equal(out, yhat)


def test_steady_state_vs_hand_case():
    params = CircuitParams()
    v = steady_state_vs(params, np.array([1.0]), np.array([0.0]), 1.0, 1.0)
    assert v[0] == pytest.approx(0.5 / 1.55, abs=1e-15)
    assert v[0] == pytest.approx(0.32258064516129037, abs=1e-12)


def test_params_validation():
    with pytest.raises(ValueError):
        CircuitParams(r_basal=0.0)
    with pytest.raises(ValueError):
        CircuitParams(g_leak_soma=-1.0)


def test_gain_unit_fixed_point_mixed_signs():
    # Weight [2, -3] on input [0.5, 0.25]: excitatory conductance 1.0,
    # inhibitory 0.75, so the potential settles at (1 - 0.75)/(1 + 0.75 + 1).
    spec = NetworkSpec.build(1, 2, w_ax=np.array([[2.0, -3.0]]))
    params = CircuitParams()
    state = CircuitState.zeros(1)
    x = np.array([0.5, 0.25])
    zeros = np.zeros(1)
    a, b = state.a, state.b
    for _ in range(5000):
        state.a, state.b = a, b
        a, b = thalamic_step(spec, params, state, x, zeros, zeros, 0.01)
    assert a[0] == pytest.approx(0.25 / 2.75, abs=1e-12)
    assert a[0] == pytest.approx(0.09090909090909091, abs=1e-12)
    assert b[0] == pytest.approx(0.0, abs=1e-15)


def test_gain_unit_fixed_point_net_inhibitory():
    spec = NetworkSpec.build(1, 2, w_ax=np.array([[-1.0, 0.0]]))
    params = CircuitParams()
    state = CircuitState.zeros(1)
    x = np.array([0.4, 0.0])
    zeros = np.zeros(1)
    a, b = state.a, state.b
    for _ in range(5000):
        state.a, state.b = a, b
        a, b = thalamic_step(spec, params, state, x, zeros, zeros, 0.01)
    assert a[0] == pytest.approx(-0.4 / 1.4, abs=1e-12)
    # conductance ratios keep every gain potential strictly inside (-1, 1)
    assert -1.0 < a[0] < 1.0


def _relax_single_cell(w_self=0.3, z=1.0, n_steps=8000, dt=0.05):
    spec = NetworkSpec.build(1, 1, w_yy=np.array([[w_self]]),
                             w_zx=np.array([[1.0]]))
    params = CircuitParams()
    state = CircuitState.zeros(1)
    state.a = np.ones(1)
    state.b = np.ones(1)
    x_pair = split_signed(np.array([z]))
    for _ in range(n_steps):
        state = pfc_step(spec, params, state, x_pair, dt)
    return spec, params, state


def test_compartment_cell_relaxes_to_hand_value():
    # One self-coupled cell, both gains held at 1, unit drive: the somatic
    # equilibrium solves g_v v = 0.5 z + 0.5 w v, i.e. v = 0.5/(1.55 - 0.15).
    _, _, state = _relax_single_cell()
    assert state.v_plus[0] == pytest.approx(0.35714285714285715, abs=1e-10)
    assert state.v_minus[0] == pytest.approx(-state.v_plus[0], abs=1e-12)
    assert state.y_net[0] == pytest.approx(state.v_plus[0], abs=1e-12)


def test_compartment_currents_balance_at_equilibrium():
    spec, params, state = _relax_single_cell()
    v, va, vb = state.v_plus[0], state.va_plus[0], state.vb_plus[0]
    i_as = (va - v) / params.r_apical
    i_bs = (vb - v) / params.r_basal
    soma = -params.g_leak_soma * v + 1.0 + i_as + i_bs
    apical = -(1.0 / params.r_apical) * va + 0.3 * state.y_net[0] - i_as
    basal = -(1.0 / params.r_basal) * vb - 1.0 - i_bs
    for residual in (soma, apical, basal):
        assert abs(residual) < 1e-10


def test_equilibrium_matches_steady_state_formula():
    spec, params, state = _relax_single_cell()
    v = steady_state_vs(params, np.array([1.0]), 0.3 * state.y_net,
                        np.ones(1), np.ones(1))
    assert v[0] == pytest.approx(state.v_plus[0], abs=1e-10)


def test_circuit_rejects_complex_weights():
    spec = NetworkSpec.build(1, 1, w_yy=np.array([[0.5 + 0.5j]]))
    params = CircuitParams()
    state = CircuitState.zeros(1)
    with pytest.raises(ValueError, match="real-valued"):
        pfc_step(spec, params, state, split_signed(np.zeros(1)), 0.01)


def test_circuit_accepts_complex_dtype_with_zero_imag():
    spec = NetworkSpec.build(1, 1, w_yy=np.array([[0.5 + 0j]]))
    state = pfc_step(spec, CircuitParams(), CircuitState.zeros(1),
                     split_signed(np.zeros(1)), 0.01)
    assert np.all(np.isfinite(state.v_plus))


def test_on_off_pair_stays_antisymmetric():
    # Every signed source reaches the OFF cell negated, so from a symmetric
    # start the two somas track exact mirror images even through rectified
    # recurrent rates.
    spec = NetworkSpec.build(
        2, 1,
        w_yy=np.array([[0.2, -0.4], [0.3, 0.1]]),
        w_zx=np.array([[1.0], [-0.5]]),
        w_ax=np.full((2, 1), 0.8),
        w_bx=np.full((2, 1), 0.8),
    )
    traj = simulate_circuit(
        spec, CircuitParams(),
        lambda t: np.array([np.sin(0.01 * t)]),
        0.0, 50.0, dt=0.01,
    )
    assert np.abs(traj.v_plus + traj.v_minus).max() < 1e-12
    assert np.abs(traj.va_plus + traj.va_minus).max() < 1e-12
    on = np.maximum(traj.v_plus, 0.0)
    off = np.maximum(traj.v_minus, 0.0)
    assert np.all(on * off < 1e-24)


def test_simulate_circuit_recording():
    spec = NetworkSpec.build(1, 1)
    traj = simulate_circuit(spec, CircuitParams(), lambda t: np.zeros(1),
                            0.0, 1.0, dt=0.1, record_stride=5)
    assert traj.n_samples == 3
    assert traj.dt == pytest.approx(0.5)
    assert np.allclose(traj.times, [0.0, 0.5, 1.0])
    assert traj.sample_index(0.5) == 1
    with pytest.raises(ValueError, match="record_stride"):
        simulate_circuit(spec, CircuitParams(), lambda t: np.zeros(1),
                         0.0, 1.0, dt=0.1, record_stride=3)
