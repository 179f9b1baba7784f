"""Conductance-based circuit realization of the gated integrator.

Each model neuron becomes an ON/OFF pair of three-compartment cells (soma,
apical dendrite, basal dendrite), and each gain becomes a single-compartment
unit whose membrane potential tracks a ratio of synaptic conductances.
Signals are carried by firing rates, which are rectified potentials, so every
signed quantity is split across the pair: the ON cell carries the positive
part and the OFF cell the negative part.

Signed synaptic weights split the same way — positive entries excite, the
magnitudes of negative entries drive the opposing conductance — giving the
exact identity  g_e - g_i = sum_k w_k x_k  for any signed weights and inputs.

Wiring per cell (ON side; OFF side swaps every signed source):

* soma: leak ``g_vs``, feedforward current ``+z``, coupling currents from
  both dendrites through the axial resistances;
* apical dendrite: recurrent current ``+yhat``, leak ``a+/R_a`` set by the
  a-gain unit, axial coupling to the soma;
* basal dendrite: feedforward current ``-z``, leak ``b+/R_b`` set by the
  b-gain unit, axial coupling to the soma.

Dendritic potentials relax instantaneously in the model's derivation; here
they are integrated explicitly with a small time step.  Only real-valued
networks can be realized (rates are real).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .model import DivergenceError, NetworkSpec, rectify


@dataclass(frozen=True)
class CircuitParams:
    """Biophysical constants shared by every cell in the circuit.

    Potentials are normalized: leak reversal 0, excitatory reversal +1,
    inhibitory reversal -1.  Resistances couple dendrites to the soma;
    ``g_leak_gain`` is the leak of the single-compartment gain units.
    """

    capacitance: float = 1.0
    g_leak_soma: float = 1.0
    r_apical: float = 10.0
    r_basal: float = 1.0
    g_leak_gain: float = 1.0
    e_leak: float = 0.0
    e_exc: float = 1.0
    e_inh: float = -1.0

    def __post_init__(self) -> None:
        if min(self.capacitance, self.g_leak_soma, self.r_apical,
               self.r_basal, self.g_leak_gain) <= 0:
            raise ValueError("capacitance, leaks and resistances must be positive")


@dataclass
class CircuitState:
    """Potentials of every compartment plus the gain-unit potentials."""

    v_plus: np.ndarray      # (N,) ON soma
    v_minus: np.ndarray     # (N,) OFF soma
    va_plus: np.ndarray     # (N,) ON apical dendrite
    va_minus: np.ndarray    # (N,) OFF apical dendrite
    vb_plus: np.ndarray     # (N,) ON basal dendrite
    vb_minus: np.ndarray    # (N,) OFF basal dendrite
    a: np.ndarray           # (N,) a-gain unit potentials
    b: np.ndarray           # (N,) b-gain unit potentials
    t: float = 0.0

    @classmethod
    def zeros(cls, n: int, t: float = 0.0) -> "CircuitState":
        return cls(*(np.zeros(n) for _ in range(8)), t=t)

    @property
    def y_net(self) -> np.ndarray:
        """Signed response carried by the pair: rate(ON) - rate(OFF)."""
        return rectify(self.v_plus) - rectify(self.v_minus)


def split_signed(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split a signed array into its rectified positive and negative parts."""
    v = np.asarray(values)
    return rectify(v), rectify(-v)


def _paired_drive(
    w: np.ndarray, x_pos: np.ndarray, x_neg: np.ndarray,
    c_pos: np.ndarray, c_neg: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Drive received by the ON and OFF targets of a signed pathway.

    Positive weights connect like to like; negative weights cross over.
    The difference of the two outputs equals w @ (x_pos - x_neg) + c exactly.
    """
    w_pos, w_neg = split_signed(w)
    same = w_pos @ x_pos + w_neg @ x_neg + c_pos
    cross = w_pos @ x_neg + w_neg @ x_pos + c_neg
    return same, cross


def total_conductance(
    params: CircuitParams, a_plus: np.ndarray, b_plus: np.ndarray
) -> np.ndarray:
    """Effective somatic conductance with both dendrites attached.

    g_v = g_vs + a+/(R_a (1+a+)) + b+/(R_b (1+b+)); each dendritic term
    saturates at 1/R as its gain grows, and vanishes when the gain is zero.
    """
    a_plus = np.asarray(a_plus, dtype=np.float64)
    b_plus = np.asarray(b_plus, dtype=np.float64)
    return (
        params.g_leak_soma
        + a_plus / (params.r_apical * (1.0 + a_plus))
        + b_plus / (params.r_basal * (1.0 + b_plus))
    )


def steady_state_vs(
    params: CircuitParams,
    z: np.ndarray,
    yhat: np.ndarray,
    a_plus: np.ndarray,
    b_plus: np.ndarray,
) -> np.ndarray:
    """Somatic potential once all compartments equilibrate.

    v_s = [ (b+/(1+b+)) z + yhat/(1+a+) ] / g_v.  Matches the rate model's
    per-step target exactly when g_v = 1.
    """
    g_v = total_conductance(params, a_plus, b_plus)
    beta = b_plus / (1.0 + b_plus)
    return (beta * np.asarray(z) + np.asarray(yhat) / (1.0 + a_plus)) / g_v


def thalamic_step(
    spec: NetworkSpec,
    params: CircuitParams,
    state: CircuitState,
    x: np.ndarray,
    y_plus: np.ndarray,
    y_minus: np.ndarray,
    dt: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Advance the two gain-unit populations by one step.

    Each unit's potential follows C dv/dt = -(g_e + g_i + g_l) v + g_e - g_i,
    with conductances assembled by the signed-weight split from the input and
    the ON/OFF rates.  Returns the new (a, b) potentials.
    """
    x_pos, x_neg = split_signed(np.asarray(x))

    def advance(v, w_x, w_y, c):
        c_pos, c_neg = split_signed(c)
        ge_x, gi_x = _paired_drive(w_x, x_pos, x_neg, c_pos, c_neg)
        ge_y, gi_y = _paired_drive(w_y, y_plus, y_minus,
                                   np.zeros_like(c), np.zeros_like(c))
        g_e = ge_x + ge_y
        g_i = gi_x + gi_y
        g = g_e + g_i + params.g_leak_gain
        return v + (dt / params.capacitance) * (-g * v + g_e - g_i)

    a_new = advance(state.a, spec.w_ax, spec.w_ay, spec.c_a)
    b_new = advance(state.b, spec.w_bx, spec.w_by, spec.c_b)
    return a_new, b_new


def pfc_step(
    spec: NetworkSpec,
    params: CircuitParams,
    state: CircuitState,
    x_pair: tuple[np.ndarray, np.ndarray],
    dt: float,
) -> CircuitState:
    """Advance every ON/OFF three-compartment cell by one step.

    ``x_pair`` is the rectified (positive, negative) input pair (see
    :func:`split_signed`).  Gain potentials pass through unchanged: the
    gain-unit update lives in :func:`thalamic_step` and both read the same
    pre-step state, keeping the whole circuit synchronous.
    """
    if np.iscomplexobj(spec.w_zx) and np.any(spec.w_zx.imag) or \
            np.iscomplexobj(spec.w_yy) and np.any(spec.w_yy.imag):
        raise ValueError("circuit realization requires a real-valued network")
    x_pos, x_neg = (np.asarray(v) for v in x_pair)
    scale = dt / params.capacitance

    a_plus = rectify(state.a)
    b_plus = rectify(state.b)
    g_va = a_plus / params.r_apical
    g_vb = b_plus / params.r_basal

    y_plus = rectify(state.v_plus)
    y_minus = rectify(state.v_minus)

    cz_pos, cz_neg = split_signed(spec.c_z.real)
    cy_pos, cy_neg = split_signed(spec.c_yhat.real)
    iz_pos, iz_neg = _paired_drive(spec.w_zx.real, x_pos, x_neg, cz_pos, cz_neg)
    iy_pos, iy_neg = _paired_drive(spec.w_yy.real, y_plus, y_minus, cy_pos, cy_neg)

    def side(v, va, vb, i_z_soma, i_z_basal, i_y_apical):
        i_as = (va - v) / params.r_apical
        i_bs = (vb - v) / params.r_basal
        v_new = v + scale * (-params.g_leak_soma * v + i_z_soma + i_as + i_bs)
        va_new = va + scale * (-g_va * va + i_y_apical - i_as)
        vb_new = vb + scale * (-g_vb * vb + i_z_basal - i_bs)
        return v_new, va_new, vb_new

    # ON cells receive +z at the soma, -z at the basal dendrite, +yhat at the
    # apical dendrite; OFF cells receive every signed source negated.
    vp, vap, vbp = side(
        state.v_plus, state.va_plus, state.vb_plus,
        iz_pos - iz_neg, iz_neg - iz_pos, iy_pos - iy_neg,
    )
    vm, vam, vbm = side(
        state.v_minus, state.va_minus, state.vb_minus,
        iz_neg - iz_pos, iz_pos - iz_neg, iy_neg - iy_pos,
    )

    new = CircuitState(
        v_plus=vp, v_minus=vm, va_plus=vap, va_minus=vam,
        vb_plus=vbp, vb_minus=vbm,
        a=state.a.copy(), b=state.b.copy(), t=state.t + dt,
    )
    return new


@dataclass
class CircuitTrajectory:
    """Recorded circuit run; one row per recorded sample."""

    dt: float               # spacing of recorded samples, ms
    times: np.ndarray
    v_plus: np.ndarray
    v_minus: np.ndarray
    va_plus: np.ndarray
    va_minus: np.ndarray
    vb_plus: np.ndarray
    vb_minus: np.ndarray
    a: np.ndarray
    b: np.ndarray

    @property
    def y_net(self) -> np.ndarray:
        return rectify(self.v_plus) - rectify(self.v_minus)

    @property
    def n_samples(self) -> int:
        return len(self.times)

    def sample_index(self, t: float) -> int:
        idx = int(round((t - self.times[0]) / self.dt))
        if idx < 0 or idx >= self.n_samples:
            raise IndexError(f"time {t} outside trajectory range")
        return idx


def simulate_circuit(
    spec: NetworkSpec,
    params: CircuitParams,
    input_fn: Callable[[float], np.ndarray],
    t_start: float,
    t_stop: float,
    dt: float = 0.01,
    init: Optional[CircuitState] = None,
    record_stride: int = 1,
) -> CircuitTrajectory:
    """Integrate the full circuit, recording every ``record_stride``-th step.

    Gain units and compartment cells advance synchronously from the same
    pre-step state.  The compartment coupling is stiff (axial conductances up
    to 1/R_b per unit capacitance), hence the small default step.
    """
    if dt <= 0 or record_stride < 1:
        raise ValueError("dt must be positive and record_stride >= 1")
    n_steps = int(round((t_stop - t_start) / dt))
    if n_steps % record_stride != 0:
        raise ValueError("record_stride must divide the step count")
    n_rec = n_steps // record_stride + 1

    n = spec.n_neurons
    rec = {
        name: np.zeros((n_rec, n))
        for name in ("v_plus", "v_minus", "va_plus", "va_minus",
                     "vb_plus", "vb_minus", "a", "b")
    }
    state = init if init is not None else CircuitState.zeros(n, t=t_start)

    row = 0
    for i in range(n_steps + 1):
        if i % record_stride == 0:
            for name in rec:
                rec[name][row] = getattr(state, name)
            row += 1
        if i == n_steps:
            break
        t = t_start + i * dt
        x = np.asarray(input_fn(t))
        y_plus = rectify(state.v_plus)
        y_minus = rectify(state.v_minus)
        a_new, b_new = thalamic_step(spec, params, state, x, y_plus, y_minus, dt)
        state = pfc_step(spec, params, state, split_signed(x), dt)
        state.a = a_new
        state.b = b_new
        if i % 256 == 0 and not np.all(np.isfinite(state.v_plus)):
            raise DivergenceError(f"non-finite circuit state at t = {t:.6g} ms")

    if not all(np.all(np.isfinite(arr)) for arr in rec.values()):
        raise DivergenceError("non-finite circuit state recorded")
    times = t_start + dt * record_stride * np.arange(n_rec)
    return CircuitTrajectory(dt=dt * record_stride, times=times, **rec)
