"""Core data model for gated recurrent integrator networks.

A network holds a complex-valued recurrent matrix together with two real,
rectified gain populations ("a" and "b") that gate how strongly the recurrent
prediction and the feedforward drive pull on each neuron.  The same structures
are shared by the incremental simulator (:mod:`oscint.dynamics`), the batch
energy solver (:mod:`oscint.batch`), spectral analysis (:mod:`oscint.spectral`)
and the conductance-circuit realization (:mod:`oscint.circuit`).

Shapes and units
----------------
* ``n_neurons`` (N) response units, ``n_inputs`` (M) input channels and
  ``n_readout`` (K) readout channels.
* Response weights/offsets (``w_zx``, ``w_yy``, ``w_ry``, ``c_z``, ``c_yhat``,
  ``c_r``) are complex; gain weights/offsets (``w_ax``, ``w_bx``, ``w_ay``,
  ``w_by``, ``c_a``, ``c_b``) are real.
* Time constants are milliseconds: ``tau_y`` is per-neuron, ``tau_a`` and
  ``tau_b`` are scalars shared by each gain population.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Callable, Optional

import numpy as np


class DivergenceError(RuntimeError):
    """Raised when an iteration produces non-finite state.

    Carries enough context (time or iteration index) to locate the blow-up;
    simulations never silently propagate NaN/Inf.
    """


def rectify(values: np.ndarray | float) -> np.ndarray | float:
    """Elementwise max(value, 0); the only nonlinearity in the model."""
    return np.maximum(values, 0.0)


def _as_complex_matrix(value, rows: int, cols: int, name: str) -> np.ndarray:
    out = np.array(value, dtype=np.complex128, copy=True)
    if out.shape != (rows, cols):
        raise ValueError(f"{name} must have shape {(rows, cols)}, got {out.shape}")
    return out


def _as_real_matrix(value, rows: int, cols: int, name: str) -> np.ndarray:
    out = np.array(value, dtype=np.float64, copy=True)
    if out.shape != (rows, cols):
        raise ValueError(f"{name} must have shape {(rows, cols)}, got {out.shape}")
    return out


def _as_complex_vector(value, size: int, name: str) -> np.ndarray:
    out = np.array(value, dtype=np.complex128, copy=True)
    if out.shape != (size,):
        raise ValueError(f"{name} must have shape {(size,)}, got {out.shape}")
    return out


def _as_real_vector(value, size: int, name: str) -> np.ndarray:
    out = np.array(value, dtype=np.float64, copy=True)
    if out.shape != (size,):
        raise ValueError(f"{name} must have shape {(size,)}, got {out.shape}")
    return out


@dataclass(frozen=True)
class NetworkSpec:
    """Immutable description of one network.

    Construct directly with full matrices, or use :meth:`build` to fill unused
    pathways with zeros.  All arrays are copied and frozen so a spec can be
    shared between threads/processes without defensive copying.
    """

    n_neurons: int
    n_inputs: int
    n_readout: int
    w_zx: np.ndarray        # (N, M) complex, input -> feedforward drive
    w_yy: np.ndarray        # (N, N) complex, recurrent prediction
    w_ry: np.ndarray        # (K, N) complex, linear readout
    w_ax: np.ndarray        # (N, M) real, input -> gain a
    w_bx: np.ndarray        # (N, M) real, input -> gain b
    w_ay: np.ndarray        # (N, N) real, response -> gain a
    w_by: np.ndarray        # (N, N) real, response -> gain b
    c_z: np.ndarray         # (N,) complex offset of the feedforward drive
    c_yhat: np.ndarray      # (N,) complex offset of the recurrent prediction
    c_a: np.ndarray         # (N,) real offset of gain a
    c_b: np.ndarray         # (N,) real offset of gain b
    c_r: np.ndarray         # (K,) complex readout offset
    tau_y: np.ndarray       # (N,) ms, per-neuron response time constants
    tau_a: float            # ms
    tau_b: float            # ms

    def __post_init__(self) -> None:
        n, m, k = self.n_neurons, self.n_inputs, self.n_readout
        if n < 1 or m < 0 or k < 0:
            raise ValueError("n_neurons must be >= 1 and channel counts >= 0")
        coerced = {
            "w_zx": _as_complex_matrix(self.w_zx, n, m, "w_zx"),
            "w_yy": _as_complex_matrix(self.w_yy, n, n, "w_yy"),
            "w_ry": _as_complex_matrix(self.w_ry, k, n, "w_ry"),
            "w_ax": _as_real_matrix(self.w_ax, n, m, "w_ax"),
            "w_bx": _as_real_matrix(self.w_bx, n, m, "w_bx"),
            "w_ay": _as_real_matrix(self.w_ay, n, n, "w_ay"),
            "w_by": _as_real_matrix(self.w_by, n, n, "w_by"),
            "c_z": _as_complex_vector(self.c_z, n, "c_z"),
            "c_yhat": _as_complex_vector(self.c_yhat, n, "c_yhat"),
            "c_a": _as_real_vector(self.c_a, n, "c_a"),
            "c_b": _as_real_vector(self.c_b, n, "c_b"),
            "c_r": _as_complex_vector(self.c_r, k, "c_r"),
            "tau_y": _as_real_vector(self.tau_y, n, "tau_y"),
        }
        for name, arr in coerced.items():
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite entries")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if np.any(coerced["tau_y"] <= 0.0):
            raise ValueError("tau_y entries must be positive")
        if not (self.tau_a > 0.0 and self.tau_b > 0.0):
            raise ValueError("tau_a and tau_b must be positive")
        object.__setattr__(self, "tau_a", float(self.tau_a))
        object.__setattr__(self, "tau_b", float(self.tau_b))
        # Cached flags let the stepper skip matvecs through all-zero gain
        # pathways; results are identical either way.
        object.__setattr__(self, "_w_ay_zero", not np.any(coerced["w_ay"]))
        object.__setattr__(self, "_w_by_zero", not np.any(coerced["w_by"]))
        object.__setattr__(self, "_w_ax_zero", not np.any(coerced["w_ax"]))
        object.__setattr__(self, "_w_bx_zero", not np.any(coerced["w_bx"]))

    @classmethod
    def build(
        cls,
        n_neurons: int,
        n_inputs: int,
        n_readout: int = 0,
        *,
        tau_y: float | np.ndarray = 10.0,
        tau_a: float = 10.0,
        tau_b: float = 10.0,
        **overrides,
    ) -> "NetworkSpec":
        """Create a spec with zero defaults for every pathway not supplied."""
        n, m, k = n_neurons, n_inputs, n_readout
        values = {
            "w_zx": np.zeros((n, m), dtype=np.complex128),
            "w_yy": np.zeros((n, n), dtype=np.complex128),
            "w_ry": np.zeros((k, n), dtype=np.complex128),
            "w_ax": np.zeros((n, m)),
            "w_bx": np.zeros((n, m)),
            "w_ay": np.zeros((n, n)),
            "w_by": np.zeros((n, n)),
            "c_z": np.zeros(n, dtype=np.complex128),
            "c_yhat": np.zeros(n, dtype=np.complex128),
            "c_a": np.zeros(n),
            "c_b": np.zeros(n),
            "c_r": np.zeros(k, dtype=np.complex128),
        }
        unknown = set(overrides) - set(values)
        if unknown:
            raise TypeError(f"unknown NetworkSpec fields: {sorted(unknown)}")
        values.update(overrides)
        tau_vec = np.broadcast_to(np.asarray(tau_y, dtype=np.float64), (n,)).copy()
        return cls(
            n_neurons=n,
            n_inputs=m,
            n_readout=k,
            tau_y=tau_vec,
            tau_a=tau_a,
            tau_b=tau_b,
            **values,
        )

    def replace(self, **changes) -> "NetworkSpec":
        """Return a copy with the given fields replaced."""
        current = {f.name: getattr(self, f.name) for f in fields(self)}
        current.update(changes)
        return NetworkSpec(**current)


@dataclass
class SimState:
    """Instantaneous state: complex responses, raw (unrectified) gains, time."""

    y: np.ndarray           # (N,) complex
    a: np.ndarray           # (N,) real
    b: np.ndarray           # (N,) real
    t: float = 0.0

    @classmethod
    def zeros(cls, spec: NetworkSpec, t: float = 0.0) -> "SimState":
        n = spec.n_neurons
        return cls(
            y=np.zeros(n, dtype=np.complex128),
            a=np.zeros(n),
            b=np.zeros(n),
            t=t,
        )


def input_drive(spec: NetworkSpec, x: np.ndarray) -> np.ndarray:
    """Feedforward drive z = W_zx x + c_z."""
    return spec.w_zx @ np.asarray(x) + spec.c_z


def recurrent_drive(spec: NetworkSpec, y: np.ndarray) -> np.ndarray:
    """Recurrent prediction y_hat = W_yy y + c_yhat."""
    return spec.w_yy @ np.asarray(y) + spec.c_yhat


@dataclass
class Trajectory:
    """Uniformly sampled record of a simulation.

    Sample ``i`` holds the state *at* ``times[i]`` together with the input and
    feedforward drive evaluated at that instant (the values that advance the
    state to sample ``i + 1``).  ``readout`` is filled by callers that attach a
    linear readout; it is not produced by the integrator itself.
    """

    dt: float
    times: np.ndarray       # (T,)
    x: np.ndarray           # (T, M)
    z: np.ndarray           # (T, N) complex
    a: np.ndarray           # (T, N) real, unrectified
    b: np.ndarray           # (T, N) real, unrectified
    y: np.ndarray           # (T, N) complex
    readout: Optional[np.ndarray] = None    # (T, K) complex, optional

    def __post_init__(self) -> None:
        if self.times.ndim != 1 or len(self.times) < 1:
            raise ValueError("times must be a non-empty 1-d array")
        if len(self.times) > 1:
            gaps = np.diff(self.times)
            if not np.allclose(gaps, self.dt, rtol=1e-9, atol=1e-9):
                raise ValueError("times must be uniformly spaced by dt")
        for name in ("x", "z", "a", "b", "y"):
            arr = getattr(self, name)
            if arr.shape[0] != len(self.times):
                raise ValueError(f"{name} and times disagree on sample count")

    @property
    def n_samples(self) -> int:
        return len(self.times)

    def sample_index(self, t: float) -> int:
        """Index of the sample closest to time t (must lie on the grid)."""
        idx = int(round((t - self.times[0]) / self.dt))
        if idx < 0 or idx >= self.n_samples:
            raise IndexError(f"time {t} outside trajectory range")
        return idx


def predicted_series(spec: NetworkSpec, y_series: np.ndarray) -> np.ndarray:
    """Recurrent prediction for every sample of a response series.

    The prediction at sample ``i`` reads the response one sample earlier;
    the first sample, having no predecessor, predicts from itself.
    """
    yhat = np.empty_like(y_series)
    yhat[0] = y_series[0] @ spec.w_yy.T + spec.c_yhat
    if len(y_series) > 1:
        yhat[1:] = y_series[:-1] @ spec.w_yy.T + spec.c_yhat
    return yhat


def mismatch_gain(a_plus: np.ndarray, b_plus: np.ndarray) -> np.ndarray:
    """Excess gain alpha+ defined by (1 + a+) = (1 + b+)(1 + alpha+).

    Clamped at zero: the energy only penalizes recurrent gain in excess of the
    feedforward one.
    """
    return np.maximum((1.0 + a_plus) / (1.0 + b_plus) - 1.0, 0.0)


def _energy_terms(
    y: np.ndarray,
    z: np.ndarray,
    yhat: np.ndarray,
    alpha_plus: np.ndarray,
    b_plus: np.ndarray,
) -> np.ndarray:
    """Per-sample, per-neuron energy summands (before the dt/2 factor)."""
    beta = b_plus / (1.0 + b_plus)
    feed = beta * np.abs(y - z) ** 2
    recur = (1.0 / (1.0 + b_plus)) * np.abs(y - yhat / (1.0 + alpha_plus)) ** 2
    return feed + recur

def energy(spec: NetworkSpec, traj: Trajectory) -> float:
    """Total trajectory energy.

    Each sample contributes a convex mismatch between the response and two
    targets: the feedforward drive (weighted b+/(1+b+)) and the gain-corrected
    recurrent prediction (weighted 1/(1+b+)).  The recurrent prediction is
    treated as data (no dependence on the current sample), so the per-sample
    curvature in each response coordinate is exactly 1.
    """
    for name in ("y", "z", "a", "b"):
        if not np.all(np.isfinite(getattr(traj, name))):
            raise ValueError(f"trajectory field {name} contains non-finite values")
    a_plus = rectify(traj.a)
    b_plus = rectify(traj.b)
    alpha_plus = mismatch_gain(a_plus, b_plus)
    yhat = predicted_series(spec, traj.y)
    terms = _energy_terms(traj.y, traj.z, yhat, alpha_plus, b_plus)
    return float(0.5 * traj.dt * terms.sum())


InputFunction = Callable[[float], np.ndarray]
