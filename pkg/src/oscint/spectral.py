"""Spectral analysis of recurrent networks.

During a memory delay (both gain populations at zero) the model reduces to
the linear system  dy/dt = diag(1/tau_y) (W - I) y,  so everything about
delay-period behaviour — decay, sustained memory, oscillation frequency,
instability — is read off the spectrum of the effective matrix
W' = diag(1/tau_y)(W - I).  With heterogeneous time constants there is no
eigenvalue-to-eigenvalue correspondence between W and W', so classification
uses only W'.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import NetworkSpec

DECAYING = "decaying"
SUSTAINED = "sustained"
STABLE_OSCILLATION = "stable-oscillation"
UNSTABLE = "unstable"

#: |Re(lambda)| window used when counting sustained dimensions.
ANALYSIS_TOL = 1e-6
#: |Re(lambda')| window used when classifying stability.
CLASSIFY_TOL = 1e-3


def effective_matrix(w_yy: np.ndarray, tau_y) -> np.ndarray:
    """Delay-period generator W' = diag(1/tau_y) (W - I), units 1/ms."""
    w = np.asarray(w_yy)
    n = w.shape[0]
    tau = np.broadcast_to(np.asarray(tau_y, dtype=np.float64), (n,))
    if np.any(tau <= 0):
        raise ValueError("time constants must be positive")
    return (w - np.eye(n)) / tau[:, None]


def oscillation_frequencies(w_prime: np.ndarray, tol: float = CLASSIFY_TOL) -> np.ndarray:
    """Frequencies (Hz) of the marginally stable oscillatory modes.

    Takes every eigenvalue of W' with |Re| <= tol and Im > 0 (one per
    conjugate pair) and converts its imaginary part from rad/ms to Hz.
    """
    lam = np.linalg.eigvals(np.asarray(w_prime))
    keep = (np.abs(lam.real) <= tol) & (lam.imag > tol)
    freqs = lam.imag[keep] * 1000.0 / (2.0 * np.pi)
    return np.sort(freqs)


def classify_stability(w_prime: np.ndarray, tol: float = CLASSIFY_TOL) -> str:
    """Classify delay-period behaviour from the spectrum of W'.

    * any Re > tol            -> unstable
    * max Re within +-tol     -> stable-oscillation if the marginal modes have
                                 nonzero imaginary part, else sustained
    * otherwise               -> decaying
    """
    lam = np.linalg.eigvals(np.asarray(w_prime))
    max_re = float(lam.real.max())
    if max_re > tol:
        return UNSTABLE
    if max_re >= -tol:
        marginal = lam[np.abs(lam.real) <= tol]
        if np.any(np.abs(marginal.imag) > tol):
            return STABLE_OSCILLATION
        return SUSTAINED
    return DECAYING


def sustained_dimensionality(w_yy: np.ndarray, tol: float = ANALYSIS_TOL) -> int:
    """Number of eigenvalues of W itself with real part within tol of 1.

    For uniform time constants these are exactly the modes W' holds at the
    imaginary axis — the dimensionality of what the network can store without
    decay.
    """
    lam = np.linalg.eigvals(np.asarray(w_yy))
    return int(np.sum(np.abs(lam.real - 1.0) <= tol))


@dataclass
class SpectralReport:
    """Summary of one recurrent matrix / time-constant pairing."""

    eigenvalues: np.ndarray             # spectrum of W
    eigenvalues_effective: np.ndarray   # spectrum of W', 1/ms
    stability: str
    frequencies_hz: np.ndarray
    dimensionality: int


def analyze(w_yy: np.ndarray, tau_y) -> SpectralReport:
    """Full spectral report for a recurrent matrix with given time constants."""
    w = np.asarray(w_yy)
    w_prime = effective_matrix(w, tau_y)
    return SpectralReport(
        eigenvalues=np.linalg.eigvals(w),
        eigenvalues_effective=np.linalg.eigvals(w_prime),
        stability=classify_stability(w_prime),
        frequencies_hz=oscillation_frequencies(w_prime),
        dimensionality=sustained_dimensionality(w),
    )


def analyze_network(spec: NetworkSpec) -> SpectralReport:
    return analyze(spec.w_yy, spec.tau_y)


def _check_orthonormal(v: np.ndarray, tol: float = 1e-8) -> None:
    gram = v.conj().T @ v
    if not np.allclose(gram, np.eye(v.shape[1]), rtol=0.0, atol=tol):
        raise ValueError("encoder columns are not orthonormal")


def steady_state_project(v: np.ndarray, y0: np.ndarray) -> np.ndarray:
    """Component of ``y0`` surviving in the sustained subspace spanned by
    the orthonormal columns of ``v``: returns V (V* y0)."""
    v = np.asarray(v, dtype=np.complex128)
    _check_orthonormal(v)
    return v @ (v.conj().T @ np.asarray(y0, dtype=np.complex128))


def linear_readout(spec: NetworkSpec, y: np.ndarray) -> np.ndarray:
    """Readout r = W_ry y + c_r."""
    return spec.w_ry @ np.asarray(y) + spec.c_r


def magnitude_readout(v: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Phase-insensitive readout |V* y|, one magnitude per encoder column.

    Invariant under y -> y e^{i phi}, so an oscillating stored pattern reads
    out as a constant.
    """
    v = np.asarray(v, dtype=np.complex128)
    _check_orthonormal(v)
    return np.abs(v.conj().T @ np.asarray(y, dtype=np.complex128))


def dominant_frequency(signal: np.ndarray, dt_ms: float) -> float:
    """Location (Hz) of the largest non-DC peak of the amplitude spectrum.

    The signal is de-meaned and transformed with a rectangular window, so the
    answer is quantized to bins of 1000/(n*dt_ms) Hz.
    """
    sig = np.asarray(signal, dtype=np.float64)
    if sig.ndim != 1 or len(sig) < 4:
        raise ValueError("signal must be a 1-d array with at least 4 samples")
    spectrum = np.abs(np.fft.rfft(sig - sig.mean()))
    spectrum[0] = 0.0
    freqs = np.fft.rfftfreq(len(sig), d=dt_ms / 1000.0)
    return float(freqs[int(np.argmax(spectrum))])
