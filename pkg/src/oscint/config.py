"""JSON (de)serialization of network descriptions.

Matrices are nested row lists.  Every entry is either a plain number (real
field) or a two-element list ``[re, im]`` (complex field), so values
round-trip exactly without a separate dtype marker.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .model import NetworkSpec

_COMPLEX_FIELDS = ("w_zx", "w_yy", "w_ry", "c_z", "c_yhat", "c_r")
_REAL_FIELDS = ("w_ax", "w_bx", "w_ay", "w_by", "c_a", "c_b", "tau_y")


def _encode_array(arr: np.ndarray) -> list:
    if np.iscomplexobj(arr):
        def enc(v):
            return [float(v.real), float(v.imag)]
    else:
        def enc(v):
            return float(v)
    if arr.ndim == 1:
        return [enc(v) for v in arr]
    return [[enc(v) for v in row] for row in arr]


def _decode_entry(entry) -> complex | float:
    if isinstance(entry, list):
        if len(entry) != 2:
            raise ValueError(f"complex entries must be [re, im] pairs, got {entry!r}")
        return complex(float(entry[0]), float(entry[1]))
    return float(entry)


def _decode_array(data: list, shape: tuple, complex_valued: bool) -> np.ndarray:
    dtype = np.complex128 if complex_valued else np.float64
    if len(shape) == 2:
        entries = [_decode_entry(e) for row in data for e in row]
    else:
        entries = [_decode_entry(e) for e in data]
    return np.array(entries, dtype=dtype).reshape(shape)


def spec_to_dict(spec: NetworkSpec) -> dict:
    out = {
        "n_neurons": spec.n_neurons,
        "n_inputs": spec.n_inputs,
        "n_readout": spec.n_readout,
        "tau_a": spec.tau_a,
        "tau_b": spec.tau_b,
    }
    for name in _COMPLEX_FIELDS + _REAL_FIELDS:
        out[name] = _encode_array(getattr(spec, name))
    return out


def spec_from_dict(data: dict) -> NetworkSpec:
    n = int(data["n_neurons"])
    m = int(data["n_inputs"])
    k = int(data["n_readout"])
    shapes = {
        "w_zx": (n, m), "w_yy": (n, n), "w_ry": (k, n),
        "w_ax": (n, m), "w_bx": (n, m), "w_ay": (n, n), "w_by": (n, n),
        "c_z": (n,), "c_yhat": (n,), "c_a": (n,), "c_b": (n,), "c_r": (k,),
        "tau_y": (n,),
    }
    kwargs = {
        "n_neurons": n,
        "n_inputs": m,
        "n_readout": k,
        "tau_a": float(data["tau_a"]),
        "tau_b": float(data["tau_b"]),
    }
    for name in _COMPLEX_FIELDS:
        kwargs[name] = _decode_array(data[name], shapes[name], complex_valued=True)
    for name in _REAL_FIELDS:
        kwargs[name] = _decode_array(data[name], shapes[name], complex_valued=False)
    return NetworkSpec(**kwargs)


def save_spec(spec: NetworkSpec, path: str | Path) -> None:
    Path(path).write_text(json.dumps(spec_to_dict(spec), indent=2) + "\n")


def load_spec(path: str | Path) -> NetworkSpec:
    return spec_from_dict(json.loads(Path(path).read_text()))
