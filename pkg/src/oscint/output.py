"""Trajectory export: CSV, SVG line plots, and plain-text reports.

CSV values are written with repr-quality precision (%.17g) so that a
write/read/write cycle is byte-identical.  SVG output is a minimal
hand-assembled polyline plot — axes, ticks, legend — with no plotting
dependency; the plots are presentation aids, nothing parses them back.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np

from .circuit import CircuitTrajectory
from .model import Trajectory
from .predict import PredictionResult

_FMT = "%.17g"


def _fmt(value: float) -> str:
    return _FMT % value


def _write_rows(path: Path, header: list[str], columns: list[np.ndarray]) -> None:
    lines = [",".join(header)]
    rows = len(columns[0])
    for i in range(rows):
        lines.append(",".join(_fmt(col[i]) for col in columns))
    path.write_text("\n".join(lines) + "\n")


def write_trajectory_csv(path: str | Path, traj: Trajectory) -> None:
    """Columns: t, then re_y_j, im_y_j, a_j, b_j grouped per neuron."""
    n = traj.y.shape[1]
    header = ["t"]
    columns: list[np.ndarray] = [traj.times]
    for j in range(n):
        header += [f"re_y_{j}", f"im_y_{j}", f"a_{j}", f"b_{j}"]
        columns += [traj.y[:, j].real, traj.y[:, j].imag, traj.a[:, j], traj.b[:, j]]
    _write_rows(Path(path), header, columns)


def read_trajectory_csv(path: str | Path) -> dict[str, np.ndarray]:
    """Parse a trajectory CSV back into named arrays (t, y, a, b)."""
    text = Path(path).read_text().strip().splitlines()
    header = text[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in text[1:]])
    cols = {name: data[:, i] for i, name in enumerate(header)}
    n = (len(header) - 1) // 4
    y = np.empty((data.shape[0], n), dtype=np.complex128)
    a = np.empty((data.shape[0], n))
    b = np.empty((data.shape[0], n))
    for j in range(n):
        y[:, j] = cols[f"re_y_{j}"] + 1j * cols[f"im_y_{j}"]
        a[:, j] = cols[f"a_{j}"]
        b[:, j] = cols[f"b_{j}"]
    return {"t": cols["t"], "y": y, "a": a, "b": b}


def write_circuit_csv(path: str | Path, traj: CircuitTrajectory) -> None:
    """Same layout with per-compartment potential columns per neuron."""
    n = traj.v_plus.shape[1]
    header = ["t"]
    columns: list[np.ndarray] = [traj.times]
    parts = ("v_plus", "v_minus", "va_plus", "va_minus", "vb_plus", "vb_minus",
             "a", "b")
    for j in range(n):
        for part in parts:
            header.append(f"{part}_{j}")
            columns.append(getattr(traj, part)[:, j])
    _write_rows(Path(path), header, columns)


def write_prediction_csv(path: str | Path, result: PredictionResult,
                         freqs_hz: Sequence[float]) -> None:
    """Trajectory layout with channels labeled by frequency."""
    header = ["t"]
    columns: list[np.ndarray] = [result.times]
    for j, f in enumerate(freqs_hz):
        tag = f"{f:g}hz"
        header += [f"re_y_{tag}", f"im_y_{tag}"]
        columns += [result.y[:, j].real, result.y[:, j].imag]
    header += ["readout", "quadrature"]
    columns += [result.readout, result.quadrature]
    _write_rows(Path(path), header, columns)


_PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2",
)


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    raw = np.linspace(lo, hi, n)
    return [float(v) for v in raw]


def write_svg_lines(
    path: str | Path,
    x: np.ndarray,
    series: dict[str, np.ndarray],
    title: str = "",
    x_label: str = "t (ms)",
    y_label: str = "",
    width: int = 860,
    height: int = 420,
) -> None:
    """Write a multi-series line plot as a standalone SVG file."""
    x = np.asarray(x, dtype=np.float64)
    margin_l, margin_r, margin_t, margin_b = 64, 150, 34, 46
    plot_w = width - margin_l - margin_r
    plot_h = height - margin_t - margin_b

    all_y = np.concatenate([np.asarray(v, dtype=np.float64) for v in series.values()])
    y_lo, y_hi = float(all_y.min()), float(all_y.max())
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad
    x_lo, x_hi = float(x.min()), float(x.max())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0

    def px(v: np.ndarray) -> np.ndarray:
        return margin_l + (v - x_lo) / (x_hi - x_lo) * plot_w

    def py(v: np.ndarray) -> np.ndarray:
        return margin_t + (y_hi - v) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{margin_l}" y="20" font-family="sans-serif" '
        f'font-size="14" font-weight="bold">{title}</text>',
    ]
    axis_style = 'stroke="#333" stroke-width="1"'
    x0, y0 = margin_l, margin_t + plot_h
    parts.append(f'<line x1="{x0}" y1="{margin_t}" x2="{x0}" y2="{y0}" {axis_style}/>')
    parts.append(
        f'<line x1="{x0}" y1="{y0}" x2="{margin_l + plot_w}" y2="{y0}" {axis_style}/>'
    )
    for tx in _ticks(x_lo, x_hi):
        sx = float(px(np.float64(tx)))
        parts.append(f'<line x1="{sx:.2f}" y1="{y0}" x2="{sx:.2f}" y2="{y0 + 5}" {axis_style}/>')
        parts.append(
            f'<text x="{sx:.2f}" y="{y0 + 18}" font-family="sans-serif" '
            f'font-size="11" text-anchor="middle">{tx:g}</text>'
        )
    for ty in _ticks(y_lo, y_hi):
        sy = float(py(np.float64(ty)))
        parts.append(f'<line x1="{x0 - 5}" y1="{sy:.2f}" x2="{x0}" y2="{sy:.2f}" {axis_style}/>')
        parts.append(
            f'<text x="{x0 - 8}" y="{sy + 4:.2f}" font-family="sans-serif" '
            f'font-size="11" text-anchor="end">{ty:.3g}</text>'
        )
    parts.append(
        f'<text x="{margin_l + plot_w / 2:.0f}" y="{height - 8}" '
        f'font-family="sans-serif" font-size="12" text-anchor="middle">{x_label}</text>'
    )
    if y_label:
        parts.append(
            f'<text x="16" y="{margin_t + plot_h / 2:.0f}" font-family="sans-serif" '
            f'font-size="12" text-anchor="middle" '
            f'transform="rotate(-90 16 {margin_t + plot_h / 2:.0f})">{y_label}</text>'
        )

    # Downsample long traces for the drawing only (the CSV keeps full data).
    max_points = 2000
    stride = max(1, len(x) // max_points)
    for idx, (label, values) in enumerate(series.items()):
        color = _PALETTE[idx % len(_PALETTE)]
        vx = px(x[::stride])
        vy = py(np.asarray(values, dtype=np.float64)[::stride])
        points = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(vx, vy))
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.2" '
            f'points="{points}"/>'
        )
        ly = margin_t + 14 + 16 * idx
        lx = margin_l + plot_w + 10
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 18}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{lx + 24}" y="{ly}" font-family="sans-serif" '
            f'font-size="11">{label}</text>'
        )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
