"""Artifact writers: atomic text files, CSV traces and a small SVG line plot."""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

import numpy as np


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def atomic_write_text(path, text: str) -> Path:
    """Write ``text`` to ``path`` via a temporary file and ``os.replace``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def trace_csv(t, values) -> str:
    rows = ["t,value"]
    rows += [f"{fmt(a)},{fmt(b)}" for a, b in zip(np.asarray(t), np.asarray(values))]
    return "\n".join(rows) + "\n"


def read_trace_csv(text: str) -> tuple[np.ndarray, np.ndarray]:
    data = np.loadtxt(text.splitlines()[1:], delimiter=",", ndmin=2)
    return data[:, 0], data[:, 1]


_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def svg_line_plot(series: dict, title: str = "", xlabel: str = "", ylabel: str = "",
                  width: int = 640, height: int = 400) -> str:
    """Polylines with axes and tick labels; output is a pure function of the input."""
    pad_l, pad_r, pad_t, pad_b = 70, 20, 40, 50
    xs = np.concatenate([np.asarray(x, dtype=float) for x, _ in series.values()])
    ys = np.concatenate([np.asarray(y, dtype=float) for _, y in series.values()])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = min(0.0, float(ys.min())), float(ys.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    y1 += 0.1 * (y1 - y0)
    pw, ph = width - pad_l - pad_r, height - pad_t - pad_b

    def px(x):
        return pad_l + (x - x0) / (x1 - x0) * pw

    def py(y):
        return pad_t + ph - (y - y0) / (y1 - y0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
           f'<text x="{width / 2:.2f}" y="22" text-anchor="middle" font-size="15">{title}</text>',
           f'<line x1="{pad_l}" y1="{pad_t + ph}" x2="{pad_l + pw}" y2="{pad_t + ph}" stroke="black"/>',
           f'<line x1="{pad_l}" y1="{pad_t}" x2="{pad_l}" y2="{pad_t + ph}" stroke="black"/>']
    for i in range(5):
        xv = x0 + i * (x1 - x0) / 4
        yv = y0 + i * (y1 - y0) / 4
        out.append(f'<text x="{px(xv):.2f}" y="{pad_t + ph + 18}" text-anchor="middle" '
                   f'font-size="11">{xv:.4g}</text>')
        out.append(f'<text x="{pad_l - 6}" y="{py(yv) + 4:.2f}" text-anchor="end" '
                   f'font-size="11">{yv:.4g}</text>')
    out.append(f'<text x="{pad_l + pw / 2:.2f}" y="{height - 10}" text-anchor="middle" '
               f'font-size="12">{xlabel}</text>')
    out.append(f'<text x="16" y="{pad_t + ph / 2:.2f}" text-anchor="middle" font-size="12" '
               f'transform="rotate(-90 16 {pad_t + ph / 2:.2f})">{ylabel}</text>')
    for i, (name, (x, y)) in enumerate(series.items()):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(f"{px(a):.3f},{py(b):.3f}" for a, b in zip(x, y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{pts}"/>')
        out.append(f'<text x="{pad_l + pw - 4}" y="{pad_t + 14 + 14 * i}" text-anchor="end" '
                   f'font-size="11" fill="{color}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
