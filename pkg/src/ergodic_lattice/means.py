"""Window averages of bounded uniformly continuous signals.

A signal is any callable mapping a float64 array of abscissae to an array of
values. All estimators integrate by the composite trapezoid rule on a
uniform grid centred at ``x0`` whose interval count is a multiple of 16, so
the sub-balls of radius R/4 and R/2 and the 16 batch-means segments all
fall on grid nodes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

Signal = Callable[[np.ndarray], np.ndarray]

DEFAULT_STEP = 1.0 / 32.0
N_BATCHES = 16
_PARTIAL_FRACTIONS = (4, 2, 1)


@dataclass(frozen=True)
class MeanEstimate:
    """Ball-average estimate with its doubling-schedule partials.

    ``partials`` holds ``(radius, value)`` pairs for R/4, R/2 and R;
    ``stderr`` is the standard error from 16 equal batch means (a heuristic
    dispersion, not a confidence statement).
    """

    value: complex | float
    R: float
    partials: tuple[tuple[float, complex | float], ...]
    stderr: float
    h: float = DEFAULT_STEP
    x0: float = 0.0
    batch_values: tuple = field(default=(), repr=False)

    def to_dict(self) -> dict:
        def enc(v):
            if isinstance(v, complex):
                return {"re": v.real, "im": v.imag}
            return v
        return {"value": enc(self.value), "R": self.R, "x0": self.x0, "h": self.h,
                "stderr": self.stderr,
                "partials": [{"R": r, "value": enc(v)} for r, v in self.partials]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _grid(R: float, x0: float, h: float) -> tuple[np.ndarray, float, int]:
    if not (R > 0 and math.isfinite(R)):
        raise ValueError(f"radius must be positive and finite, got {R}")
    if not h > 0:
        raise ValueError(f"grid step must be positive, got {h}")
    n = N_BATCHES * max(1, math.ceil(2.0 * R / (N_BATCHES * h)))
    step = 2.0 * R / n
    # x0 + step*j for j in [-n/2, n/2]; integer-indexed so the grid is exactly symmetric
    j = np.arange(-(n // 2), n // 2 + 1, dtype=np.float64)
    return x0 + step * j, step, n


def _trap_mean(y: np.ndarray) -> complex | float:
    """Trapezoid average of samples on a uniform grid (endpoints half-weighted)."""
    n = len(y) - 1
    return (np.sum(y) - 0.5 * (y[0] + y[-1])) / n


def _scalar(v):
    return complex(v) if np.iscomplexobj(v) else float(v)


def _estimate(y: np.ndarray, R: float, x0: float, step: float, n: int) -> MeanEstimate:
    value = _scalar(_trap_mean(y))
    mid = n // 2
    partials = []
    for frac in _PARTIAL_FRACTIONS:
        half = n // (2 * frac)
        partials.append((R / frac, _scalar(_trap_mean(y[mid - half:mid + half + 1]))))
    seg = n // N_BATCHES
    batches = np.array([_trap_mean(y[b * seg:(b + 1) * seg + 1]) for b in range(N_BATCHES)])
    spread = np.sum(np.abs(batches - batches.mean()) ** 2) / (N_BATCHES - 1)
    stderr = float(np.sqrt(spread / N_BATCHES))
    return MeanEstimate(value, float(R), tuple(partials), stderr, step, float(x0),
                        tuple(_scalar(b) for b in batches))


def mean_value(f: Signal, R: float, x0: float = 0.0, h: float = DEFAULT_STEP) -> MeanEstimate:
    """Average of ``f`` over the interval ``[x0 - R, x0 + R]``."""
    t, step, n = _grid(R, x0, h)
    y = np.asarray(f(t))
    if y.shape != t.shape:
        y = np.broadcast_to(y, t.shape)
    return _estimate(y, R, x0, step, n)


def besicovitch_seminorm2(f: Signal, R: float, x0: float = 0.0, h: float = DEFAULT_STEP) -> MeanEstimate:
    """Quadratic mean ``M(f^2)^(1/2)``; stderr propagated by the delta method."""
    t, step, n = _grid(R, x0, h)
    y = np.abs(np.broadcast_to(np.asarray(f(t)), t.shape)) ** 2
    sq = _estimate(y, R, x0, step, n)
    root = math.sqrt(max(sq.value, 0.0))
    stderr = sq.stderr / (2.0 * root) if root > 0 else math.sqrt(sq.stderr)
    partials = tuple((r, math.sqrt(max(v, 0.0))) for r, v in sq.partials)
    return MeanEstimate(root, sq.R, partials, stderr, step, float(x0),
                        tuple(math.sqrt(max(b, 0.0)) for b in sq.batch_values))


def coherent_step(lam: float, h: float = DEFAULT_STEP, max_phase: float = 0.5) -> float:
    """Halve ``h`` until ``|lam| * h <= max_phase``."""
    lam = abs(lam)
    while lam * h > max_phase:
        h /= 2.0
    return h


def bohr_coefficient(f: Signal, lam: float, R: float, x0: float = 0.0,
                     h: float = DEFAULT_STEP) -> MeanEstimate:
    """Bohr-Fourier coefficient ``M(f(t) exp(-i lam t))`` (complex value).

    ``f`` and the exponential are sampled on the same grid, refined so that
    the phase advance per step stays below 0.5 rad.
    """
    h = coherent_step(lam, h)
    t, step, n = _grid(R, x0, h)
    y = np.broadcast_to(np.asarray(f(t)), t.shape) * np.exp(-1j * lam * t)
    est = _estimate(y, R, x0, step, n)
    return MeanEstimate(complex(est.value), est.R, est.partials, est.stderr, step, est.x0,
                        est.batch_values)


@dataclass(frozen=True)
class SpectrumScan:
    lambdas: tuple[float, ...]
    coefficients: tuple[complex, ...]
    R: float
    stderrs: tuple[float, ...] = ()

    def __post_init__(self):
        if len(self.lambdas) != len(self.coefficients):
            raise ValueError("lambdas and coefficients differ in length")

    def to_csv(self) -> str:
        rows = ["lambda,re,im,abs"]
        for lam, c in zip(self.lambdas, self.coefficients):
            rows.append(f"{lam:.17g},{c.real:.17g},{c.imag:.17g},{abs(c):.17g}")
        return "\n".join(rows) + "\n"


def spectrum_scan(f: Signal, lambdas, R: float, x0: float = 0.0,
                  h: float = DEFAULT_STEP) -> SpectrumScan:
    lambdas = [float(l) for l in lambdas]
    if not lambdas:
        raise ValueError("spectrum_scan needs at least one frequency")
    ests = [bohr_coefficient(f, lam, R, x0, h) for lam in lambdas]
    return SpectrumScan(tuple(lambdas), tuple(e.value for e in ests), float(R),
                        tuple(e.stderr for e in ests))
