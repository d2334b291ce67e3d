"""Continuous shift on realizations and its skew-product model.

``t_apply`` translates a realization; ``s_apply`` acts on canonical pairs
``(x, theta)`` by rotating theta and carrying the integer part into a
discrete shift of ``x``. The two are conjugate through ``h_forward``.

Monte-Carlo points of the product measure are drawn from a master seed with
``spawn_seeds``, so every experiment is reproducible bit for bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import stats

from .bump import BumpSpec, ProductPoint, Realization, floor_decompose, h_inverse, lattice_values
from .means import DEFAULT_STEP, MeanEstimate, mean_value
from .seqcore import SequenceStream, bernoulli_site, shift_seq, spawn_seeds, uniform_hash

MIN_SAMPLES = 1000

# spawn_seeds purposes
_STREAMS = 1
_THETAS = 2


def _check_finite(z: float) -> None:
    if not math.isfinite(z):
        raise ValueError(f"shift must be finite, got {z}")


def s_apply(z: float, p: ProductPoint) -> ProductPoint:
    """``(x, theta) -> (tau_floor(z+theta) x, frac(z + theta))``."""
    _check_finite(z)
    k, theta = floor_decompose(z + p.theta)
    return ProductPoint(shift_seq(p.stream, k), theta)


def s_apply_batch(z, offsets, thetas):
    """Vectorized ``s_apply`` on arrays of shift offsets and angles."""
    k, theta = floor_decompose(np.asarray(z, dtype=np.float64) + thetas)
    return np.asarray(offsets, dtype=np.int64) + k, theta


def t_apply(z: float, omega: Realization) -> Realization:
    """Translate: the result evaluated at ``t`` is ``omega(t + z)``."""
    _check_finite(z)
    return Realization(omega.stream, omega.delta + z, omega.bump)


@dataclass(frozen=True)
class CylinderEvent:
    """Cylinder set of sequence space crossed with a theta interval ``[a, b)``."""

    constraints: tuple[tuple[int, int], ...] = ()
    theta_interval: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        cons = self.constraints
        if isinstance(cons, dict):
            cons = cons.items()
        cons = tuple(sorted((int(m), int(s)) for m, s in cons))
        if any(s not in (-1, 1) for _, s in cons):
            raise ValueError("constraint spins must be -1 or +1")
        if len({m for m, _ in cons}) != len(cons):
            raise ValueError("duplicate constraint index")
        a, b = (float(v) for v in self.theta_interval)
        if not (0.0 <= a < b <= 1.0):
            raise ValueError(f"theta interval must satisfy 0 <= a < b <= 1, got {(a, b)}")
        object.__setattr__(self, "constraints", cons)
        object.__setattr__(self, "theta_interval", (a, b))

    def contains(self, seeds, q, offsets, thetas) -> np.ndarray:
        """Membership of the points ``(tau_offset x_seed, theta)``."""
        a, b = self.theta_interval
        thetas = np.asarray(thetas)
        inside = (thetas >= a) & (thetas < b)
        offsets = np.asarray(offsets, dtype=np.int64)
        for m, spin in self.constraints:
            inside &= bernoulli_site(seeds, q, offsets + m) == spin
        return inside

    def label(self) -> str:
        cons = ";".join(f"{m}:{s:+d}" for m, s in self.constraints)
        a, b = self.theta_interval
        return f"{{{cons}}}x[{a:.17g},{b:.17g})"


def cylinder_probability(e: CylinderEvent, q: float) -> float:
    a, b = e.theta_interval
    prob = b - a
    for _, spin in e.constraints:
        prob *= q if spin == -1 else 1.0 - q
    return prob


@dataclass(frozen=True)
class InvarianceReport:
    z: float
    n_samples: int
    freq_before: float
    freq_after: float
    exact_prob: float
    chi2_pvalue: float
    chi2_pvalue_before: float
    event: str = ""

    def to_dict(self) -> dict:
        return dict(self.__dict__)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _gof_pvalue(hits: int, n: int, prob: float) -> float:
    """Two-cell chi-square p-value of ``hits`` out of ``n`` against ``prob``."""
    if prob <= 0.0 or prob >= 1.0:
        expected = n * prob
        return 1.0 if hits == expected else 0.0
    res = stats.chisquare([hits, n - hits], [n * prob, n * (1.0 - prob)])
    return float(res.pvalue)


def sample_product_points(n: int, q: float, seed: int):
    """Seeds and angles of ``n`` independent draws from ``nu_q x Lebesgue``."""
    seeds = spawn_seeds(seed, n, _STREAMS)
    thetas = uniform_hash(spawn_seeds(seed, n, _THETAS), 0)
    return seeds, thetas


def measure_preservation_test(e: CylinderEvent, z: float, q: float, n: int,
                              seed: int) -> InvarianceReport:
    """Compare the frequency of ``e`` before and after ``S(z)`` with its exact measure.

    Tests membership of ``S(z)(p)`` in ``e`` for ``n`` sampled points ``p``
    (push-forward form; equivalent to the preimage form by invariance).
    """
    if n < MIN_SAMPLES:
        raise ValueError(f"insufficient samples: n={n} < {MIN_SAMPLES}")
    _check_finite(z)
    seeds, thetas = sample_product_points(n, q, seed)
    zeros = np.zeros(n, dtype=np.int64)
    before = e.contains(seeds, q, zeros, thetas)
    offsets, moved = s_apply_batch(z, zeros, thetas)
    after = e.contains(seeds, q, offsets, moved)
    exact = cylinder_probability(e, q)
    hb, ha = int(before.sum()), int(after.sum())
    return InvarianceReport(float(z), n, hb / n, ha / n, exact,
                            _gof_pvalue(ha, n, exact), _gof_pvalue(hb, n, exact), e.label())


# Observables: f(T(z) omega) for an array of shifts z.
Observable = Callable[[Realization, np.ndarray], np.ndarray]


def _eval_at_origin(omega: Realization, z: np.ndarray) -> np.ndarray:
    # canonical form of T(z) omega, then evaluation at 0
    k, theta = floor_decompose(omega.delta + z)
    return lattice_values(omega.stream, k, theta, omega.bump)


OBSERVABLES: dict[str, Observable] = {
    "eval0": _eval_at_origin,
    "eval0_sq": lambda omega, z: _eval_at_origin(omega, z) ** 2,
    "abs_eval0": lambda omega, z: np.abs(_eval_at_origin(omega, z)),
    "one": lambda omega, z: np.ones_like(z),
}


def constant_observable(c: float) -> Observable:
    return lambda omega, z: np.full_like(z, c, dtype=np.float64)


def birkhoff_average(obs: str | Observable, p: ProductPoint, R: float,
                     bump: BumpSpec = BumpSpec(), h: float = DEFAULT_STEP) -> MeanEstimate:
    """Time average ``(1/2R) int_{-R}^{R} f(T(t) omega) dt`` for ``omega = H^-1(p)``."""
    if isinstance(obs, str):
        try:
            obs = OBSERVABLES[obs]
        except KeyError:
            raise ValueError(f"unknown observable {obs!r}; known: {sorted(OBSERVABLES)}") from None
    omega = h_inverse(p, bump)
    return mean_value(lambda t: obs(omega, t), R, 0.0, h)


def space_average_eval0(q: float, bump: BumpSpec) -> float:
    """Expectation of ``omega(0)`` under the product measure: ``(1 - 2q) c1``."""
    return (1.0 - 2.0 * q) * bump.c1


def random_product_point(seed: int, q: float, index: int = 0) -> ProductPoint:
    seeds, thetas = sample_product_points(index + 1, q, seed)
    return ProductPoint(SequenceStream(int(seeds[index]), q), float(thetas[index]))
