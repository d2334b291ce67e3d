"""Bump function, lattice realizations and the canonical-form bijection.

A realization is the function ``t -> sum_m x_m phi(t + delta - m)`` for a
+/-1 stream ``x`` and a real shift ``delta``. Because the bump's support is
strictly inside (-1/2, 1/2), at most one lattice site contributes at any
``t``, so evaluation is a single-term lookup.

Every realization has the canonical form ``(tau_k x, theta)`` with
``k = floor(delta)`` and ``theta = delta - k`` in [0, 1); ``h_forward`` and
``h_inverse`` move between the two descriptions.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .seqcore import PatternStream, SequenceStream, shift_seq, stream_from_dict, uniform_hash


class BumpShape(str, enum.Enum):
    TRIANGULAR = "triangular"


@dataclass(frozen=True)
class BumpSpec:
    """Compactly supported bump with peak value 1 at the origin only.

    Parameters
    ----------
    shape : BumpShape or str
        Profile of the bump. Only ``"triangular"``, ``max(0, 1 - |x|/a)``, is
        available.
    a : float
        Half-width of the support, ``0 < a < 1/2``.
    """

    shape: BumpShape = BumpShape.TRIANGULAR
    a: float = 0.25

    def __post_init__(self):
        object.__setattr__(self, "shape", BumpShape(self.shape))
        if not (0.0 < self.a < 0.5):
            raise ValueError(f"bump half-width must satisfy 0 < a < 1/2, got {self.a}")

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.maximum(0.0, 1.0 - np.abs(x) / self.a)

    @property
    def c1(self) -> float:
        """Integral of the bump."""
        return self.a

    @property
    def c2(self) -> float:
        """Integral of the squared bump."""
        return 2.0 * self.a / 3.0

    @property
    def lipschitz(self) -> float:
        return 1.0 / self.a

    def fourier(self, lam):
        """``int phi(t) exp(-i lam t) dt``, real and even for this shape."""
        lam = np.asarray(lam, dtype=np.float64)
        out = self.a * np.sinc(lam * self.a / (2.0 * np.pi)) ** 2
        return float(out) if out.ndim == 0 else out

    def to_dict(self) -> dict:
        return {"shape": self.shape.value, "a": self.a}


def bump_eval(b: BumpSpec, x):
    out = b(x)
    return float(out) if np.ndim(out) == 0 else out


def bump_moments(b: BumpSpec):
    """Closed forms ``(c1, c2, L, fourier)`` of the bump."""
    return b.c1, b.c2, b.lipschitz, b.fourier


def floor_decompose(t):
    """Split ``t`` into ``(k, theta)`` with integer ``k`` and ``theta`` in [0, 1).

    Works on scalars (returns ``(int, float)``) and arrays (returns
    ``(int64 array, float64 array)``). A fractional part that rounds up to
    1.0 is folded into the integer part.
    """
    if isinstance(t, (float, int)):
        if not math.isfinite(t):
            raise ValueError("floor_decompose requires finite input")
        k = math.floor(t)
        theta = float(t - k)
        if theta >= 1.0:
            return k + 1, 0.0
        return k, theta
    arr = np.asarray(t, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("floor_decompose requires finite input")
    k = np.floor(arr)
    theta = arr - k
    wrap = theta >= 1.0
    if np.any(wrap):
        k = np.where(wrap, k + 1.0, k)
        theta = np.where(wrap, 0.0, theta)
    if arr.ndim == 0:
        return int(k), float(theta)
    return k.astype(np.int64), theta


def lattice_values(stream, k_offset, s, bump: BumpSpec):
    """``x_{k + m*} * phi(s - m*)`` with ``m*`` the integer nearest to ``s``.

    ``k_offset`` and ``s`` broadcast; this is the single-term form of the
    lattice sum evaluated at ``s`` for the stream ``tau_k x``.
    """
    s = np.asarray(s, dtype=np.float64)
    nearest = np.floor(s + 0.5)
    u = s - nearest
    idx = np.asarray(k_offset, dtype=np.int64) + nearest.astype(np.int64)
    if idx.size > 64:
        lo, hi = int(idx.min()), int(idx.max())
        if hi - lo < idx.size:
            # dense grids revisit each site many times: hash the span once, then gather
            span = stream.sites(np.arange(lo, hi + 1, dtype=np.int64))
            return span[idx - lo] * bump(u)
    return stream.sites(idx) * bump(u)


@dataclass(frozen=True)
class Realization:
    """The function ``t -> Lambda_x(t + delta)`` built from ``stream`` and ``bump``."""

    stream: SequenceStream | PatternStream
    delta: float = 0.0
    bump: BumpSpec = BumpSpec()
    _canonical: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not math.isfinite(self.delta):
            raise ValueError("delta must be finite")
        object.__setattr__(self, "_canonical", floor_decompose(self.delta))

    def __call__(self, t):
        # t + delta is evaluated as (t + theta) on the stream shifted by floor(delta)
        k, theta = self._canonical
        out = lattice_values(self.stream, k, np.asarray(t, dtype=np.float64) + theta, self.bump)
        return float(out) if out.ndim == 0 else out

    def canonical_form(self) -> tuple:
        k, theta = self._canonical
        return shift_seq(self.stream, k), theta

    def same_function(self, other: "Realization") -> bool:
        return self.bump == other.bump and self.canonical_form() == other.canonical_form()

    def to_dict(self) -> dict:
        d = self.stream.to_dict()
        d.update(delta=float(self.delta), bump=self.bump.to_dict())
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "Realization":
        bump = BumpSpec(**d.get("bump", {}))
        return cls(stream_from_dict(d), float(d.get("delta", 0.0)), bump)


def realization_eval(omega: Realization, t):
    return omega(t)


def evaluate_many(realizations, t) -> np.ndarray:
    """Evaluate many realizations on a common abscissa array in one pass.

    Returns an array of shape ``(len(realizations), len(t))`` whose row ``i``
    equals ``realizations[i](t)``. Rows with Bernoulli streams are evaluated
    together; other stream types fall back to the per-object path.
    """
    t = np.asarray(t, dtype=np.float64).ravel()
    out = np.empty((len(realizations), t.size))
    batch = [i for i, r in enumerate(realizations) if isinstance(r.stream, SequenceStream)]
    for i in sorted(set(range(len(realizations))) - set(batch)):
        out[i] = realizations[i](t)
    # small row blocks keep the working arrays cache-resident
    block = max(1, _BLOCK_ELEMENTS // max(t.size, 1))
    for start in range(0, len(batch), block):
        rows = batch[start:start + block]
        out[rows] = _evaluate_bernoulli([realizations[i] for i in rows], t)
    return out


_BLOCK_ELEMENTS = 64_000


def _evaluate_bernoulli(rows, t: np.ndarray) -> np.ndarray:
    k = np.array([r._canonical[0] + r.stream.shift_offset for r in rows], dtype=np.int64)
    theta = np.array([r._canonical[1] for r in rows])
    seeds = np.array([r.stream.seed for r in rows], dtype=np.uint64)
    q = np.array([r.stream.q for r in rows])
    a = np.array([r.bump.a for r in rows])
    s = t[None, :] + theta[:, None]
    nearest = np.add(s, 0.5)
    np.floor(nearest, out=nearest)
    near_i = nearest.astype(np.int64)
    first = near_i.min(axis=1)
    width = int((near_i.max(axis=1) - first).max()) + 1
    span_idx = (k + first)[:, None] + np.arange(width, dtype=np.int64)[None, :]
    spins = np.where(uniform_hash(seeds[:, None], span_idx) < q[:, None], -1.0, 1.0)
    # flat gather: row i of the span table starts at i * width
    near_i += (np.arange(len(rows), dtype=np.int64) * width - first)[:, None]
    # bump profile computed in place: max(0, 1 - |s - nearest| / a)
    u = np.subtract(s, nearest, out=s)
    np.abs(u, out=u)
    u /= a[:, None]
    np.subtract(1.0, u, out=u)
    np.maximum(u, 0.0, out=u)
    u *= spins.ravel()[near_i]
    return u


def naive_lattice_sum(omega: Realization, t, reach: int = 2):
    """Direct truncated sum over sites within ``reach`` of ``t + delta``.

    Independent of the canonical-form evaluation path; kept as a
    reference for tests and diagnostics.
    """
    s = np.asarray(t, dtype=np.float64) + omega.delta
    base = np.floor(s).astype(np.int64)
    total = np.zeros_like(s)
    for j in range(-reach, reach + 1):
        m = base + j
        total = total + omega.stream.sites(m) * omega.bump(s - m)
    return total


@dataclass(frozen=True)
class ProductPoint:
    """Point ``(x, theta)`` of sequence space times [0, 1)."""

    stream: SequenceStream | PatternStream
    theta: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta < 1.0):
            raise ValueError(f"theta must lie in [0, 1), got {self.theta}")


def h_forward(omega: Realization) -> ProductPoint:
    stream, theta = omega.canonical_form()
    return ProductPoint(stream, theta)


def h_inverse(p: ProductPoint, bump: BumpSpec = BumpSpec()) -> Realization:
    if not (0.0 <= p.theta < 1.0):
        raise ValueError(f"theta must lie in [0, 1), got {p.theta}")
    return Realization(p.stream, p.theta, bump)


def equicontinuity_modulus(b: BumpSpec, s: float) -> float:
    """Uniform bound on ``|omega(t) - omega(t')|`` over all realizations, ``|t - t'| = s``.

    Realizations are Lipschitz with the bump's constant. Two points closer
    than ``1 - 2a`` cannot both sit on (different) bump supports, so the
    difference is also at most 1 there; beyond that the range [-1, 1]
    gives 2.
    """
    if s < 0:
        raise ValueError(f"s must be non-negative, got {s}")
    cap = 1.0 if s < 1.0 - 2.0 * b.a else 2.0
    return min(cap, b.lipschitz * s)
