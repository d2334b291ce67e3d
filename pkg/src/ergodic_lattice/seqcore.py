"""Bi-infinite +/-1 sequences under the Bernoulli product measure.

Sites are generated in counter mode: ``x_m`` is a stateless function of
``(seed, q, m)``, so any integer index can be queried without materializing
a prefix, and shifting a stream is O(1).

The module also holds the splittable seed derivation used by every
Monte-Carlo experiment in the package, and period / almost-period scans on
finite windows.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

_MASK64 = (1 << 64) - 1
_INT64_MIN = -(1 << 63)
_INT64_MAX = (1 << 63) - 1

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_MUL2 = np.uint64(0x94D049BB133111EB)
_KEY_SALT = np.uint64(0x5851F42D4C957F2D)
_TO_UNIT = 2.0 ** -53


def _mix64(z):
    """splitmix64 finalizer on a uint64 array (wrapping arithmetic)."""
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _MUL1
        z = (z ^ (z >> np.uint64(27))) * _MUL2
    return z ^ (z >> np.uint64(31))


def _as_u64(values):
    """Two's-complement view of (possibly negative) integers as uint64."""
    arr = np.asarray(values)
    if arr.dtype == object or (arr.dtype.kind == "u" and arr.dtype != np.uint64):
        arr = np.asarray([int(v) & _MASK64 for v in arr.ravel()], dtype=np.uint64).reshape(arr.shape)
        return arr
    if arr.dtype.kind == "i":
        return arr.astype(np.int64).view(np.uint64)
    if arr.dtype == np.uint64:
        return arr
    raise TypeError(f"integer indices required, got dtype {arr.dtype}")


def _check_seed(seed) -> None:
    if isinstance(seed, (int, np.integer)) and not 0 <= int(seed) <= _MASK64:
        raise ValueError(f"seed must be in [0, 2**64), got {seed}")


def _check_q(q: float) -> None:
    if not (0.0 <= q <= 1.0):
        raise ValueError(f"q must lie in [0, 1], got {q}")


def uniform_hash(seed, m):
    """Uniform [0, 1) double that depends only on ``(seed, m)``.

    Both arguments broadcast. 53 mantissa bits are taken from a splitmix64
    stream keyed by ``seed`` at counter ``m``.
    """
    key = _mix64(_as_u64(seed) ^ _KEY_SALT)
    with np.errstate(over="ignore"):
        h = _mix64(key + _as_u64(m) * _GAMMA)
    return (h >> np.uint64(11)).astype(np.float64) * _TO_UNIT


def spawn_seeds(master, n: int, purpose: int = 0) -> np.ndarray:
    """Derive ``n`` independent 64-bit child seeds from ``master``.

    ``purpose`` separates streams used for different roles in the same
    experiment (stream seeds, theta draws, event layout, ...).
    """
    _check_seed(master)
    base = _mix64(_as_u64(master) ^ _mix64(np.uint64(purpose) + _KEY_SALT))
    idx = np.arange(n, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return _mix64(base + (idx + np.uint64(1)) * _GAMMA)


def bernoulli_site(seed, q: float, m):
    """Spin ``x_m`` of the Bernoulli(q) stream keyed by ``seed``.

    Returns -1 with probability ``q`` and +1 otherwise; ``x_m = -1`` iff the
    53-bit uniform hash of ``(seed, m)`` is below ``q``. Broadcasts over
    ``seed`` and ``m``; scalar inputs give a Python int.
    """
    _check_q(q)
    _check_seed(seed)
    u = uniform_hash(seed, m)
    out = np.where(u < q, np.int8(-1), np.int8(1))
    if out.ndim == 0:
        return int(out)
    return out


def _checked_offset(k: int) -> int:
    if not _INT64_MIN <= k <= _INT64_MAX:
        raise OverflowError(f"shift offset {k} leaves the signed 64-bit range")
    return k


def _shifted_indices(m, offset: int) -> np.ndarray:
    m = np.asarray(m)
    if m.dtype.kind not in "iu" and m.dtype != object:
        raise TypeError(f"integer indices required, got dtype {m.dtype}")
    if offset == 0:
        return m.astype(np.int64)
    if m.size:
        lo, hi = int(m.min()) + offset, int(m.max()) + offset
        _checked_offset(lo)
        _checked_offset(hi)
    return m.astype(np.int64) + np.int64(offset)


@dataclass(frozen=True)
class SequenceStream:
    """Lazily indexable element of {-1, 1}^Z drawn from the product measure.

    Site ``m`` of the stream is ``bernoulli_site(seed, q, m + shift_offset)``,
    i.e. the stream represents ``tau_k`` of its base stream with
    ``k = shift_offset``.
    """

    seed: int
    q: float = 0.5
    shift_offset: int = 0

    def __post_init__(self):
        _check_seed(self.seed)
        _check_q(self.q)
        _checked_offset(self.shift_offset)

    def sites(self, m) -> np.ndarray:
        idx = _shifted_indices(m, self.shift_offset)
        return np.asarray(bernoulli_site(self.seed, self.q, idx), dtype=np.int8)

    def site(self, m: int) -> int:
        return int(self.sites(np.array([m]))[0])

    def shift(self, k: int) -> "SequenceStream":
        # seed and q were validated on construction; only the offset can go wrong here
        out = object.__new__(SequenceStream)
        object.__setattr__(out, "seed", self.seed)
        object.__setattr__(out, "q", self.q)
        object.__setattr__(out, "shift_offset", _checked_offset(self.shift_offset + int(k)))
        return out

    def window(self, lo: int, hi: int) -> "SequenceWindow":
        return SequenceWindow(lo, hi, self.sites(np.arange(lo, hi, dtype=np.int64)))

    def to_dict(self) -> dict:
        return {"kind": "bernoulli", "seed": int(self.seed), "q": float(self.q),
                "shift_offset": int(self.shift_offset)}


@dataclass(frozen=True)
class PatternStream:
    """Periodic fixture stream repeating ``pattern`` with period ``len(pattern)``.

    Not a typical point of the product measure; used to exercise period
    detection on sequences that are known to be periodic.
    """

    pattern: tuple[int, ...]
    shift_offset: int = 0

    def __post_init__(self):
        pat = tuple(int(v) for v in self.pattern)
        if not pat or any(v not in (-1, 1) for v in pat):
            raise ValueError("pattern must be a nonempty tuple of -1/+1")
        object.__setattr__(self, "pattern", pat)
        _checked_offset(self.shift_offset)

    @property
    def period(self) -> int:
        return len(self.pattern)

    def sites(self, m) -> np.ndarray:
        idx = _shifted_indices(m, self.shift_offset)
        pat = np.asarray(self.pattern, dtype=np.int8)
        return pat[np.mod(idx, len(pat))]

    def site(self, m: int) -> int:
        return int(self.sites(np.array([m]))[0])

    def shift(self, k: int) -> "PatternStream":
        return PatternStream(self.pattern, _checked_offset(self.shift_offset + int(k)))

    def window(self, lo: int, hi: int) -> "SequenceWindow":
        return SequenceWindow(lo, hi, self.sites(np.arange(lo, hi, dtype=np.int64)))

    def to_dict(self) -> dict:
        return {"kind": "pattern", "pattern": list(self.pattern),
                "shift_offset": int(self.shift_offset)}


def shift_seq(s, k: int):
    """Discrete shift: site ``m`` of the result is site ``m + k`` of ``s``."""
    return s.shift(k)


def stream_from_dict(d: dict):
    kind = d.get("kind", "bernoulli")
    if kind == "bernoulli":
        return SequenceStream(int(d["seed"]), float(d["q"]), int(d.get("shift_offset", 0)))
    if kind == "pattern":
        return PatternStream(tuple(d["pattern"]), int(d.get("shift_offset", 0)))
    raise ValueError(f"unknown stream kind {kind!r}")


@dataclass(frozen=True)
class SequenceWindow:
    """Materialized sites ``x_m`` for ``m`` in the half-open range ``[lo, hi)``."""

    lo: int
    hi: int
    values: np.ndarray = field(repr=False, compare=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.int8)
        if self.hi <= self.lo:
            raise ValueError(f"empty window [{self.lo}, {self.hi})")
        if vals.shape != (self.hi - self.lo,):
            raise ValueError("values do not match the window bounds")
        if not np.all(np.abs(vals) == 1):
            raise ValueError("window values must be -1 or +1")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.hi - self.lo

    def __eq__(self, other):
        if not isinstance(other, SequenceWindow):
            return NotImplemented
        return (self.lo, self.hi) == (other.lo, other.hi) and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.lo, self.hi, self.values.tobytes()))

    def to_csv(self) -> str:
        return "x\n" + "".join(f"{int(v)}\n" for v in self.values)

    @classmethod
    def from_csv(cls, text: str, lo: int = 0) -> "SequenceWindow":
        lines = [ln.strip() for ln in text.strip().splitlines()]
        if lines and lines[0] == "x":
            lines = lines[1:]
        vals = np.array([int(v) for v in lines], dtype=np.int8)
        return cls(lo, lo + len(vals), vals)


@dataclass(frozen=True)
class PeriodReport:
    epsilon: float
    max_p: int
    periods: tuple[int, ...]
    window_len: int

    def to_json(self) -> str:
        return json.dumps({"epsilon": self.epsilon, "max_p": self.max_p,
                           "periods": list(self.periods), "window_len": self.window_len})

    @classmethod
    def from_json(cls, text: str) -> "PeriodReport":
        d = json.loads(text)
        return cls(float(d["epsilon"]), int(d["max_p"]), tuple(d["periods"]), int(d["window_len"]))


def _check_scan_bound(n: int, max_p: int) -> None:
    if max_p < 1:
        raise ValueError(f"max_p must be >= 1, got {max_p}")
    if max_p >= n:
        raise ValueError(f"max_p={max_p} must be smaller than the window length {n}")


def detect_exact_periods(w: SequenceWindow, max_p: int) -> PeriodReport:
    """All ``p`` in ``[1, max_p]`` with ``x[k+p] == x[k]`` for every valid ``k`` in the window."""
    x = w.values
    _check_scan_bound(len(x), max_p)
    periods = tuple(p for p in range(1, max_p + 1) if np.array_equal(x[p:], x[:-p]))
    return PeriodReport(0.0, max_p, periods, len(x))


def detect_almost_periods_seq(w: SequenceWindow, eps: float, max_p: int) -> PeriodReport:
    """All ``p`` in ``[1, max_p]`` with ``max_k |x[k+p] - x[k]| < eps`` over the window."""
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    x = w.values.astype(np.float64)
    _check_scan_bound(len(x), max_p)
    periods = tuple(p for p in range(1, max_p + 1) if np.max(np.abs(x[p:] - x[:-p])) < eps)
    return PeriodReport(float(eps), max_p, periods, len(x))


def any_period_mask(windows: np.ndarray, max_p: int, eps: float | None = None) -> np.ndarray:
    """Row-wise test on a 2-D batch of windows: does any ``p <= max_p`` qualify?

    ``eps=None`` tests exact periods by equality; otherwise the almost-period
    criterion ``max |x[k+p] - x[k]| < eps`` is evaluated in floating point.
    """
    windows = np.asarray(windows)
    _check_scan_bound(windows.shape[1], max_p)
    hit = np.zeros(windows.shape[0], dtype=bool)
    if eps is None:
        for p in range(1, max_p + 1):
            hit |= np.all(windows[:, p:] == windows[:, :-p], axis=1)
    else:
        xf = windows.astype(np.float64)
        for p in range(1, max_p + 1):
            hit |= np.max(np.abs(xf[:, p:] - xf[:, :-p]), axis=1) < eps
    return hit
