"""Almost periods, almost-periodic projection and the non-membership experiment.

The almost-periodic part of a realization is estimated by Bohr projection
onto a finite, conjugate-closed frequency set (by default the lattice module
``{2 pi k : |k| <= K}``). What is left after subtracting it is measured in
L1 mean and in the Besicovitch seminorm; for a typical realization with
``0 < q < 1`` that residual stays near ``4q(1-q) c1`` however many lattice
frequencies are removed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bump import BumpSpec, Realization
from .means import DEFAULT_STEP, MeanEstimate, Signal, besicovitch_seminorm2, bohr_coefficient, mean_value
from .seqcore import (PatternStream, SequenceStream, any_period_mask, bernoulli_site,
                      spawn_seeds)

QUADRATURE_ALLOWANCE = 0.005
PROBE_FREQUENCIES = (math.sqrt(2.0), math.sqrt(3.0), math.pi)
_FREQ_TOL = 1e-12


@dataclass(frozen=True)
class FnAlmostPeriodReport:
    eps: float
    window: tuple[float, float]
    step: float
    candidates: tuple[tuple[float, float], ...]
    accepted: tuple[float, ...]
    inclusion_length: float | None

    def to_dict(self) -> dict:
        return {"eps": self.eps, "window": list(self.window), "step": self.step,
                "candidates": [{"p": p, "sup_diff": d} for p, d in self.candidates],
                "accepted": list(self.accepted), "inclusion_length": self.inclusion_length}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def inclusion_length(p_grid, accepted) -> float | None:
    """Smallest length ``l`` such that every run of the p-grid spanning ``l`` hits ``accepted``.

    Measured on the grid: a run of ``g`` consecutive rejected grid points
    gives ``l = (g + 1) * spacing``. ``None`` when nothing is accepted.
    """
    grid = np.sort(np.asarray(p_grid, dtype=np.float64))
    acc = set(float(p) for p in accepted)
    if not acc:
        return None
    spacing = float(np.min(np.diff(grid))) if len(grid) > 1 else 1.0
    run = longest = 0
    for p in grid:
        if float(p) in acc:
            run = 0
        else:
            run += 1
            longest = max(longest, run)
    return (longest + 1) * spacing


def almost_period_scan_fn(f: Signal, eps: float, window: tuple[float, float], p_grid,
                          h: float = DEFAULT_STEP) -> FnAlmostPeriodReport:
    """Grid sup of ``|f(x + p) - f(x)|`` for each candidate ``p``.

    ``x`` runs over the grid of step ``h`` on ``[lo, hi - max p]`` so that
    both ``x`` and ``x + p`` stay inside the window.
    """
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    lo, hi = (float(v) for v in window)
    ps = np.asarray(list(p_grid), dtype=np.float64)
    if ps.size == 0:
        raise ValueError("empty p grid")
    if np.any(ps < 0):
        raise ValueError("candidate periods must be non-negative")
    pmax = float(np.max(ps))
    if pmax >= hi - lo:
        raise ValueError(f"candidate period {pmax} exceeds the window slack {hi - lo}")
    n = int(math.floor((hi - lo - pmax) / h + 1e-9))
    x = lo + h * np.arange(n + 1, dtype=np.float64)
    fx = np.asarray(f(x), dtype=np.float64)
    candidates, accepted = [], []
    for p in ps:
        d = float(np.max(np.abs(np.asarray(f(x + p), dtype=np.float64) - fx))) if p != 0 else 0.0
        candidates.append((float(p), d))
        if d < eps:
            accepted.append(float(p))
    return FnAlmostPeriodReport(float(eps), (lo, hi), h, tuple(candidates), tuple(accepted),
                                inclusion_length(ps, accepted))


@dataclass(frozen=True)
class TrigPolynomial:
    """Real trigonometric polynomial ``sum_j c_j exp(i lam_j t)``.

    Frequencies must come in pairs ``+/- lam``; coefficients are symmetrized
    to ``c(-lam) = conj(c(lam))`` on construction so evaluation is real.
    """

    frequencies: tuple[float, ...]
    coefficients: tuple[complex, ...]

    def __post_init__(self):
        lam = np.asarray(self.frequencies, dtype=np.float64)
        c = np.asarray(self.coefficients, dtype=np.complex128)
        if lam.shape != c.shape:
            raise ValueError("frequencies and coefficients differ in length")
        partner = _conjugate_partner(lam)
        c = 0.5 * (c + np.conj(c[partner]))
        object.__setattr__(self, "frequencies", tuple(float(v) for v in lam))
        object.__setattr__(self, "coefficients", tuple(complex(v) for v in c))

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        out = np.zeros_like(t)
        for lam, c in zip(self.frequencies, self.coefficients):
            if lam == 0.0:
                out = out + c.real
            elif lam > 0.0:
                # the -lam partner doubles the real part
                out = out + 2.0 * (c.real * np.cos(lam * t) - c.imag * np.sin(lam * t))
        return out

    def coefficient(self, lam: float) -> complex:
        for l, c in zip(self.frequencies, self.coefficients):
            if abs(l - lam) <= _FREQ_TOL * max(1.0, abs(lam)):
                return c
        return 0j

    def sup_bound(self) -> float:
        return float(sum(abs(c) for c in self.coefficients))

    def restrict(self, lambdas) -> "TrigPolynomial":
        keep = [(l, c) for l, c in zip(self.frequencies, self.coefficients)
                if any(abs(l - m) <= _FREQ_TOL * max(1.0, abs(m)) for m in lambdas)]
        return TrigPolynomial(tuple(l for l, _ in keep), tuple(c for _, c in keep))

    def to_dict(self) -> dict:
        return {"terms": [{"lambda": l, "re": c.real, "im": c.imag}
                          for l, c in zip(self.frequencies, self.coefficients)]}

    @classmethod
    def zero(cls) -> "TrigPolynomial":
        return cls((), ())


def _conjugate_partner(lam: np.ndarray) -> np.ndarray:
    partner = np.empty(len(lam), dtype=np.int64)
    for i, l in enumerate(lam):
        hits = np.nonzero(np.abs(lam + l) <= _FREQ_TOL * max(1.0, abs(l)))[0]
        if hits.size == 0:
            raise ValueError(f"frequency set is not conjugate-closed: -{l} missing")
        partner[i] = hits[0]
    return partner


def lattice_frequencies(K: int) -> list[float]:
    """``{2 pi k : |k| <= K}`` in increasing order."""
    return [2.0 * math.pi * k for k in range(-K, K + 1)]


def project_ap(f: Signal, lambdas, R: float, h: float = DEFAULT_STEP) -> TrigPolynomial:
    """Bohr projection of ``f`` onto the span of ``exp(i lam t)``, ``lam`` in ``lambdas``."""
    lam = [float(v) for v in lambdas]
    if not lam:
        raise ValueError("project_ap needs at least one frequency")
    _conjugate_partner(np.asarray(lam))
    coeffs = {l: bohr_coefficient(f, l, R, 0.0, h).value for l in lam if l >= 0}
    for l in lam:
        if l < 0:
            # exact for real f: the grid is symmetric and exp(+i lam t) = conj(exp(-i lam t))
            coeffs[l] = next(c for m, c in coeffs.items()
                             if abs(m + l) <= _FREQ_TOL * max(1.0, abs(l))).conjugate()
    return TrigPolynomial(tuple(lam), tuple(coeffs[l] for l in lam))


@dataclass(frozen=True)
class Residual:
    l1_mean: MeanEstimate
    besicovitch2: MeanEstimate

    def __iter__(self):
        return iter((self.l1_mean, self.besicovitch2))


def residual_report(f: Signal, p: TrigPolynomial, R: float, h: float = DEFAULT_STEP) -> Residual:
    """L1 mean and quadratic mean of ``f - p`` over ``[-R, R]``."""
    diff = lambda t: np.asarray(f(t)) - p(t)
    return Residual(mean_value(lambda t: np.abs(diff(t)), R, 0.0, h),
                    besicovitch_seminorm2(diff, R, 0.0, h))


def predicted_residual_l1(q: float, bump: BumpSpec) -> float:
    """``M(|f - f_ap|)`` for a typical realization: ``E|x - E x| c1 = 4q(1-q) c1``."""
    return 4.0 * q * (1.0 - q) * bump.c1


def predicted_residual_b2(q: float, bump: BumpSpec) -> float:
    return math.sqrt(4.0 * q * (1.0 - q) * bump.c2)


@dataclass
class DecompositionReport:
    seed: int
    q: float
    a: float
    R: float
    h: float
    orders: tuple[int, ...]
    residual_l1: tuple[float, ...]
    residual_l1_stderr: tuple[float, ...]
    residual_b2: tuple[float, ...]
    predicted_l1: float
    predicted_b2: float
    tolerance: float
    ap_component: TrigPolynomial
    probe_coefficients: dict = field(default_factory=dict)
    passed: bool = False
    notes: tuple[str, ...] = ()
    schema_version: int = 1

    @property
    def residual_l1_mean(self) -> float:
        return self.residual_l1[-1]

    @property
    def residual_besicovitch(self) -> float:
        return self.residual_b2[-1]

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "seed": self.seed, "q": self.q, "bump": {"shape": "triangular", "a": self.a},
            "R": self.R, "h": self.h, "orders": list(self.orders),
            "residual_l1": list(self.residual_l1),
            "residual_l1_stderr": list(self.residual_l1_stderr),
            "residual_b2": list(self.residual_b2),
            "predicted_l1": self.predicted_l1, "predicted_b2": self.predicted_b2,
            "tolerance": self.tolerance,
            "ap_component": self.ap_component.to_dict(),
            "probe_coefficients": {f"{k:.17g}": {"re": v.real, "im": v.imag, "abs": abs(v)}
                                   for k, v in self.probe_coefficients.items()},
            "passed": self.passed, "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def curve_csv(self) -> str:
        rows = ["K,residual_l1,residual_b2,predicted_l1"]
        for K, l1, b2 in zip(self.orders, self.residual_l1, self.residual_b2):
            rows.append(f"{K},{l1:.17g},{b2:.17g},{self.predicted_l1:.17g}")
        return "\n".join(rows) + "\n"


def wstar_membership_experiment(seed: int, q: float, orders, R: float,
                                bump: BumpSpec = BumpSpec(), h: float = DEFAULT_STEP,
                                delta: float = 0.0,
                                probes=PROBE_FREQUENCIES) -> DecompositionReport:
    """Residual of a realization after removing its lattice-frequency AP part.

    For each truncation order ``K`` the realization is projected onto
    ``{2 pi k : |k| <= K}`` and the L1 mean of the remainder is recorded.
    ``passed`` means every residual exceeds half the prediction
    ``4q(1-q) c1`` and the largest-order residual is within tolerance of
    it. This is numerical evidence at finite radius, not a proof.
    """
    orders = tuple(int(K) for K in orders)
    if not orders or any(K < 0 for K in orders) or list(orders) != sorted(set(orders)):
        raise ValueError(f"orders must be nonempty, non-negative and strictly increasing: {orders}")
    omega = Realization(SequenceStream(seed, q), delta, bump)
    full = project_ap(omega, lattice_frequencies(orders[-1]), R, h)
    l1s, l1_err, b2s = [], [], []
    for K in orders:
        p = full.restrict(lattice_frequencies(K))
        l1, b2 = residual_report(omega, p, R, h)
        l1s.append(l1.value)
        l1_err.append(l1.stderr)
        b2s.append(b2.value)
    probe_coeffs = {float(l): bohr_coefficient(omega, l, R, 0.0, h).value for l in probes}
    pred_l1 = predicted_residual_l1(q, bump)
    pred_b2 = predicted_residual_b2(q, bump)
    tol = 3.0 * l1_err[-1] + QUADRATURE_ALLOWANCE
    passed = all(r > 0.5 * pred_l1 for r in l1s) and abs(l1s[-1] - pred_l1) <= tol
    notes = ["PASS is evidence at finite radius R, not a proof of non-membership"]
    if q <= 0.05 or q >= 0.95:
        notes.append("q near 0 or 1: the realization is close to the periodic function "
                     "+/-sum_m phi(t - m), so the residual degenerates toward 0")
    return DecompositionReport(seed, q, bump.a, float(R), h, orders, tuple(l1s), tuple(l1_err),
                               tuple(b2s), pred_l1, pred_b2, tol, full, probe_coeffs, passed,
                               tuple(notes))


@dataclass(frozen=True)
class NullityReport:
    kind: str
    n: int
    window_len: int
    max_p: int
    q: float | None
    count: int
    union_bound: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _period_probability(q: float, window_len: int, p: int) -> float:
    """Probability that a Bernoulli(q) window of the given length has period ``p``."""
    prob = 1.0
    for r in range(p):
        size = len(range(r, window_len, p))
        prob *= q ** size + (1.0 - q) ** size
    return prob


def union_bound(n: int, q: float, window_len: int, max_p: int) -> float:
    """Expected-count bound ``n * sum_p P(window has period p)``."""
    return n * sum(_period_probability(q, window_len, p) for p in range(1, max_p + 1))


def nullity_sampling_experiment(kind: str, n: int, window_len: int, seed: int, q: float = 0.5,
                                fixture: PatternStream | None = None,
                                chunk: int = 20000) -> NullityReport:
    """Count sampled windows that carry a period (or an eps=1 almost period).

    Windows ``[0, window_len)`` of independent streams are scanned for any
    ``p <= window_len // 2``. A periodic realization forces an integer
    period of its sequence, and by the sequence-level argument an eps < 2
    almost period forces an exact one, so both counts should be 0 for
    typical streams. ``fixture`` replaces the Bernoulli draws with random
    shifts of a periodic pattern.
    """
    if kind not in ("periodic", "almost_periodic"):
        raise ValueError(f"kind must be 'periodic' or 'almost_periodic', got {kind!r}")
    if n < 1000:
        raise ValueError(f"insufficient samples: n={n} < 1000")
    if window_len < 4:
        raise ValueError(f"degenerate window length {window_len}")
    max_p = window_len // 2
    eps = None if kind == "periodic" else 1.0
    seeds = spawn_seeds(seed, n, 1)
    m = np.arange(window_len, dtype=np.int64)
    count = 0
    # fixed chunking keeps the result independent of memory limits
    for start in range(0, n, chunk):
        block = seeds[start:start + chunk]
        if fixture is None:
            windows = bernoulli_site(block[:, None], q, m[None, :])
        else:
            shifts = (block % np.uint64(fixture.period)).astype(np.int64)
            windows = fixture.sites(shifts[:, None] + m[None, :])
        count += int(any_period_mask(windows, max_p, eps).sum())
    bound = union_bound(n, q, window_len, max_p) if fixture is None else float(n)
    return NullityReport(kind, n, window_len, max_p, q if fixture is None else None,
                         count, bound)
