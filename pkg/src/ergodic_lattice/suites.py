"""Property suites run by ``verify``: each returns a JSON-ready dict with ``passed``."""

from __future__ import annotations

import numpy as np

from .bump import BumpSpec, ProductPoint, Realization, equicontinuity_modulus, h_forward, h_inverse
from .dynamics import CylinderEvent, measure_preservation_test, s_apply, t_apply
from .seqcore import (SequenceStream, detect_almost_periods_seq, detect_exact_periods,
                      spawn_seeds, uniform_hash)

THETA_TOL = 1e-12
PVALUE_FLOOR = 1e-3


def _uniforms(seed: int, n: int, purpose: int) -> np.ndarray:
    return uniform_hash(spawn_seeds(seed, n, purpose), 0)


def bijection_suite(n: int, seed: int, q: float = 0.5, bump: BumpSpec = BumpSpec(),
                    grid_points: int = 1000) -> dict:
    """``h_forward(h_inverse(p)) == p`` and ``h_inverse(h_forward(w))`` evaluates like ``w``."""
    seeds = spawn_seeds(seed, n, 10)
    deltas = -10.0 + 20.0 * _uniforms(seed, n, 11)
    grid = np.linspace(-20.0, 20.0, grid_points)
    worst_ulps = 0.0
    forward_fail = 0
    for s, d in zip(seeds, deltas):
        omega = Realization(SequenceStream(int(s), q), float(d), bump)
        p = h_forward(omega)
        if h_forward(h_inverse(p, bump)) != p:
            forward_fail += 1
        a, b = omega(grid), h_inverse(p, bump)(grid)
        ulp = np.spacing(np.maximum(np.abs(a), np.abs(b)))
        worst_ulps = max(worst_ulps, float(np.max(np.abs(a - b) / ulp)))
    return {"passed": forward_fail == 0 and worst_ulps <= 1.0, "n": n,
            "forward_failures": forward_fail, "worst_ulps": worst_ulps}


def conjugacy_suite(n: int, seed: int, q: float = 0.5, bump: BumpSpec = BumpSpec()) -> dict:
    """``h_forward(t_apply(z, w)) == s_apply(z, h_forward(w))``."""
    seeds = spawn_seeds(seed, n, 20)
    deltas = -10.0 + 20.0 * _uniforms(seed, n, 21)
    zs = -20.0 + 40.0 * _uniforms(seed, n, 22)
    seq_fail, worst = 0, 0.0
    for s, d, z in zip(seeds, deltas, zs):
        omega = Realization(SequenceStream(int(s), q), float(d), bump)
        lhs = h_forward(t_apply(float(z), omega))
        rhs = s_apply(float(z), h_forward(omega))
        seq_fail += lhs.stream != rhs.stream
        worst = max(worst, abs(lhs.theta - rhs.theta))
    return {"passed": seq_fail == 0 and worst <= THETA_TOL, "n": n,
            "sequence_mismatches": int(seq_fail), "max_theta_error": worst}


def group_law_suite(n: int, seed: int, q: float = 0.5) -> dict:
    """``S(z1 + z2) == S(z2) o S(z1)`` and ``S(0) == id``."""
    seeds = spawn_seeds(seed, n, 30)
    thetas = _uniforms(seed, n, 31)
    z1 = -20.0 + 40.0 * _uniforms(seed, n, 32)
    z2 = -20.0 + 40.0 * _uniforms(seed, n, 33)
    seq_fail, worst, identity_fail = 0, 0.0, 0
    for s, th, a, b in zip(seeds, thetas, z1, z2):
        p = ProductPoint(SequenceStream(int(s), q), float(th))
        lhs = s_apply(float(a + b), p)
        rhs = s_apply(float(b), s_apply(float(a), p))
        seq_fail += lhs.stream != rhs.stream
        worst = max(worst, abs(lhs.theta - rhs.theta))
        identity_fail += s_apply(0.0, p) != p
    return {"passed": seq_fail == 0 and identity_fail == 0 and worst <= THETA_TOL, "n": n,
            "sequence_mismatches": int(seq_fail), "identity_failures": int(identity_fail),
            "max_theta_error": worst}


def random_events(n_events: int, seed: int, span: int = 4) -> list[CylinderEvent]:
    """Cylinder events with 1-3 constraints in ``[-span, span]`` and random theta intervals."""
    rng = np.random.Generator(np.random.Philox(seed))
    events = []
    for _ in range(n_events):
        k = int(rng.integers(1, 4))
        idx = rng.choice(np.arange(-span, span + 1), size=k, replace=False)
        spins = rng.choice([-1, 1], size=k)
        a = float(rng.uniform(0.0, 0.7))
        b = float(rng.uniform(a + 0.1, 1.0))
        events.append(CylinderEvent(tuple(zip(idx.tolist(), spins.tolist())), (a, b)))
    return events


def invariance_suite(n: int, seed: int, q: float, shifts, n_events: int = 20,
                     diff_tol: float | None = None) -> dict:
    """Measure preservation of cylinder events under ``S(z)`` for each shift."""
    try:
        events = random_events(n_events, seed)
        rows = [measure_preservation_test(e, z, q, n, seed + 1 + i)
                for i, e in enumerate(events) for z in shifts]
    except ValueError as exc:
        return {"passed": False, "error": str(exc)}
    if diff_tol is None:
        diff_tol = 5.0 * np.sqrt(0.25 / n)
    worst_p = min(min(r.chi2_pvalue, r.chi2_pvalue_before) for r in rows)
    worst_d = max(max(abs(r.freq_after - r.exact_prob), abs(r.freq_before - r.exact_prob))
                  for r in rows)
    return {"passed": worst_p > PVALUE_FLOOR and worst_d < diff_tol, "n": n,
            "tests": len(rows), "min_pvalue": worst_p, "max_abs_diff": worst_d,
            "diff_tol": diff_tol, "rows": rows}


def period_equivalence_suite(n: int, seed: int, window_len: int = 64,
                  eps_grid=(0.5, 1.0, 1.5, 1.99)) -> dict:
    """Almost periods with ``eps < 2`` coincide with exact periods on +/-1 windows.

    Windows mix Bernoulli streams over a range of ``q`` (small ``q`` makes
    periodic windows common) so that both empty and nonempty period sets
    occur.
    """
    seeds = spawn_seeds(seed, n, 40)
    qs = np.array([0.0, 0.01, 0.03, 0.1, 0.3, 0.5])[(seeds % np.uint64(6)).astype(int)]
    max_p = window_len // 2
    mismatches, nonempty = 0, 0
    for s, q in zip(seeds, qs):
        w = SequenceStream(int(s), float(q)).window(0, window_len)
        exact = detect_exact_periods(w, max_p).periods
        nonempty += bool(exact)
        for eps in eps_grid:
            mismatches += detect_almost_periods_seq(w, eps, max_p).periods != exact
    return {"passed": mismatches == 0, "n": n, "mismatches": int(mismatches),
            "windows_with_periods": int(nonempty)}


def equicontinuity_suite(n: int, seed: int, q: float = 0.5, bump: BumpSpec = BumpSpec(),
                         gaps=(0.01, 0.05, 0.1)) -> dict:
    """Sampled ``|w(t + s) - w(t)|`` never exceeds the uniform modulus."""
    seeds = spawn_seeds(seed, n, 50)
    deltas = -10.0 + 20.0 * _uniforms(seed, n, 51)
    ts = -100.0 + 200.0 * _uniforms(seed, n, 52)
    out, ok = {}, True
    for s in gaps:
        bound = equicontinuity_modulus(bump, s)
        worst = 0.0
        for sd, d in zip(seeds, deltas):
            omega = Realization(SequenceStream(int(sd), q), float(d), bump)
            worst = max(worst, float(np.max(np.abs(omega(ts + s) - omega(ts)))))
        # tiny slack for rounding of t + s
        ok &= worst <= bound + 1e-12
        out[f"{s:g}"] = {"empirical_sup": worst, "bound": bound}
    return {"passed": bool(ok), "n": n, "gaps": out}
