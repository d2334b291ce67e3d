"""Command-line front end.

    ergodic-lattice {generate,verify,decompose,scan,spectrum,invariance}
                    [--config PATH] [--seed N] [--out DIR] [--json]

Exit codes: 0 success, 1 a property suite or experiment failed, 2 invalid
input. Every float written to CSV uses 17 significant digits, and identical
configs give byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import suites
from .apscan import almost_period_scan_fn, lattice_frequencies, wstar_membership_experiment
from .bump import Realization
from .config import ConfigError, ExperimentConfig
from .io import atomic_write_text, fmt, svg_line_plot, trace_csv
from .means import spectrum_scan
from .seqcore import SequenceStream, detect_exact_periods

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


def _realization(cfg: ExperimentConfig, seed: int | None = None) -> Realization:
    seed = cfg.master_seed if seed is None else seed
    return Realization(SequenceStream(seed, cfg.q), cfg.delta, cfg.bump_spec)


def _json_default(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, np.generic):
        return obj.item()
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise TypeError(f"not serializable: {type(obj).__name__}")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"


def cmd_generate(cfg: ExperimentConfig, out: Path) -> tuple[int, dict]:
    lo, hi = cfg.trace_window
    n = int(round((hi - lo) / cfg.h))
    t = lo + cfg.h * np.arange(n + 1)
    files = []
    for i in range(cfg.n_traces):
        seed = cfg.master_seed + i
        omega = _realization(cfg, seed)
        files.append(str(atomic_write_text(out / f"trace_seed{seed}.csv", trace_csv(t, omega(t)))))
        files.append(str(atomic_write_text(out / f"realization_seed{seed}.json",
                                           _dump(omega.to_dict()))))
    return EXIT_OK, {"command": "generate", "files": files}


def cmd_verify(cfg: ExperimentConfig, out: Path) -> tuple[int, dict]:
    n, seed, bump = cfg.n_samples, cfg.master_seed, cfg.bump_spec
    q = cfg.q if 0.0 < cfg.q < 1.0 else 0.5
    results = {
        "bijection": suites.bijection_suite(min(n, 10000), seed, q, bump, grid_points=200),
        "conjugacy": suites.conjugacy_suite(n, seed, q, bump),
        "group_law": suites.group_law_suite(n, seed, q),
        "invariance": suites.invariance_suite(n, seed, q, cfg.shifts, cfg.n_events),
        "period_equivalence": suites.period_equivalence_suite(min(n, 2000), seed,
                                                              cfg.window_len),
        "equicontinuity": suites.equicontinuity_suite(min(n, 1000), seed, q, bump),
    }
    inv = results["invariance"]
    if "rows" in inv:
        inv["rows"] = len(inv["rows"])
    passed = all(r["passed"] for r in results.values())
    summary = {"schema_version": 1, "command": "verify", "passed": passed, "suites": results}
    atomic_write_text(out / "verify.json", _dump(summary))
    return (EXIT_OK if passed else EXIT_FAIL), summary


def cmd_decompose(cfg: ExperimentConfig, out: Path) -> tuple[int, dict]:
    report = wstar_membership_experiment(cfg.master_seed, cfg.q, cfg.orders, cfg.radius,
                                         cfg.bump_spec, cfg.h, cfg.delta, cfg.probe_frequencies)
    files = [str(atomic_write_text(out / "decomposition.json", report.to_json() + "\n")),
             str(atomic_write_text(out / "residual_curve.csv", report.curve_csv()))]
    if cfg.emit_plots:
        svg = svg_line_plot(
            {"residual L1 mean": (report.orders, report.residual_l1),
             "predicted 4q(1-q)c1": (report.orders, [report.predicted_l1] * len(report.orders))},
            title=f"residual after lattice projection (q={cfg.q:g}, R={cfg.radius:g})",
            xlabel="truncation order K", ylabel="M(|f - p_K|)")
        files.append(str(atomic_write_text(out / "residual_curve.svg", svg)))
    summary = {"command": "decompose", "passed": report.passed, "files": files,
               "residual_l1": list(report.residual_l1), "predicted_l1": report.predicted_l1}
    return (EXIT_OK if report.passed else EXIT_FAIL), summary


def cmd_scan(cfg: ExperimentConfig, out: Path) -> tuple[int, dict]:
    omega = _realization(cfg)
    fn_report = almost_period_scan_fn(omega, cfg.scan_eps, tuple(cfg.scan_window),
                                      range(1, cfg.scan_max_p + 1), cfg.h)
    w = omega.stream.window(0, cfg.window_len)
    seq_report = detect_exact_periods(w, cfg.window_len // 2)
    files = [str(atomic_write_text(out / "almost_periods.json", _dump(fn_report.to_dict()))),
             str(atomic_write_text(out / "sequence_periods.json", seq_report.to_json() + "\n")),
             str(atomic_write_text(out / "sequence_window.csv", w.to_csv()))]
    summary = {"command": "scan", "accepted": list(fn_report.accepted),
               "inclusion_length": fn_report.inclusion_length,
               "sequence_periods": list(seq_report.periods), "files": files}
    return EXIT_OK, summary


def cmd_spectrum(cfg: ExperimentConfig, out: Path) -> tuple[int, dict]:
    omega = _realization(cfg)
    lambdas = [l for l in lattice_frequencies(cfg.spectrum_order) if l >= 0]
    lambdas += list(cfg.probe_frequencies)
    scan = spectrum_scan(omega, lambdas, cfg.radius, 0.0, cfg.h)
    path = atomic_write_text(out / "spectrum.csv", scan.to_csv())
    summary = {"command": "spectrum", "files": [str(path)],
               "abs": {fmt(l): abs(c) for l, c in zip(scan.lambdas, scan.coefficients)}}
    return EXIT_OK, summary


def cmd_invariance(cfg: ExperimentConfig, out: Path) -> tuple[int, dict]:
    q = cfg.q
    res = suites.invariance_suite(cfg.n_samples, cfg.master_seed, q, cfg.shifts, cfg.n_events)
    if "error" in res:
        return EXIT_FAIL, {"command": "invariance", "passed": False, "error": res["error"]}
    rows = ["z,event,freq_before,freq_after,exact,p_value"]
    for r in res["rows"]:
        rows.append(f"{fmt(r.z)},\"{r.event}\",{fmt(r.freq_before)},{fmt(r.freq_after)},"
                    f"{fmt(r.exact_prob)},{fmt(r.chi2_pvalue)}")
    path = atomic_write_text(out / "invariance.csv", "\n".join(rows) + "\n")
    summary = {k: v for k, v in res.items() if k != "rows"}
    summary.update(command="invariance", files=[str(path)])
    return (EXIT_OK if res["passed"] else EXIT_FAIL), summary


COMMANDS = {
    "generate": cmd_generate,
    "verify": cmd_verify,
    "decompose": cmd_decompose,
    "scan": cmd_scan,
    "spectrum": cmd_spectrum,
    "invariance": cmd_invariance,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ergodic-lattice",
                                     description="Random lattice bump functions and their averages.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", type=Path, help="JSON experiment config")
    parser.add_argument("--seed", type=int, help="override master_seed")
    parser.add_argument("--q", type=float, help="override q")
    parser.add_argument("--out", type=Path, help="override out_dir")
    parser.add_argument("--json", action="store_true", help="print a machine summary to stdout")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
        overrides = {}
        if args.seed is not None:
            overrides["master_seed"] = args.seed
        if args.q is not None:
            overrides["q"] = args.q
        if args.out is not None:
            overrides["out_dir"] = str(args.out)
        if overrides:
            cfg = cfg.replace(**overrides)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        code, summary = COMMANDS[args.command](cfg, Path(cfg.out_dir))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.json:
        sys.stdout.write(_dump(summary))
    else:
        status = {EXIT_OK: "ok", EXIT_FAIL: "FAILED"}[code]
        print(f"{args.command}: {status}")
    return code


if __name__ == "__main__":
    sys.exit(main())
