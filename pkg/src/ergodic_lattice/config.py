"""Experiment configuration shared by the command-line subcommands."""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .bump import BumpSpec


class ConfigError(ValueError):
    pass


def _default_probes() -> list[float]:
    return [math.sqrt(2.0), math.sqrt(3.0), math.pi]


@dataclass
class ExperimentConfig:
    master_seed: int = 7
    q: float = 0.5
    bump: dict = field(default_factory=lambda: {"shape": "triangular", "a": 0.25})
    delta: float = 0.0
    radius: float = 10000.0
    h: float = 1.0 / 32.0
    orders: list[int] = field(default_factory=lambda: [1, 2, 4, 8])
    probe_frequencies: list[float] = field(default_factory=_default_probes)
    spectrum_order: int = 4
    trace_window: list[float] = field(default_factory=lambda: [0.0, 16.0])
    n_traces: int = 1
    scan_eps: float = 0.5
    scan_window: list[float] = field(default_factory=lambda: [0.0, 512.0])
    scan_max_p: int = 256
    window_len: int = 64
    n_samples: int = 10000
    n_events: int = 20
    shifts: list[float] = field(default_factory=lambda: [0.5, 1.0, 3.7, -2.3, 17.25])
    out_dir: str = "out"
    emit_plots: bool = False

    def __post_init__(self):
        self.validate()

    @property
    def bump_spec(self) -> BumpSpec:
        return BumpSpec(**self.bump)

    def validate(self) -> None:
        def need(cond, msg):
            if not cond:
                raise ConfigError(msg)

        need(isinstance(self.master_seed, int) and 0 <= self.master_seed < 2 ** 64,
             "master_seed must be an integer in [0, 2**64)")
        need(0.0 <= self.q <= 1.0, f"q must lie in [0, 1], got {self.q}")
        need(isinstance(self.bump, dict) and set(self.bump) <= {"shape", "a"},
             "bump must be an object with keys 'shape' and 'a'")
        try:
            BumpSpec(**self.bump)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        need(math.isfinite(self.delta), "delta must be finite")
        need(self.radius > 0 and math.isfinite(self.radius), "radius must be positive")
        need(self.h > 0, "h must be positive")
        need(len(self.orders) > 0 and all(isinstance(K, int) and K >= 0 for K in self.orders)
             and list(self.orders) == sorted(set(self.orders)),
             "orders must be a nonempty strictly increasing list of non-negative integers")
        need(isinstance(self.spectrum_order, int) and self.spectrum_order >= 0,
             "spectrum_order must be a non-negative integer")
        need(len(self.trace_window) == 2 and self.trace_window[0] < self.trace_window[1],
             "trace_window must be [lo, hi] with lo < hi")
        need(isinstance(self.n_traces, int) and self.n_traces >= 1, "n_traces must be >= 1")
        need(self.scan_eps > 0, "scan_eps must be positive")
        need(len(self.scan_window) == 2 and self.scan_window[0] < self.scan_window[1],
             "scan_window must be [lo, hi] with lo < hi")
        need(isinstance(self.scan_max_p, int)
             and 1 <= self.scan_max_p < self.scan_window[1] - self.scan_window[0],
             "scan_max_p must be a positive integer below the scan window length")
        need(isinstance(self.window_len, int) and self.window_len >= 4, "window_len must be >= 4")
        need(isinstance(self.n_samples, int) and self.n_samples >= 1, "n_samples must be >= 1")
        need(isinstance(self.n_events, int) and self.n_events >= 1, "n_events must be >= 1")
        need(all(math.isfinite(z) for z in self.shifts), "shifts must be finite")
        need(isinstance(self.emit_plots, bool), "emit_plots must be a boolean")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {unknown}")
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(d)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)
