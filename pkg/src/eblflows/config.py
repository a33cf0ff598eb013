"""Run configuration: a single JSON file drives every CLI subcommand.

Schema (defaults in parentheses; the ``model`` block is required):

```
{
  "model": {
    "theta_H": 10.0, "theta_F": 10.0, "sigma_sq": 1.0,
    "tau": 2.0, "tau_star": 0.5, "gamma": 2.0, "R": 1.05,
    "prior_mean": null,              # null -> centered on theta_H
    "phi_H": [0.25, 0.25], "phi_F": [0.25, 0.25]
  },
  "simulation": {"T": 50, "n_paths": 10000, "seed": 7, "svg": false},
  "scenario": {"shocked_country": "H", "shock_size": -1.0, "baseline": null},
  "panel": {
    "n_countries": 8, "T": 60, "seed": 1,
    "theta": 10.0, "sigma_sq": 1.0, "tau": 16.0, "tau_star": 0.0625,
    "gamma": 2.0, "R": 1.05,
    "phi_young_levels": [0.22, 0.28], "phi_old_levels": [0.03, 0.55],
    "output_correlation": 0.98, "cycle_persistence": 0.85,
    "flow_noise_ratio": 1.0
  },
  "regression": {
    "outcomes": ["cif", "cod"],
    "interaction_sets": [[], ["old_above_median", "young_above_median"],
                         ["old_top_quartile", "young_top_quartile"]]
  },
  "verify": {"n_draws": 1000, "mc_paths": 10000, "mc_T": 50, "path_T": 100},
  "tolerances": {"coefficient_matching": 1e-12, "clearing": 1e-9,
                 "symmetric_exactness": 1e-12, "fd_relative": 1e-6,
                 "threshold_expression": 1e-8},
  "output_dir": "out"
}
```

Environment variables are never consulted: a run is reproducible from the
config file and the seed alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .params import ConfigError, Demographics, ModelParams

_MODEL_REQUIRED = ("theta_H", "theta_F", "sigma_sq", "tau", "tau_star", "gamma", "R")

DEFAULT_SIMULATION = {"T": 50, "n_paths": 10000, "seed": 7, "svg": False}
DEFAULT_SCENARIO = {"shocked_country": "H", "shock_size": -1.0, "baseline": None}
DEFAULT_PANEL = {
    "n_countries": 8,
    "T": 60,
    "seed": 1,
    "theta": 10.0,
    "sigma_sq": 1.0,
    "tau": 16.0,
    "tau_star": 0.0625,
    "gamma": 2.0,
    "R": 1.05,
    "phi_young_levels": [0.22, 0.28],
    "phi_old_levels": [0.03, 0.55],
    "output_correlation": 0.98,
    "cycle_persistence": 0.85,
    "flow_noise_ratio": 1.0,
}
DEFAULT_REGRESSION = {
    "outcomes": ["cif", "cod"],
    "interaction_sets": [
        [],
        ["old_above_median", "young_above_median"],
        ["old_top_quartile", "young_top_quartile"],
    ],
}
DEFAULT_VERIFY = {"n_draws": 1000, "mc_paths": 10000, "mc_T": 50, "path_T": 100}
DEFAULT_TOLERANCES = {
    "coefficient_matching": 1e-12,
    "clearing": 1e-9,
    "symmetric_exactness": 1e-12,
    "fd_relative": 1e-6,
    "threshold_expression": 1e-8,
}


@dataclass
class RunConfig:
    model: dict
    simulation: dict = field(default_factory=dict)
    scenario: dict = field(default_factory=dict)
    panel: dict = field(default_factory=dict)
    regression: dict = field(default_factory=dict)
    verify: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    output_dir: str = "out"

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a JSON object")
        if "model" not in raw:
            raise ConfigError("missing required field: model")
        model = raw["model"]
        for key in _MODEL_REQUIRED:
            if key not in model:
                raise ConfigError(f"missing required field: model.{key}")
        known = {
            "model",
            "simulation",
            "scenario",
            "panel",
            "regression",
            "verify",
            "tolerances",
            "output_dir",
        }
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ConfigError(f"unknown config fields: {unknown}")
        cfg = cls(
            model=dict(model),
            simulation={**DEFAULT_SIMULATION, **raw.get("simulation", {})},
            scenario={**DEFAULT_SCENARIO, **raw.get("scenario", {})},
            panel={**DEFAULT_PANEL, **raw.get("panel", {})},
            regression={**DEFAULT_REGRESSION, **raw.get("regression", {})},
            verify={**DEFAULT_VERIFY, **raw.get("verify", {})},
            tolerances={**DEFAULT_TOLERANCES, **raw.get("tolerances", {})},
            output_dir=raw.get("output_dir", "out"),
        )
        cfg.model_params()  # validate eagerly so config errors surface early
        return cfg

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        return cls.from_dict(raw)

    def model_params(self) -> ModelParams:
        m = self.model
        try:
            demographics = Demographics(
                phi_H=tuple(m.get("phi_H", (0.25, 0.25))),
                phi_F=tuple(m.get("phi_F", (0.25, 0.25))),
            )
            return ModelParams.from_primitives(
                theta=float(m["theta_H"]),
                theta_F=float(m["theta_F"]),
                sigma_sq=float(m["sigma_sq"]),
                tau=float(m["tau"]),
                tau_star=float(m["tau_star"]),
                gamma=float(m["gamma"]),
                R=float(m["R"]),
                prior_mean=(None if m.get("prior_mean") is None else float(m["prior_mean"])),
                demographics=demographics,
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid model block: {exc}") from exc
        except Exception as exc:  # parameter invariant violations
            raise ConfigError(f"invalid model block: {exc}") from exc

    def default_dict(self) -> dict:
        return {
            "model": self.model,
            "simulation": self.simulation,
            "scenario": self.scenario,
            "panel": self.panel,
            "regression": self.regression,
            "verify": self.verify,
            "tolerances": self.tolerances,
            "output_dir": self.output_dir,
        }


def example_config() -> dict:
    """A complete config dictionary with the package defaults."""
    return {
        "model": {
            "theta_H": 10.0,
            "theta_F": 10.0,
            "sigma_sq": 1.0,
            "tau": 2.0,
            "tau_star": 0.5,
            "gamma": 2.0,
            "R": 1.05,
            "prior_mean": None,
            "phi_H": [0.25, 0.25],
            "phi_F": [0.25, 0.25],
        },
        "simulation": dict(DEFAULT_SIMULATION),
        "scenario": dict(DEFAULT_SCENARIO),
        "panel": dict(DEFAULT_PANEL),
        "regression": {k: list(v) for k, v in DEFAULT_REGRESSION.items()},
        "verify": dict(DEFAULT_VERIFY),
        "tolerances": dict(DEFAULT_TOLERANCES),
        "output_dir": "out",
    }
