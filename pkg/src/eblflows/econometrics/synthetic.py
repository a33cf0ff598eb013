"""Synthetic country-year panels generated from the equilibrium model.

Each synthetic country is the home country of its own two-country world
against a rest-of-world counterpart.  Per country-year:

* ``gdp_growth`` is the growth rate of level-shifted home output (outputs
  are Gaussian and can be negative; a constant shift keeps levels at or
  above a tenth of the mean),
* ``cif`` is the change in the counterpart's mass-weighted holdings of the
  home asset,
* ``cod`` is the change in home mass-weighted holdings of the counterpart
  asset,

with flows standardized within country and demographic indicator flags
derived from the participation masses used in the simulation.

Two ingredients connect the model's foreign-asset rebalancing to *home*
growth the way globally synchronized cycles do in observed data, while
leaving the pricing rules untouched: all outputs load on one persistent
world cycle (``output_correlation`` of variance, AR parameter
``cycle_persistence``), and flows carry idiosyncratic measurement noise
(``flow_noise_ratio`` times the average model-flow standard deviation) so
that within-country standardization does not erase cross-country
differences in flow sensitivity.
"""

from __future__ import annotations

import math
from typing import Mapping, Sequence

import numpy as np
import pandas as pd

from ..params import Demographics, ModelParams, ParameterError
from ..simulation import BURN_IN, path_from_outputs
from .flows import standardize
from .panel import PanelDataset
from .population import flags_from_metrics

GLOBAL_CYCLE_STREAM = 999  # sub-seed of the shared world-cycle draws


def default_country_params(
    n_countries: int = 8,
    theta: float = 10.0,
    sigma_sq: float = 1.0,
    tau: float = 16.0,
    tau_star: float = 0.0625,
    gamma: float = 2.0,
    R: float = 1.05,
    phi_young_levels: Sequence[float] = (0.22, 0.28),
    phi_old_levels: Sequence[float] = (0.03, 0.55),
) -> dict[str, ModelParams]:
    """A factorial spread of participation masses across synthetic countries.

    Young masses cycle fastest, so the default 8 countries form a 2x2
    factorial in (young, old) masses with two replicates per cell and the
    young/old indicator flags orthogonal to each other.  The deep prior
    asymmetry keeps the domestic precision far above both demographic
    sign-flip thresholds.
    """
    if n_countries < 4:
        raise ParameterError("synthetic panels need at least 4 countries for quartile flags")
    out = {}
    for k in range(n_countries):
        phi_young = phi_young_levels[k % len(phi_young_levels)]
        phi_old = phi_old_levels[(k // len(phi_young_levels)) % len(phi_old_levels)]
        demo = Demographics(phi_H=(phi_young, phi_old), phi_F=(0.25, 0.25))
        out[f"C{k + 1:02d}"] = ModelParams.from_primitives(
            theta=theta,
            sigma_sq=sigma_sq,
            tau=tau,
            tau_star=tau_star,
            gamma=gamma,
            R=R,
            demographics=demo,
        )
    return out


def _world_cycle(seed: int, T: int, persistence: float) -> np.ndarray:
    """Stationary unit-variance AR(1) world cycle shared by all countries."""
    rng = np.random.default_rng([seed, GLOBAL_CYCLE_STREAM])
    u = rng.standard_normal(T)
    g = np.empty(T)
    g[0] = u[0]
    scale = math.sqrt(1.0 - persistence**2)
    for t in range(1, T):
        g[t] = persistence * g[t - 1] + scale * u[t]
    return g


def _shifted_growth(y: np.ndarray, theta: float) -> np.ndarray:
    if theta <= 0:
        raise ParameterError(
            "synthetic growth rates need a positive mean output level to shift around"
        )
    floor = 0.1 * theta
    shift = max(0.0, floor - float(y.min()))
    levels = y + shift
    return (levels[1:] - levels[:-1]) / levels[:-1]


def build_synthetic_panel(
    country_params: Mapping[str, ModelParams],
    T: int,
    seed: int,
    output_correlation: float = 0.98,
    cycle_persistence: float = 0.85,
    flow_noise_ratio: float = 1.0,
) -> PanelDataset:
    """Simulate every country's world and assemble the regression panel."""
    if len(country_params) < 4:
        raise ParameterError("synthetic panels need at least 4 countries for quartile flags")
    if not 0.0 <= output_correlation < 1.0:
        raise ParameterError(
            f"output_correlation must lie in [0, 1), got {output_correlation}"
        )
    if not 0.0 <= cycle_persistence < 1.0:
        raise ParameterError(
            f"cycle_persistence must lie in [0, 1), got {cycle_persistence}"
        )
    if flow_noise_ratio < 0:
        raise ParameterError(f"flow_noise_ratio must be nonnegative, got {flow_noise_ratio}")
    if T < BURN_IN + 2:
        raise ParameterError(f"T must be at least {BURN_IN + 2}, got {T}")

    names = sorted(country_params)
    metrics = {
        name: (
            country_params[name].demographics.mass("H", 0),
            country_params[name].demographics.mass("H", 1),
        )
        for name in names
    }
    flags = flags_from_metrics(metrics)
    cycle = _world_cycle(seed, T, cycle_persistence)
    mix_common = math.sqrt(output_correlation)
    mix_own = math.sqrt(1.0 - output_correlation)

    intermediate = {}
    for idx, name in enumerate(names):
        params = country_params[name]
        rng = np.random.default_rng([seed, idx])
        scale = math.sqrt(params.sigma_sq)
        eps_home = rng.standard_normal(T)
        eps_row = rng.standard_normal(T)
        y_H = params.theta_H + scale * (mix_common * cycle + mix_own * eps_home)
        y_F = params.theta_F + scale * (mix_common * cycle + mix_own * eps_row)
        path = path_from_outputs(params, y_H, y_F, seed=seed)
        share_home = params.demographics.country_share("H")
        share_row = params.demographics.country_share("F")
        cod_flow = path.flows[("H", "F")][BURN_IN:] * share_home
        cif_flow = path.flows[("F", "H")][BURN_IN:] * share_row
        noise = rng.standard_normal((len(cod_flow), 2))
        growth = _shifted_growth(y_H, params.theta_H)
        intermediate[name] = (cod_flow, cif_flow, noise, growth)

    sd_cod = float(np.mean([intermediate[n][0].std(ddof=1) for n in names]))
    sd_cif = float(np.mean([intermediate[n][1].std(ddof=1) for n in names]))

    rows = []
    for name in names:
        cod_flow, cif_flow, noise, growth = intermediate[name]
        cod = standardize(cod_flow + noise[:, 0] * flow_noise_ratio * sd_cod)
        cif = standardize(cif_flow + noise[:, 1] * flow_noise_ratio * sd_cif)
        frame = pd.DataFrame(
            {
                "country": name,
                "year": np.arange(BURN_IN, T),
                "gdp_growth": growth[BURN_IN - 1 :],
                "cif": cif,
                "cod": cod,
            }
        )
        for col in flags.columns:
            frame[col] = int(flags.loc[name, col])
        rows.append(frame)

    panel = pd.concat(rows, ignore_index=True)
    return PanelDataset(frame=panel, provenance=f"synthetic(seed={seed})")
