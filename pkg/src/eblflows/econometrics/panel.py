"""Country-year panel OLS with fixed effects, trends and clustered errors.

The estimating equation regresses a standardized flow variable on real GDP
growth (optionally interacted with country-level demographic indicators),
a full set of country dummies and country-specific linear time trends.
Standard errors are cluster-robust by country with the small-sample scale
``G/(G-1) * (N-1)/(N-K)``; p-values use a t distribution with ``G-1``
degrees of freedom.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy import stats

from ..params import DataError, ParameterError

INDICATOR_COLUMNS = (
    "old_above_median",
    "young_above_median",
    "old_top_quartile",
    "young_top_quartile",
)

PANEL_REQUIRED = ("country", "year", "gdp_growth", "cif", "cod")


@dataclass
class PanelDataset:
    """Country-year observations of growth, standardized flows and indicators."""

    frame: pd.DataFrame
    provenance: str = "unknown"

    def __post_init__(self) -> None:
        missing = [c for c in PANEL_REQUIRED if c not in self.frame.columns]
        if missing:
            raise DataError(f"panel is missing required columns: {missing}")
        dupes = self.frame.duplicated(subset=["country", "year"])
        if dupes.any():
            key = self.frame.loc[dupes.idxmax(), ["country", "year"]]
            raise DataError(
                f"duplicate (country, year) key: ({key['country']}, {key['year']})"
            )

    @property
    def countries(self) -> list[str]:
        return sorted(self.frame["country"].unique())

    def indicator_columns(self) -> list[str]:
        return [c for c in INDICATOR_COLUMNS if c in self.frame.columns]


@dataclass
class RegressionResult:
    coefficients: dict[str, float]
    clustered_se: dict[str, float]
    t_stats: dict[str, float]
    p_values: dict[str, float]
    r_squared: float
    n_obs: int
    n_clusters: int
    outcome: str = ""
    focus_terms: tuple[str, ...] = field(default_factory=tuple)

    def stars(self, name: str) -> str:
        p = self.p_values[name]
        if p < 0.01:
            return "***"
        if p < 0.05:
            return "**"
        if p < 0.10:
            return "*"
        return ""


def _design_matrix(
    data: PanelDataset, outcome: str, interactions: tuple[str, ...]
) -> tuple[np.ndarray, np.ndarray, list[str], np.ndarray]:
    frame = data.frame
    if outcome not in ("cif", "cod"):
        raise ParameterError(f"outcome must be 'cif' or 'cod', got {outcome!r}")
    for name in interactions:
        if name not in frame.columns:
            raise ParameterError(f"unknown interaction indicator {name!r}")
    countries = data.countries
    if len(countries) < 2:
        raise ParameterError("panel regression needs at least 2 country clusters")
    y = frame[outcome].to_numpy(dtype=float)
    growth = frame["gdp_growth"].to_numpy(dtype=float)
    trend_t = frame["year"].to_numpy(dtype=float)
    trend_t = trend_t - trend_t.min()

    columns = [growth]
    names = ["gdp_growth"]
    for name in interactions:
        columns.append(growth * frame[name].to_numpy(dtype=float))
        names.append(f"gdp_growth_x_{name}")
    for c in countries:
        mask = (frame["country"] == c).to_numpy(dtype=float)
        columns.append(mask)
        names.append(f"fe_{c}")
    for c in countries:
        mask = (frame["country"] == c).to_numpy(dtype=float)
        columns.append(mask * trend_t)
        names.append(f"trend_{c}")
    X = np.column_stack(columns)
    clusters = frame["country"].to_numpy()
    return X, y, names, clusters


def _collinear_columns(X: np.ndarray, names: list[str]) -> list[str]:
    """Columns whose removal restores full rank, found by greedy QR growth."""
    bad = []
    kept: list[np.ndarray] = []
    rank = 0
    for j in range(X.shape[1]):
        trial = np.column_stack(kept + [X[:, j]]) if kept else X[:, j : j + 1]
        new_rank = np.linalg.matrix_rank(trial)
        if new_rank > rank:
            kept.append(X[:, j])
            rank = new_rank
        else:
            bad.append(names[j])
    return bad


def panel_ols(
    data: PanelDataset, outcome: str, interactions: tuple[str, ...] | list[str] = ()
) -> RegressionResult:
    """OLS with country dummies, country trends and country-clustered errors."""
    interactions = tuple(interactions)
    X, y, names, clusters = _design_matrix(data, outcome, interactions)
    mask = ~np.isnan(y) & ~np.isnan(X).any(axis=1)
    X, y, clusters = X[mask], y[mask], clusters[mask]
    n, k = X.shape
    if n <= k:
        raise ParameterError(f"too few observations ({n}) for {k} regressors")
    if np.linalg.matrix_rank(X) < k:
        bad = _collinear_columns(X, names)
        raise ParameterError(f"singular design matrix; collinear columns: {bad}")

    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ beta
    xtx_inv = np.linalg.inv(X.T @ X)

    groups = pd.unique(clusters)
    n_clusters = len(groups)
    if n_clusters < 2:
        raise ParameterError("clustered errors need at least 2 clusters")
    meat = np.zeros((k, k))
    for g in groups:
        sel = clusters == g
        score = X[sel].T @ resid[sel]
        meat += np.outer(score, score)
    scale = (n_clusters / (n_clusters - 1)) * ((n - 1) / (n - k))
    cov = scale * xtx_inv @ meat @ xtx_inv
    se = np.sqrt(np.diag(cov))

    ss_res = float(resid @ resid)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else float("nan")

    t_stats = beta / se
    p_values = 2.0 * stats.t.sf(np.abs(t_stats), df=n_clusters - 1)
    focus = tuple(names[: 1 + len(interactions)])
    return RegressionResult(
        coefficients=dict(zip(names, beta.tolist())),
        clustered_se=dict(zip(names, se.tolist())),
        t_stats=dict(zip(names, t_stats.tolist())),
        p_values=dict(zip(names, p_values.tolist())),
        r_squared=r_squared,
        n_obs=n,
        n_clusters=n_clusters,
        outcome=outcome,
        focus_terms=focus,
    )
