"""Construction of standardized capital-flow variables.

Inflows by foreign agents (cif) sum the changes in a country's liabilities
from direct, portfolio and other investment; outflows by domestic agents
(cod) sum the changes in assets from direct, portfolio and other investment
plus reserve assets.  Both are normalized by trend GDP and standardized to
mean 0 / SD 1 within each country.  Rows with missing components are
dropped (the panel stays unbalanced) and the drop count is logged.
"""

from __future__ import annotations

import logging

import numpy as np
import pandas as pd

from ..params import DataError

logger = logging.getLogger(__name__)

CIF_COMPONENTS = ("di_liabilities", "portfolio_liabilities", "other_liabilities")
COD_COMPONENTS = ("di_assets", "portfolio_assets", "other_assets", "reserve_assets")


def standardize(values: pd.Series | np.ndarray) -> np.ndarray:
    """Center and scale to unit sample standard deviation."""
    x = np.asarray(values, dtype=float)
    sd = x.std(ddof=1)
    if not np.isfinite(sd) or sd == 0:
        raise DataError("cannot standardize a series with zero variance")
    return (x - x.mean()) / sd


def standardize_by_country(frame: pd.DataFrame, columns: list[str]) -> pd.DataFrame:
    out = frame.copy()
    for country, idx in out.groupby("country").groups.items():
        for col in columns:
            try:
                out.loc[idx, col] = standardize(out.loc[idx, col])
            except DataError as exc:
                raise DataError(f"{exc} (country {country}, column {col})") from exc
    return out


def build_flows(components: pd.DataFrame, trend_gdp: pd.DataFrame) -> pd.DataFrame:
    """Standardized (cif, cod) per country-year from raw flow components.

    ``components`` needs columns ``country, year`` plus the seven component
    series; ``trend_gdp`` needs ``country, year, trend_gdp``.  Returns a
    frame with columns ``country, year, cif, cod``.
    """
    needed = ["country", "year", *CIF_COMPONENTS, *COD_COMPONENTS]
    missing = [c for c in needed if c not in components.columns]
    if missing:
        raise DataError(f"flow components missing columns: {missing}")
    for col in ("country", "year", "trend_gdp"):
        if col not in trend_gdp.columns:
            raise DataError(f"trend GDP table missing column: {col}")

    merged = components.merge(trend_gdp, on=["country", "year"], how="left")
    component_cols = [*CIF_COMPONENTS, *COD_COMPONENTS, "trend_gdp"]
    complete = merged.dropna(subset=component_cols)
    n_dropped = len(merged) - len(complete)
    if n_dropped:
        logger.info("build_flows dropped %d rows with missing components", n_dropped)
    if (complete["trend_gdp"] <= 0).any():
        bad = complete.loc[complete["trend_gdp"] <= 0, ["country", "year"]].iloc[0]
        raise DataError(f"nonpositive trend GDP for ({bad['country']}, {bad['year']})")

    out = complete[["country", "year"]].copy()
    out["cif"] = complete[list(CIF_COMPONENTS)].sum(axis=1) / complete["trend_gdp"]
    out["cod"] = complete[list(COD_COMPONENTS)].sum(axis=1) / complete["trend_gdp"]
    return standardize_by_country(out, ["cif", "cod"]).reset_index(drop=True)
