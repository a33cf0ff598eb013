"""Country-level investor-population indicators from binned population counts.

The investor population spans ages 25-74 in 5-year bins: young means 25-49,
old means 50-74.  Each country's young and old counts are averaged over the
sample window, then flagged relative to the cross-country median and top
quartile.  Values tied with the cutoff count as above it, and the resulting
indicators are constant across years for each country.
"""

from __future__ import annotations

import numpy as np
import pandas as pd

from ..params import DataError

YOUNG_BINS = (25, 30, 35, 40, 45)
OLD_BINS = (50, 55, 60, 65, 70)
REQUIRED_BINS = YOUNG_BINS + OLD_BINS


def population_indicators(
    pop: pd.DataFrame,
    start_year: int | None = None,
    end_year: int | None = None,
) -> pd.DataFrame:
    """Four 0/1 flags per country from averaged young/old population counts.

    ``pop`` needs columns ``country, year, age_bin_start, count`` with bins
    covering 25-74.  Returns a frame indexed by country with columns
    ``old_above_median, young_above_median, old_top_quartile,
    young_top_quartile``.
    """
    for col in ("country", "year", "age_bin_start", "count"):
        if col not in pop.columns:
            raise DataError(f"population table missing column: {col}")
    window = pop
    if start_year is not None:
        window = window[window["year"] >= start_year]
    if end_year is not None:
        window = window[window["year"] <= end_year]
    if window.empty:
        raise DataError("population table has no rows in the sample window")

    young_avg: dict[str, float] = {}
    old_avg: dict[str, float] = {}
    for country, rows in window.groupby("country"):
        by_year = rows.pivot_table(
            index="year", columns="age_bin_start", values="count", aggfunc="sum"
        )
        for bin_start in REQUIRED_BINS:
            if bin_start not in by_year.columns or by_year[bin_start].isna().any():
                raise DataError(
                    f"country {country} is missing population bin starting at {bin_start}"
                )
        young_avg[country] = float(by_year[list(YOUNG_BINS)].sum(axis=1).mean())
        old_avg[country] = float(by_year[list(OLD_BINS)].sum(axis=1).mean())

    countries = sorted(young_avg)
    young = np.array([young_avg[c] for c in countries])
    old = np.array([old_avg[c] for c in countries])
    return pd.DataFrame(
        {
            "old_above_median": (old >= np.median(old)).astype(int),
            "young_above_median": (young >= np.median(young)).astype(int),
            "old_top_quartile": (old >= np.quantile(old, 0.75)).astype(int),
            "young_top_quartile": (young >= np.quantile(young, 0.75)).astype(int),
        },
        index=pd.Index(countries, name="country"),
    )


def flags_from_metrics(metrics: dict[str, tuple[float, float]]) -> pd.DataFrame:
    """Same flag construction from precomputed (young, old) country metrics."""
    countries = sorted(metrics)
    young = np.array([metrics[c][0] for c in countries])
    old = np.array([metrics[c][1] for c in countries])
    return pd.DataFrame(
        {
            "old_above_median": (old >= np.median(old)).astype(int),
            "young_above_median": (young >= np.median(young)).astype(int),
            "old_top_quartile": (old >= np.quantile(old, 0.75)).astype(int),
            "young_top_quartile": (young >= np.quantile(young, 0.75)).astype(int),
        },
        index=pd.Index(countries, name="country"),
    )
