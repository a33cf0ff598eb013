"""Aggregate equity home-bias measure.

Home bias compares the domestically held share of the domestic equity
portfolio with the country's share of global market capitalization:

    domestic equity investment / global equity investment by the country
    - market cap / global market cap

where domestic equity investment is market capitalization net of foreign
holdings of domestic equity, and the country's global equity investment
adds its foreign equity assets on top.
"""

from __future__ import annotations

from dataclasses import dataclass

import pandas as pd

from ..params import DataError

EQUITY_COLUMNS = (
    "year",
    "us_market_cap",
    "global_market_cap",
    "foreign_holdings_of_us_equity",
    "us_foreign_equity_assets",
)


@dataclass
class EquitySeries:
    """Per-year equity stocks, all deflated to a common base year."""

    frame: pd.DataFrame

    def __post_init__(self) -> None:
        missing = [c for c in EQUITY_COLUMNS if c not in self.frame.columns]
        if missing:
            raise DataError(f"equity series missing columns: {missing}")
        bad = self.frame[
            ~(self.frame["global_market_cap"] >= self.frame["us_market_cap"])
            | ~(self.frame["us_market_cap"] > 0)
        ]
        if len(bad):
            year = bad.iloc[0]["year"]
            raise DataError(
                f"equity series violates global >= domestic market cap > 0 in year {year}"
            )
        if self.frame["year"].duplicated().any():
            year = self.frame.loc[self.frame["year"].duplicated(), "year"].iloc[0]
            raise DataError(f"duplicate year in equity series: {year}")

    def row(self, year: int) -> pd.Series:
        match = self.frame[self.frame["year"] == year]
        if match.empty:
            raise DataError(f"no equity data for year {year}")
        return match.iloc[0]


def home_bias_measure(series: EquitySeries, year: int) -> float:
    """Domestic investment share minus global market-cap share for one year."""
    row = series.row(year)
    domestic_investment = row["us_market_cap"] - row["foreign_holdings_of_us_equity"]
    global_investment = domestic_investment + row["us_foreign_equity_assets"]
    if global_investment <= 0:
        raise DataError(f"nonpositive global equity investment in year {year}")
    if row["global_market_cap"] <= 0:
        raise DataError(f"nonpositive global market capitalization in year {year}")
    return float(
        domestic_investment / global_investment
        - row["us_market_cap"] / row["global_market_cap"]
    )
