"""Empirical methodology: flow construction, detrending and panel OLS."""

from .flows import build_flows, standardize, standardize_by_country
from .homebias import EquitySeries, home_bias_measure
from .hpfilter import hp_filter
from .ingest import IngestReport, IngestResult, ingest_csv
from .panel import PanelDataset, RegressionResult, panel_ols
from .population import flags_from_metrics, population_indicators
from .synthetic import build_synthetic_panel, default_country_params

__all__ = [
    "EquitySeries",
    "IngestReport",
    "IngestResult",
    "PanelDataset",
    "RegressionResult",
    "build_flows",
    "build_synthetic_panel",
    "default_country_params",
    "flags_from_metrics",
    "home_bias_measure",
    "hp_filter",
    "ingest_csv",
    "panel_ols",
    "population_indicators",
    "standardize",
    "standardize_by_country",
]
