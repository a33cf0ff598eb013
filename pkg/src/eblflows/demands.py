"""Cohort-level risky demands and their aggregation.

CARA preferences over normally distributed next-period wealth give the
mean-variance demand ``x = (E[y' + p'] - R p) / (gamma * V[y' + p'])`` per
asset, with the subjective moments implied by the holder's posterior belief
and the affine price rule.  Because wealth never enters the risky demand,
the risk-free holding is simply the budget residual.

Aggregate country holdings come in two normalizations:

* mass-weighted sums, which add up to the unit asset supply across the two
  countries (this is what market clearing pins down), and
* world-portfolio shares, i.e. the mass-weighted sum divided by the
  country's share of total participant mass, which equal 1 for every
  (country, asset) pair in the symmetric benchmark and are the natural
  units for home-bias measures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple

from .beliefs import PosteriorBelief
from .equilibrium import AssetLoadings, PriceLoadings, price, side_weights
from .params import (
    AGES,
    COUNTRIES,
    Demographics,
    ModelParams,
    ParameterError,
    other_country,
)


@dataclass(frozen=True)
class CohortId:
    """One trading cohort: country of origin, birth year and current age."""

    country: str
    birth_year: int
    age: int

    def __post_init__(self) -> None:
        if self.country not in COUNTRIES:
            raise ParameterError(f"unknown country {self.country!r}")
        if self.age not in AGES:
            raise ParameterError(f"age must be 0 or 1, got {self.age}")


@dataclass(frozen=True)
class CohortHoldings:
    """A cohort's portfolio: risky positions, risk-free residual and wealth."""

    x_domestic: float
    x_foreign: float
    riskfree: float
    wealth: float


@dataclass(frozen=True)
class AggregateHoldings:
    """Country-level holdings per asset.

    ``X[(i, j)]`` is country ``i``'s mass-weighted holding of asset ``j``;
    the two holders of any asset sum to the unit supply.  ``world_share``
    rescales by the holder country's participant-mass share so that the
    symmetric benchmark reads 1.0 everywhere.
    """

    X: Mapping[tuple[str, str], float]
    demographics: Demographics

    def world_share(self, holder: str, asset: str) -> float:
        return self.X[(holder, asset)] / self.demographics.country_share(holder)

    def home_bias(self, country: str = "H") -> float:
        return self.world_share(country, country) - self.world_share(
            country, other_country(country)
        )


def cohort_demand(
    belief: PosteriorBelief,
    loadings: AssetLoadings,
    p_now: float,
    y_now: float,
    gamma: float,
    R: float,
) -> float:
    """Mean-variance demand for one asset given a posterior belief.

    The subjective one-step-ahead payoff is ``y' + p'`` with
    ``E[y' + p'] = alpha + (1+beta0)*mean + beta1*y_now`` and
    ``V[y' + p'] = (1+beta0)^2 * variance``.  Degenerate (zero-variance)
    beliefs are rejected.
    """
    if belief.variance == 0:
        raise ParameterError(
            "zero subjective variance: degenerate (frequentist) beliefs "
            "cannot be priced by the mean-variance demand"
        )
    if gamma <= 0:
        raise ParameterError(f"gamma must be positive, got {gamma}")
    one_plus = 1.0 + loadings.beta0
    expected_payoff = loadings.alpha + one_plus * belief.mean + loadings.beta1 * y_now
    variance = one_plus**2 * belief.variance
    return (expected_payoff - R * p_now) / (gamma * variance)


def riskfree_demand(
    wealth: float, x_dom: float, x_for: float, p_dom: float, p_for: float
) -> float:
    """Risk-free holding as the budget residual of the risky positions."""
    return wealth - x_dom * p_dom - x_for * p_for


class AffineHolding(NamedTuple):
    """Holding of one asset as an affine function of that asset's outputs."""

    const: float
    on_y_now: float
    on_y_prev: float

    def at(self, y_now: float, y_prev: float) -> float:
        return self.const + self.on_y_now * y_now + self.on_y_prev * y_prev


def holding_coefficients(
    params: ModelParams, loadings: PriceLoadings, holder: str, asset: str, age: int
) -> AffineHolding:
    """Closed-form affine coefficients of a cohort's holding of one asset.

    Derived by substituting the affine price rule and the posterior mean of
    the holder's belief into the mean-variance demand.  ``alpha*(1-R)``
    appears because today's price enters with ``-R`` while tomorrow's
    expected price contributes ``+alpha``.
    """
    sw = side_weights(params)
    al = loadings.asset(asset)
    m = params.prior(holder).mean("domestic" if holder == asset else "foreign")
    one_plus = 1.0 + al.beta0
    R, gamma, omega = params.R, params.gamma, sw.omega
    alpha_tilde = al.alpha * (1.0 - R)
    domestic = holder == asset
    if age == 0:
        w, s = (sw.w0, sw.s0) if domestic else (sw.w0s, sw.s0s)
        denom = gamma * one_plus**2 * s
        return AffineHolding(
            const=(alpha_tilde + one_plus * (1 - w) * m) / denom,
            on_y_now=(w * one_plus + al.beta1 - R * al.beta0) / denom,
            on_y_prev=-R * al.beta1 / denom,
        )
    if age == 1:
        w, s = (sw.w1, sw.s1) if domestic else (sw.w1s, sw.s1s)
        denom = gamma * one_plus**2 * s
        return AffineHolding(
            const=(alpha_tilde + one_plus * (1 - w) * m) / denom,
            on_y_now=(w * one_plus * omega + al.beta1 - R * al.beta0) / denom,
            on_y_prev=(w * one_plus * (1 - omega) - R * al.beta1) / denom,
        )
    raise ParameterError(f"age must be 0 or 1, got {age}")


def cohort_holdings_closed_form(
    params: ModelParams,
    loadings: PriceLoadings,
    holder: CohortId,
    y_t: Mapping[str, float],
    y_tm1: Mapping[str, float],
) -> tuple[float, float]:
    """(domestic, foreign) risky holdings of one cohort from the closed forms.

    Each holding depends only on the current and lagged output of the asset's
    own country, so both countries' draws are required.
    """
    dom = holder.country
    forn = other_country(dom)
    x_dom = holding_coefficients(params, loadings, dom, dom, holder.age).at(
        y_t[dom], y_tm1[dom]
    )
    x_for = holding_coefficients(params, loadings, dom, forn, holder.age).at(
        y_t[forn], y_tm1[forn]
    )
    return x_dom, x_for


def aggregate_demand(
    cohort_values: Mapping[tuple[str, int], Mapping[str, float]],
    demographics: Demographics,
) -> AggregateHoldings:
    """Mass-weighted aggregation of cohort holdings per (holder, asset).

    ``cohort_values[(holder, age)][asset]`` is the cohort's holding of the
    asset.  Missing cohorts contribute nothing.
    """
    X: dict[tuple[str, str], float] = {}
    for holder in COUNTRIES:
        for asset in COUNTRIES:
            total = 0.0
            for age in AGES:
                values = cohort_values.get((holder, age))
                if values is None:
                    continue
                total += demographics.mass(holder, age) * values[asset]
            X[(holder, asset)] = total
    return AggregateHoldings(X=X, demographics=demographics)


def cohort_holdings_with_budget(
    params: ModelParams,
    loadings: PriceLoadings,
    holder: CohortId,
    y_t: Mapping[str, float],
    y_tm1: Mapping[str, float],
    wealth: float = 0.0,
) -> CohortHoldings:
    """Closed-form risky holdings plus the risk-free budget residual."""
    x_dom, x_for = cohort_holdings_closed_form(params, loadings, holder, y_t, y_tm1)
    dom = holder.country
    forn = other_country(dom)
    p_dom = price(loadings, dom, y_t[dom], y_tm1[dom])
    p_for = price(loadings, forn, y_t[forn], y_tm1[forn])
    return CohortHoldings(
        x_domestic=x_dom,
        x_foreign=x_for,
        riskfree=riskfree_demand(wealth, x_dom, x_for, p_dom, p_for),
        wealth=wealth,
    )
