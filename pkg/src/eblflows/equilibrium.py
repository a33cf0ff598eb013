"""Closed-form linear equilibrium prices.

Equilibrium prices are affine in the output realizations that at least one
market participant has experienced: ``p_{j,t} = alpha_j + beta0_j*y_{j,t}
+ beta1_j*y_{j,t-1}``, with zero loadings on the other country's output.
The coefficients are pinned down by matching coefficients in the market
clearing condition, which aggregates the mean-variance demands of the four
trading cohorts (young/old x domestic/foreign) with their demographic
masses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple

from .beliefs import belief_weights
from .params import (
    COUNTRIES,
    Demographics,
    EquilibriumError,
    ModelParams,
    ParameterError,
    other_country,
)

# Tolerance below which the cross-loading fixed point cannot be certified
# to have the unique zero solution.
_CROSS_GAP_RTOL = 1e-10


class SideWeights(NamedTuple):
    """Posterior weights/variances by age for the domestic and foreign side."""

    w0: float
    w1: float
    s0: float  # posterior variance, age 0, domestic precision
    s1: float
    w0s: float
    w1s: float
    s0s: float  # posterior variance, age 0, foreign precision
    s1s: float
    omega: float  # recency weight of the old, 1/2


def side_weights(params: ModelParams) -> SideWeights:
    w0, s0, _ = belief_weights(0, params.tau, params.sigma_sq)
    w1, s1, omega = belief_weights(1, params.tau, params.sigma_sq)
    w0s, s0s, _ = belief_weights(0, params.tau_star, params.sigma_sq)
    w1s, s1s, _ = belief_weights(1, params.tau_star, params.sigma_sq)
    return SideWeights(w0, w1, s0, s1, w0s, w1s, s0s, s1s, omega)


@dataclass(frozen=True)
class AssetLoadings:
    """Affine price coefficients for one asset: p_t = alpha + beta0*y_t + beta1*y_{t-1}."""

    alpha: float
    beta0: float
    beta1: float
    sigma_bar: float  # aggregate precision: mass-weighted sum of inverse posterior variances


@dataclass(frozen=True)
class PriceLoadings:
    """Solved price coefficients for both assets.

    ``cross_loadings_zero`` records that the fixed point for loadings on the
    other country's output is exactly zero, which the solver certifies.
    ``R`` is carried along because demand evaluation needs the gross
    risk-free return the loadings were solved under.
    """

    H: AssetLoadings
    F: AssetLoadings
    R: float
    cross_loadings_zero: bool = True

    def asset(self, country: str) -> AssetLoadings:
        if country == "H":
            return self.H
        if country == "F":
            return self.F
        raise ParameterError(f"unknown asset {country!r}")


@dataclass(frozen=True)
class ExcessPayoff:
    """Excess payoff of one unit of a risky asset over the risk-free asset."""

    value: float

    @classmethod
    def from_components(cls, p_next: float, y_next: float, p_now: float, R: float) -> "ExcessPayoff":
        return cls(p_next + y_next - p_now * R)


def _masses(demographics: Demographics, asset: str) -> tuple[float, float, float, float]:
    """(young dom, old dom, young for, old for) masses for one asset's market."""
    dom, forn = asset, other_country(asset)
    return (
        demographics.mass(dom, 0),
        demographics.mass(dom, 1),
        demographics.mass(forn, 0),
        demographics.mass(forn, 1),
    )


def _solve_asset(params: ModelParams, asset: str) -> AssetLoadings:
    sw = side_weights(params)
    p0i, p1i, p0j, p1j = _masses(params.demographics, asset)
    m = params.common_prior_mean
    if m is None:
        raise EquilibriumError(
            "the closed-form solver requires a single common prior mean; "
            "the supplied priors have heterogeneous means"
        )
    R, gamma, omega = params.R, params.gamma, sw.omega

    sigma_bar = p0i / sw.s0 + p1i / sw.s1 + p0j / sw.s0s + p1j / sw.s1s
    # Loading of aggregate (precision-weighted) posterior means on y_t and on y_{t-1}.
    b_now = (
        p0i * sw.w0 / sw.s0
        + p1i * sw.w1 * omega / sw.s1
        + p0j * sw.w0s / sw.s0s
        + p1j * sw.w1s * omega / sw.s1s
    )
    a_lag = p1i * sw.w1 / sw.s1 + p1j * sw.w1s / sw.s1s
    prior_pull = (
        p0i * (1 - sw.w0) / sw.s0
        + p1i * (1 - sw.w1) / sw.s1
        + p0j * (1 - sw.w0s) / sw.s0s
        + p1j * (1 - sw.w1s) / sw.s1s
    )

    denom = sigma_bar * R - (b_now + (1 - omega) * a_lag / R)
    if abs(denom) < 1e-14 * sigma_bar * R:
        raise EquilibriumError("degenerate equilibrium: vanishing coefficient-matching denominator")
    beta0 = sigma_bar * R / denom - 1.0
    one_plus = 1.0 + beta0
    if one_plus <= 0:
        raise EquilibriumError(f"invalid equilibrium: 1 + beta0 = {one_plus} <= 0")
    beta1 = one_plus * (1 - omega) * a_lag / (sigma_bar * R)
    alpha = (one_plus * prior_pull * m - gamma * one_plus**2) / (sigma_bar * (R - 1))
    return AssetLoadings(alpha=alpha, beta0=beta0, beta1=beta1, sigma_bar=sigma_bar)


def _cross_loading_gap(params: ModelParams, asset: str) -> float:
    """Distance of the cross-loading fixed-point multiplier from the identity.

    Matching coefficients on the *other* country's output yields a linear
    fixed point ``c * beta0_cross = beta0_cross``; a nonzero gap ``|c - 1|``
    (here scaled back to the clearing equation) certifies that zero is the
    unique cross loading.
    """
    sw = side_weights(params)
    p0i, p1i, p0j, p1j = _masses(params.demographics, asset)
    R, omega = params.R, sw.omega
    sigma_bar = p0i / sw.s0 + p1i / sw.s1 + p0j / sw.s0s + p1j / sw.s1s
    # Domestic holders weight foreign-output news with the starred weights
    # while their payoff variance about this asset stays unstarred.
    e_now = (
        p0i * sw.w0s / sw.s0
        + p1i * sw.w1s * omega / sw.s1
        + p0j * sw.w0 / sw.s0s
        + p1j * sw.w1 * omega / sw.s1s
    )
    g_lag = p1i * sw.w1s / sw.s1 + p1j * sw.w1 / sw.s1s
    return abs(sigma_bar * R - (e_now + (1 - omega) * g_lag / R))


def solve_price_loadings(params: ModelParams) -> PriceLoadings:
    """Solve the affine price coefficients for both assets in closed form.

    Raises :class:`EquilibriumError` when the coefficient-matching
    denominator vanishes, when ``1 + beta0 <= 0``, or when the cross-loading
    fixed point cannot be certified to be zero.
    """
    loadings = {asset: _solve_asset(params, asset) for asset in COUNTRIES}
    for asset in COUNTRIES:
        gap = _cross_loading_gap(params, asset)
        if gap < _CROSS_GAP_RTOL * loadings[asset].sigma_bar * params.R:
            raise EquilibriumError(
                "cross-loading system is degenerate: nonzero loadings on the "
                "other country's output cannot be ruled out"
            )
    return PriceLoadings(H=loadings["H"], F=loadings["F"], R=params.R)


def price(loadings: PriceLoadings, asset: str, y_t: float, y_tm1: float) -> float:
    """Evaluate the affine equilibrium price of one asset."""
    al = loadings.asset(asset)
    return al.alpha + al.beta0 * y_t + al.beta1 * y_tm1


def full_info_price(params: ModelParams, asset: str) -> float:
    """Constant equilibrium price when output means are known: (theta - gamma*sigma^2)/(R-1)."""
    if params.R <= 1:
        raise ParameterError(f"gross risk-free return must exceed 1, got {params.R}")
    return (params.theta(asset) - params.gamma * params.sigma_sq) / (params.R - 1)


def muc_residuals(params: ModelParams, loadings: PriceLoadings, asset: str) -> tuple[float, float, float]:
    """Residuals of the three coefficient-matching equations at the solved loadings.

    Returned in the order (lagged-output equation, current-output equation,
    constant-term equation); all should be at float rounding level.
    """
    sw = side_weights(params)
    p0i, p1i, p0j, p1j = _masses(params.demographics, asset)
    al = loadings.asset(asset)
    R, gamma, omega = params.R, params.gamma, sw.omega
    m = params.common_prior_mean
    if m is None:
        raise EquilibriumError("coefficient-matching residuals need a common prior mean")
    one_plus = 1.0 + al.beta0
    sigma_bar = al.sigma_bar

    a_lag = p1i * sw.w1 / sw.s1 + p1j * sw.w1s / sw.s1s
    b_now = (
        p0i * sw.w0 / sw.s0
        + p1i * sw.w1 * omega / sw.s1
        + p0j * sw.w0s / sw.s0s
        + p1j * sw.w1s * omega / sw.s1s
    )
    prior_pull = (
        p0i * (1 - sw.w0) / sw.s0
        + p1i * (1 - sw.w1) / sw.s1
        + p0j * (1 - sw.w0s) / sw.s0s
        + p1j * (1 - sw.w1s) / sw.s1s
    )
    r_lag = one_plus * (1 - omega) * a_lag - sigma_bar * R * al.beta1
    r_now = one_plus * b_now + sigma_bar * al.beta1 - sigma_bar * R * al.beta0
    r_const = one_plus * prior_pull * m - gamma * one_plus**2 - sigma_bar * (R - 1) * al.alpha
    return abs(r_lag), abs(r_now), abs(r_const)


def market_clearing_residual(
    params: ModelParams,
    loadings: PriceLoadings,
    y_t: Mapping[str, float],
    y_tm1: Mapping[str, float],
) -> dict[str, float]:
    """|aggregate demand - 1| per asset, built through the demand pipeline.

    Beliefs are reconstructed from the output draws (the young experienced
    ``y_t``, the old ``y_{t-1}, y_t``) and fed through the mean-variance
    demand of each cohort; this exercises the full posterior -> demand ->
    aggregation chain rather than the closed-form holdings.
    """
    from .beliefs import posterior_gaussian
    from .demands import cohort_demand

    residuals = {}
    for asset in COUNTRIES:
        al = loadings.asset(asset)
        p_now = price(loadings, asset, y_t[asset], y_tm1[asset])
        total = 0.0
        for holder in COUNTRIES:
            side = "domestic" if holder == asset else "foreign"
            prior = params.prior(holder)
            for age, window in ((0, [y_t[asset]]), (1, [y_tm1[asset], y_t[asset]])):
                belief = posterior_gaussian(prior, side, params.sigma_sq, window)
                demand = cohort_demand(
                    belief, al, p_now, y_t[asset], params.gamma, params.R
                )
                total += params.demographics.mass(holder, age) * demand
        residuals[asset] = abs(total - 1.0)
    return residuals
