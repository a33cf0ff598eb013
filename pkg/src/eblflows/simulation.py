"""Simulated economies, shock experiments and comparative statics.

Solved price coefficients are history-independent, so a simulated path is a
deterministic affine map from the output draws to prices, holdings, flows
and home bias.  Shock experiments perturb a single period's output around a
stable baseline; comparative statics differentiate the flow response
analytically and locate the precision thresholds where demographic effects
change sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .demands import AffineHolding, holding_coefficients
from .equilibrium import PriceLoadings, side_weights, solve_price_loadings
from .params import (
    AGES,
    COUNTRIES,
    EquilibriumError,
    ModelParams,
    ParameterError,
    other_country,
)

BURN_IN = 2  # first periods lack a complete experience window for the old

PATH_CSV_COLUMNS = (
    "t",
    "y_H",
    "y_F",
    "p_H",
    "p_F",
    "x_H0_H",
    "x_H1_H",
    "x_F0_H",
    "x_F1_H",
    "x_H0_F",
    "x_H1_F",
    "x_F0_F",
    "x_F1_F",
    "X_H_H",
    "X_H_F",
    "X_F_H",
    "X_F_F",
    "HB",
    "flow_H_H",
    "flow_F_H",
    "flow_F_F",
    "flow_H_F",
)


@dataclass(frozen=True)
class ShockScenario:
    """A one-period output shock after a stable history.

    All outputs other than the shocked country's current draw sit at the
    baseline (the country's true mean when ``baseline`` is ``None``).
    ``shocked_country`` may be ``"H"``, ``"F"`` or ``"both"``.
    """

    shocked_country: str
    shock_size: float
    baseline: float | None = None

    def __post_init__(self) -> None:
        if self.shocked_country not in ("H", "F", "both"):
            raise ParameterError(
                f"shocked_country must be 'H', 'F' or 'both', got {self.shocked_country!r}"
            )

    @property
    def sign(self) -> str:
        if self.shock_size < 0:
            return "recession"
        if self.shock_size > 0:
            return "boom"
        return "none"


@dataclass(frozen=True)
class ShockFlows:
    """Flow response to a shock, in world-portfolio-share units.

    ``domestic_inflow[i]`` is the change in country ``i``'s holdings of its
    own asset; ``foreign_inflow[i]`` the change in the *other* country's
    holdings of ``i``'s asset.
    """

    domestic_inflow: dict[str, float]
    foreign_inflow: dict[str, float]
    delta_home_bias: float


@dataclass(frozen=True)
class Thresholds:
    """Roots of the ambiguous demographic sensitivities in the domestic precision."""

    tau_bar_1: float
    tau_bar_2: float
    bracket: tuple[float, float]


@dataclass(frozen=True)
class ComparativeStatics:
    """Flow sensitivity and its demographic derivatives for one country.

    ``dX_dy`` is the exact derivative of the country's (mass-weighted)
    domestic holdings with respect to the current domestic output draw;
    ``kernel`` is the same object rescaled by the positive factor
    ``gamma*(1+beta0)*sigma_bar``, whose demographic derivatives are the
    four closed forms in ``d_by_phi`` (ordered: young-foreign, old-foreign,
    young-domestic, old-domestic mass).
    """

    dX_dy: float
    kernel: float
    d_by_phi: tuple[float, float, float, float]
    thresholds: Thresholds | None = None


@dataclass(frozen=True)
class MonteCarloResult:
    mean_hb: float
    std_error: float
    n_paths: int
    T: int
    burn_in: int = BURN_IN


@dataclass
class EconomyPath:
    """One simulated trajectory of the two-country economy.

    Arrays are aligned on ``t``; entries before a quantity is defined are
    NaN (prices and holdings need one lag of output, flows need two).
    Aggregates are world-portfolio shares; ``aggregates_raw`` keeps the
    mass-weighted sums whose per-asset totals are pinned at 1 by market
    clearing.
    """

    rng_seed: int
    y: dict[str, np.ndarray]
    prices: dict[str, np.ndarray]
    cohort: dict[tuple[str, int, str], np.ndarray]
    aggregates: dict[tuple[str, str], np.ndarray]
    aggregates_raw: dict[tuple[str, str], np.ndarray]
    home_bias: np.ndarray
    flows: dict[tuple[str, str], np.ndarray]
    clearing_residual: dict[str, np.ndarray]
    burn_in: int = BURN_IN
    loadings: PriceLoadings | None = None

    @property
    def T(self) -> int:
        return len(self.home_bias)

    def max_clearing_residual(self) -> float:
        worst = 0.0
        for asset in COUNTRIES:
            res = self.clearing_residual[asset]
            finite = res[~np.isnan(res)]
            if finite.size:
                worst = max(worst, float(np.max(finite)))
        return worst

    def csv_rows(self):
        """Yield CSV rows (header first) in the documented column order."""
        yield PATH_CSV_COLUMNS
        for t in range(self.T):
            values = [
                t,
                self.y["H"][t],
                self.y["F"][t],
                self.prices["H"][t],
                self.prices["F"][t],
                self.cohort[("H", 0, "H")][t],
                self.cohort[("H", 1, "H")][t],
                self.cohort[("F", 0, "H")][t],
                self.cohort[("F", 1, "H")][t],
                self.cohort[("H", 0, "F")][t],
                self.cohort[("H", 1, "F")][t],
                self.cohort[("F", 0, "F")][t],
                self.cohort[("F", 1, "F")][t],
                self.aggregates[("H", "H")][t],
                self.aggregates[("H", "F")][t],
                self.aggregates[("F", "H")][t],
                self.aggregates[("F", "F")][t],
                self.home_bias[t],
                self.flows[("H", "H")][t],
                self.flows[("F", "H")][t],
                self.flows[("F", "F")][t],
                self.flows[("H", "F")][t],
            ]
            yield values

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            for row in self.csv_rows():
                fh.write(",".join(_format_cell(v) for v in row))
                fh.write("\n")

    def summary(self) -> dict:
        used = slice(self.burn_in, None)
        out = {
            "seed": self.rng_seed,
            "T": self.T,
            "burn_in": self.burn_in,
            "mean_home_bias": float(np.nanmean(self.home_bias[used])),
            "max_clearing_residual": self.max_clearing_residual(),
        }
        for holder in COUNTRIES:
            for asset in COUNTRIES:
                key = f"mean_X_{holder}_{asset}"
                out[key] = float(np.nanmean(self.aggregates[(holder, asset)][used]))
        for asset in COUNTRIES:
            out[f"mean_p_{asset}"] = float(np.nanmean(self.prices[asset][used]))
        if self.loadings is not None:
            for asset in COUNTRIES:
                al = self.loadings.asset(asset)
                out[f"alpha_{asset}"] = al.alpha
                out[f"beta0_{asset}"] = al.beta0
                out[f"beta1_{asset}"] = al.beta1
        return out


def _format_cell(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if math.isnan(v):
        return ""
    return repr(v)


def aggregate_affine(
    params: ModelParams, loadings: PriceLoadings, holder: str, asset: str
) -> AffineHolding:
    """World-share holdings of (holder, asset) as an affine map of the asset's outputs."""
    share = params.demographics.country_share(holder)
    c0 = c1 = c2 = 0.0
    for age in AGES:
        mass = params.demographics.mass(holder, age)
        coef = holding_coefficients(params, loadings, holder, asset, age)
        c0 += mass * coef.const
        c1 += mass * coef.on_y_now
        c2 += mass * coef.on_y_prev
    return AffineHolding(c0 / share, c1 / share, c2 / share)


def _draw_outputs(rng: np.random.Generator, params: ModelParams, T: int) -> tuple[np.ndarray, np.ndarray]:
    z = rng.standard_normal((T, 2))
    scale = math.sqrt(params.sigma_sq)
    return params.theta_H + scale * z[:, 0], params.theta_F + scale * z[:, 1]


def path_from_outputs(
    params: ModelParams,
    y_H: np.ndarray,
    y_F: np.ndarray,
    seed: int = 0,
    loadings: PriceLoadings | None = None,
) -> EconomyPath:
    """Build the full trajectory implied by given output draws."""
    loadings = loadings or solve_price_loadings(params)
    T = len(y_H)
    outputs = {"H": np.asarray(y_H, dtype=float), "F": np.asarray(y_F, dtype=float)}
    nan = np.full(T, np.nan)

    prices = {}
    for asset in COUNTRIES:
        al = loadings.asset(asset)
        p = nan.copy()
        p[1:] = al.alpha + al.beta0 * outputs[asset][1:] + al.beta1 * outputs[asset][:-1]
        prices[asset] = p

    cohort = {}
    raw = {}
    for holder in COUNTRIES:
        for asset in COUNTRIES:
            total = np.zeros(T)
            for age in AGES:
                coef = holding_coefficients(params, loadings, holder, asset, age)
                series = nan.copy()
                series[1:] = coef.const + coef.on_y_now * outputs[asset][1:] + coef.on_y_prev * outputs[asset][:-1]
                cohort[(holder, age, asset)] = series
                total += params.demographics.mass(holder, age) * np.nan_to_num(series)
            total[0] = np.nan
            raw[(holder, asset)] = total

    shares = {c: params.demographics.country_share(c) for c in COUNTRIES}
    aggregates = {
        (holder, asset): raw[(holder, asset)] / shares[holder]
        for holder in COUNTRIES
        for asset in COUNTRIES
    }
    home_bias = aggregates[("H", "H")] - aggregates[("H", "F")]

    flows = {}
    for holder in COUNTRIES:
        for asset in COUNTRIES:
            f = nan.copy()
            series = aggregates[(holder, asset)]
            f[2:] = series[2:] - series[1:-1]
            flows[(holder, asset)] = f

    clearing = {}
    for asset in COUNTRIES:
        res = nan.copy()
        res[1:] = np.abs(raw[("H", asset)][1:] + raw[("F", asset)][1:] - 1.0)
        clearing[asset] = res

    return EconomyPath(
        rng_seed=seed,
        y=outputs,
        prices=prices,
        cohort=cohort,
        aggregates=aggregates,
        aggregates_raw=raw,
        home_bias=home_bias,
        flows=flows,
        clearing_residual=clearing,
        loadings=loadings,
    )


def simulate_path(params: ModelParams, T: int, seed: int) -> EconomyPath:
    """Simulate ``T`` periods of the economy; deterministic given ``seed``."""
    if T < 3:
        raise ParameterError(f"T must be at least 3 to cover the oldest experience window, got {T}")
    rng = np.random.default_rng(seed)
    y_H, y_F = _draw_outputs(rng, params, T)
    return path_from_outputs(params, y_H, y_F, seed=seed)


def apply_shock(
    params: ModelParams,
    scenario: ShockScenario,
    loadings: PriceLoadings | None = None,
) -> ShockFlows:
    """Flow response to a one-period shock after a stable baseline history."""
    loadings = loadings or solve_price_loadings(params)
    base = {
        c: (scenario.baseline if scenario.baseline is not None else params.theta(c))
        for c in COUNTRIES
    }
    shocked = dict(base)
    targets = COUNTRIES if scenario.shocked_country == "both" else (scenario.shocked_country,)
    for c in targets:
        shocked[c] = base[c] + scenario.shock_size

    domestic_inflow = {}
    foreign_inflow = {}
    for c in COUNTRIES:
        own = aggregate_affine(params, loadings, c, c)
        other = aggregate_affine(params, loadings, other_country(c), c)
        domestic_inflow[c] = own.at(shocked[c], base[c]) - own.at(base[c], base[c])
        foreign_inflow[c] = other.at(shocked[c], base[c]) - other.at(base[c], base[c])
    hb_affine_dom = aggregate_affine(params, loadings, "H", "H")
    hb_affine_for = aggregate_affine(params, loadings, "H", "F")
    delta_hb = (
        hb_affine_dom.at(shocked["H"], base["H"])
        - hb_affine_dom.at(base["H"], base["H"])
        - hb_affine_for.at(shocked["F"], base["F"])
        + hb_affine_for.at(base["F"], base["F"])
    )
    return ShockFlows(domestic_inflow, foreign_inflow, delta_hb)


def flow_sensitivity(
    params: ModelParams, country: str = "H", loadings: PriceLoadings | None = None
) -> float:
    """Exact derivative of mass-weighted domestic holdings w.r.t. current domestic output.

    Negative whenever the domestic prior is strictly more precise than the
    foreign one and demographics are symmetric: a domestic downturn pulls in
    domestic funds and pushes out foreign funds.
    """
    loadings = loadings or solve_price_loadings(params)
    total = 0.0
    for age in AGES:
        mass = params.demographics.mass(country, age)
        total += mass * holding_coefficients(params, loadings, country, country, age).on_y_now
    return total


def _kernel_sums(params: ModelParams, country: str):
    sw = side_weights(params)
    j = other_country(country)
    p0i = params.demographics.mass(country, 0)
    p1i = params.demographics.mass(country, 1)
    p0j = params.demographics.mass(j, 0)
    p1j = params.demographics.mass(j, 1)
    b_dom = p0i * sw.w0 / sw.s0 + p1i * sw.w1 * sw.omega / sw.s1
    b_for = p0j * sw.w0s / sw.s0s + p1j * sw.w1s * sw.omega / sw.s1s
    s_dom = p0i / sw.s0 + p1i / sw.s1
    s_for = p0j / sw.s0s + p1j / sw.s1s
    return sw, (p0i, p1i, p0j, p1j), b_dom, b_for, s_dom, s_for


def flow_sensitivity_kernel(params: ModelParams, country: str = "H") -> float:
    """Sign-determining kernel of the flow sensitivity.

    Equals ``flow_sensitivity`` times the positive factor
    ``gamma*(1+beta0)*sigma_bar``; its demographic derivatives are the four
    closed forms returned by :func:`demographic_derivatives`.
    """
    _, _, b_dom, b_for, s_dom, s_for = _kernel_sums(params, country)
    return b_dom * s_for - s_dom * b_for


def demographic_derivatives(params: ModelParams, country: str = "H") -> ComparativeStatics:
    """Closed-form demographic derivatives of the flow-sensitivity kernel.

    The four entries of ``d_by_phi`` differentiate the kernel with respect
    to the masses of (young foreign, old foreign, young domestic, old
    domestic) participants.  Because the kernel is the sensitivity times a
    positive factor, the sign statements carry over to the flow response:
    the first and last are negative whenever the domestic prior is at least
    as precise as the foreign one, while the middle two flip sign at
    precision thresholds inside ``(tau_star, tau_star + 1/sigma_sq)``.
    """
    if params.tau < params.tau_star:
        raise ParameterError("demographic derivatives require tau >= tau_star")
    sw, (p0i, p1i, p0j, p1j), b_dom, b_for, s_dom, s_for = _kernel_sums(params, country)
    om = sw.omega
    d_young_foreign = (
        p0i / (sw.s0 * sw.s0s) * (sw.w0 - sw.w0s)
        + p1i / (sw.s0s * sw.s1) * (sw.w1 * om - sw.w0s)
    )
    d_old_foreign = (
        p0i / (sw.s0 * sw.s1s) * (sw.w0 - sw.w1s * om)
        + p1i / (sw.s1 * sw.s1s) * (sw.w1 - sw.w1s) * om
    )
    d_young_domestic = (
        p0j / (sw.s0 * sw.s0s) * (sw.w0 - sw.w0s)
        + p1j / (sw.s0 * sw.s1s) * (sw.w0 - sw.w1s * om)
    )
    d_old_domestic = (
        p0j / (sw.s0s * sw.s1) * (sw.w1 * om - sw.w0s)
        + p1j / (sw.s1 * sw.s1s) * (sw.w1 - sw.w1s) * om
    )
    return ComparativeStatics(
        dX_dy=flow_sensitivity(params, country),
        kernel=b_dom * s_for - s_dom * b_for,
        d_by_phi=(d_young_foreign, d_old_foreign, d_young_domestic, d_old_domestic),
    )


def _bisect(f, lo: float, hi: float, xtol: float = 1e-12) -> float:
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0:
        raise EquilibriumError("no root in bracket: expression has the same sign at both ends")
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if f_lo * f_mid < 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def find_thresholds(params: ModelParams, country: str = "H", n_scan: int = 50) -> Thresholds:
    """Locate the precision thresholds where the ambiguous demographic effects flip.

    Bisects the second and third demographic derivative as functions of the
    domestic prior precision over ``(tau_star, tau_star + 1/sigma_sq)``
    after verifying they decrease monotonically across the bracket.
    """
    tau_star = params.tau_star
    lo, hi = tau_star, tau_star + 1.0 / params.sigma_sq

    def expr(index: int):
        def f(tau: float) -> float:
            return demographic_derivatives(params.with_precisions(tau, tau_star), country).d_by_phi[index]

        return f

    roots = []
    for index in (1, 2):
        f = expr(index)
        grid = np.linspace(lo, hi, n_scan)
        values = np.array([f(t) for t in grid])
        if np.any(np.diff(values) > 1e-12):
            raise EquilibriumError("demographic sensitivity is not decreasing across the bracket")
        roots.append(_bisect(f, lo, hi))
    return Thresholds(tau_bar_1=roots[0], tau_bar_2=roots[1], bracket=(lo, hi))


def monte_carlo_home_bias(
    params: ModelParams, T: int, n_paths: int, seed: int
) -> MonteCarloResult:
    """Monte Carlo estimate of the unconditional mean home bias.

    Each path owns an independent RNG stream derived from ``(seed, path
    index)``; the per-path time averages (after burn-in) are reduced to a
    mean and its standard error across paths.
    """
    if T < 3:
        raise ParameterError(f"T must be at least 3, got {T}")
    if n_paths < 2:
        raise ParameterError(f"n_paths must be at least 2, got {n_paths}")
    loadings = solve_price_loadings(params)
    own = aggregate_affine(params, loadings, "H", "H")
    forn = aggregate_affine(params, loadings, "H", "F")
    coefs = np.array([own.const, own.on_y_now, own.on_y_prev, forn.const, forn.on_y_now, forn.on_y_prev])

    y_H = np.empty((n_paths, T))
    y_F = np.empty((n_paths, T))
    for k in range(n_paths):
        rng = np.random.default_rng([seed, k])
        y_H[k], y_F[k] = _draw_outputs(rng, params, T)

    means = _kernels.hb_path_means(y_H, y_F, coefs, BURN_IN)
    return MonteCarloResult(
        mean_hb=float(means.mean()),
        std_error=float(means.std(ddof=1) / math.sqrt(n_paths)),
        n_paths=n_paths,
        T=T,
    )
