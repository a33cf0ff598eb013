"""Command-line entry point.

Subcommands:

* ``simulate``   - simulate one economy path, write per-period CSV + summary
* ``verify``     - run the model-property checks, report pass/fail per check
* ``thresholds`` - locate the demographic sign-flip precision thresholds
* ``make-panel`` - generate a synthetic country-year panel CSV
* ``regress``    - run the panel regressions on synthetic or ingested data

All randomness is seeded from the config (``--seed`` overrides); exit codes
are 0 on success, 2 for config errors, 3 for data errors and 4 when a
verification check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import ConfigError, RunConfig, example_config
from .demands import holding_coefficients
from .econometrics.ingest import ingest_csv
from .econometrics.panel import PanelDataset, RegressionResult, panel_ols
from .econometrics.synthetic import build_synthetic_panel, default_country_params
from .equilibrium import market_clearing_residual, muc_residuals, solve_price_loadings
from .params import DataError, Demographics, EblflowsError, ModelParams
from .simulation import (
    ShockScenario,
    apply_shock,
    demographic_derivatives,
    find_thresholds,
    flow_sensitivity_kernel,
    monte_carlo_home_bias,
    simulate_path,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_VERIFY = 4

SHOCK_GRID_TAU = (2.5, 3.0, 3.5, 4.0, 5.0)
SHOCK_GRID_TAU_STAR = (0.25, 0.5, 1.0, 1.5, 2.0)


@dataclass
class CheckResult:
    name: str
    status: str  # PASS / FAIL / OUT-OF-REGIME
    detail: str

    def line(self) -> str:
        return f"{self.status:13s} {self.name}: {self.detail}"


def _fmt(x: float) -> str:
    return format(float(x), ".6g")


# ---------------------------------------------------------------------------
# verification checks


def _draw_params(rng: np.random.Generator) -> ModelParams:
    tau_star = rng.uniform(0.1, 10.0)
    tau = rng.uniform(tau_star, 10.0)
    sigma_sq = rng.uniform(0.1, 4.0)
    gamma = rng.uniform(0.5, 5.0)
    R = rng.uniform(1.01, 1.2)
    m = rng.uniform(-5.0, 10.0)
    return ModelParams.from_primitives(
        theta=m, sigma_sq=sigma_sq, tau=tau, tau_star=tau_star, gamma=gamma, R=R, prior_mean=m
    )


def check_coefficient_matching(cfg: RunConfig, seed: int) -> list[CheckResult]:
    rng = np.random.default_rng([seed, 1])
    n_draws = int(cfg.verify["n_draws"])
    tol_muc = float(cfg.tolerances["coefficient_matching"])
    tol_clear = float(cfg.tolerances["clearing"])
    worst_muc = 0.0
    worst_clear = 0.0
    for _ in range(n_draws):
        params = _draw_params(rng)
        loadings = solve_price_loadings(params)
        for asset in ("H", "F"):
            worst_muc = max(worst_muc, *muc_residuals(params, loadings, asset))
        scale = np.sqrt(params.sigma_sq)
        y_t = {c: params.theta(c) + scale * rng.standard_normal() for c in ("H", "F")}
        y_tm1 = {c: params.theta(c) + scale * rng.standard_normal() for c in ("H", "F")}
        res = market_clearing_residual(params, loadings, y_t, y_tm1)
        worst_clear = max(worst_clear, res["H"], res["F"])
    return [
        CheckResult(
            "coefficient-matching",
            "PASS" if worst_muc < tol_muc else "FAIL",
            f"max residual {_fmt(worst_muc)} over {n_draws} draws (tol {_fmt(tol_muc)})",
        ),
        CheckResult(
            "market-clearing",
            "PASS" if worst_clear < tol_clear else "FAIL",
            f"max residual {_fmt(worst_clear)} over {n_draws} draws (tol {_fmt(tol_clear)})",
        ),
    ]


def check_symmetric_benchmark(cfg: RunConfig, seed: int) -> CheckResult:
    params = cfg.model_params()
    symmetric = ModelParams.from_primitives(
        theta=params.theta_H,
        sigma_sq=params.sigma_sq,
        tau=params.tau,
        tau_star=params.tau,
        gamma=params.gamma,
        R=params.R,
        prior_mean=params.common_prior_mean,
        demographics=Demographics(),
    )
    T = int(cfg.verify["path_T"])
    tol = float(cfg.tolerances["symmetric_exactness"])
    path = simulate_path(symmetric, T, seed)
    dev = max(
        float(np.nanmax(np.abs(path.aggregates[(h, a)] - 1.0)))
        for h in ("H", "F")
        for a in ("H", "F")
    )
    hb = float(np.nanmax(np.abs(path.home_bias)))
    ok = dev < tol and hb < tol
    return CheckResult(
        "symmetric-benchmark",
        "PASS" if ok else "FAIL",
        f"max |X-1| {_fmt(dev)}, max |HB| {_fmt(hb)} over {T} periods (tol {_fmt(tol)})",
    )


def check_home_bias_expectation(cfg: RunConfig, seed: int) -> CheckResult:
    params = cfg.model_params()
    mc = monte_carlo_home_bias(
        params, int(cfg.verify["mc_T"]), int(cfg.verify["mc_paths"]), seed
    )
    if params.tau == params.tau_star:
        ok = abs(mc.mean_hb) < 1e-9
        return CheckResult(
            "home-bias-expectation",
            "OUT-OF-REGIME" if ok else "FAIL",
            f"symmetric precisions: mean HB {_fmt(mc.mean_hb)} (expected exactly 0)",
        )
    ratio = mc.mean_hb / mc.std_error if mc.std_error > 0 else float("inf")
    ok = mc.mean_hb > 0 and ratio > 3.0
    return CheckResult(
        "home-bias-expectation",
        "PASS" if ok else "FAIL",
        f"mean HB {_fmt(mc.mean_hb)}, SE {_fmt(mc.std_error)}, mean/SE {_fmt(ratio)}",
    )


def check_shock_signs(cfg: RunConfig) -> CheckResult:
    base = cfg.model_params()
    failures = []
    for tau in SHOCK_GRID_TAU:
        for tau_star in SHOCK_GRID_TAU_STAR:
            params = base.with_precisions(tau, tau_star).with_demographics(Demographics())
            recession = apply_shock(params, ShockScenario("H", -1.0))
            boom = apply_shock(params, ShockScenario("H", 1.0))
            both = apply_shock(params, ShockScenario("both", -1.0))
            ok = (
                recession.domestic_inflow["H"] > 0
                and recession.foreign_inflow["H"] < 0
                and boom.domestic_inflow["H"] < 0
                and boom.foreign_inflow["H"] > 0
                and both.domestic_inflow["H"] > 0
                and both.domestic_inflow["F"] > 0
            )
            if not ok:
                failures.append((tau, tau_star))
    return CheckResult(
        "shock-flow-signs",
        "PASS" if not failures else "FAIL",
        "retrenchment/fickleness signs hold on the 5x5 precision grid"
        if not failures
        else f"sign violations at {failures}",
    )


def check_demographic_derivatives(cfg: RunConfig) -> list[CheckResult]:
    params = cfg.model_params()
    tol_rel = float(cfg.tolerances["fd_relative"])
    tol_expr = float(cfg.tolerances["threshold_expression"])
    cs = demographic_derivatives(params)
    step = 1e-5
    phis = [("F", 0), ("F", 1), ("H", 0), ("H", 1)]
    worst_rel = 0.0
    for idx, (country, age) in enumerate(phis):
        base_mass = params.demographics.mass(country, age)
        up = params.with_demographics(params.demographics.replace_mass(country, age, base_mass + step))
        dn = params.with_demographics(params.demographics.replace_mass(country, age, base_mass - step))
        fd = (flow_sensitivity_kernel(up) - flow_sensitivity_kernel(dn)) / (2 * step)
        denom = max(abs(fd), 1e-9)
        worst_rel = max(worst_rel, abs(cs.d_by_phi[idx] - fd) / denom)
    signs_ok = cs.d_by_phi[0] < 0 and cs.d_by_phi[3] < 0
    results = [
        CheckResult(
            "demographic-derivatives",
            "PASS" if worst_rel < tol_rel and signs_ok else "FAIL",
            f"max FD relative error {_fmt(worst_rel)} (tol {_fmt(tol_rel)}); "
            f"unambiguous signs {'ok' if signs_ok else 'violated'}",
        )
    ]
    th = find_thresholds(params)
    lo, hi = th.bracket
    at_roots = (
        abs(demographic_derivatives(params.with_precisions(th.tau_bar_1, params.tau_star)).d_by_phi[1]),
        abs(demographic_derivatives(params.with_precisions(th.tau_bar_2, params.tau_star)).d_by_phi[2]),
    )
    in_bracket = lo < th.tau_bar_1 < hi and lo < th.tau_bar_2 < hi
    ok = in_bracket and at_roots[0] < tol_expr and at_roots[1] < tol_expr
    results.append(
        CheckResult(
            "precision-thresholds",
            "PASS" if ok else "FAIL",
            f"tau_bar_1 {_fmt(th.tau_bar_1)}, tau_bar_2 {_fmt(th.tau_bar_2)} in "
            f"({_fmt(lo)}, {_fmt(hi)}); |expr| at roots {_fmt(at_roots[0])}, {_fmt(at_roots[1])}",
        )
    )
    return results


def run_verification(cfg: RunConfig, seed: int) -> list[CheckResult]:
    results = check_coefficient_matching(cfg, seed)
    results.append(check_symmetric_benchmark(cfg, seed))
    results.append(check_home_bias_expectation(cfg, seed))
    results.append(check_shock_signs(cfg))
    results.extend(check_demographic_derivatives(cfg))
    return results


# ---------------------------------------------------------------------------
# output helpers


def _write_hb_svg(path: Path, hb: np.ndarray) -> None:
    values = hb[~np.isnan(hb)]
    if values.size == 0:
        return
    width, height, pad = 800, 300, 40
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        hi = lo + 1.0
    xs = np.linspace(pad, width - pad, values.size)
    ys = height - pad - (values - lo) / (hi - lo) * (height - 2 * pad)
    points = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">\n'
        f'<rect width="{width}" height="{height}" fill="white"/>\n'
        f'<polyline points="{points}" fill="none" stroke="steelblue" stroke-width="1.5"/>\n'
        f'<text x="{pad}" y="{height - 8}" font-size="12">home bias per period: '
        f"min {lo:.4g}, max {hi:.4g}</text>\n"
        "</svg>\n"
    )
    path.write_text(svg, encoding="utf-8")


def _write_panel_csv(panel: PanelDataset, path: Path) -> None:
    columns = ["country", "year", "gdp_growth", "cif", "cod"] + panel.indicator_columns()
    with open(path, "w", newline="") as fh:
        fh.write(",".join(columns) + "\n")
        for _, row in panel.frame.iterrows():
            cells = []
            for col in columns:
                v = row[col]
                if isinstance(v, str):
                    cells.append(v)
                elif col in ("year", *panel.indicator_columns()):
                    cells.append(str(int(v)))
                else:
                    cells.append(repr(float(v)))
            fh.write(",".join(cells) + "\n")


def _regression_text(result: RegressionResult, interactions: list[str]) -> str:
    lines = [
        f"outcome: {result.outcome}   interactions: "
        + (", ".join(interactions) if interactions else "(none)")
    ]
    lines.append(f"{'term':42s} {'coef':>10} {'cluster_se':>11} {'t':>8}  sig")
    for term in result.focus_terms:
        lines.append(
            f"{term:42s} {result.coefficients[term]:10.4f} "
            f"{result.clustered_se[term]:11.4f} {result.t_stats[term]:8.2f}  {result.stars(term)}"
        )
    lines.append(
        f"R2={result.r_squared:.3f} N={result.n_obs} countries={result.n_clusters}"
    )
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# subcommands


def cmd_simulate(cfg: RunConfig, out_dir: Path, seed: int) -> int:
    params = cfg.model_params()
    T = int(cfg.simulation["T"])
    path = simulate_path(params, T, seed)
    out_dir.mkdir(parents=True, exist_ok=True)
    path.write_csv(out_dir / "path.csv")
    summary = path.summary()
    (out_dir / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    if cfg.simulation.get("svg"):
        _write_hb_svg(out_dir / "home_bias.svg", path.home_bias)
    print(f"wrote {out_dir / 'path.csv'} ({T} periods, seed {seed})")
    print(f"mean home bias (after burn-in): {_fmt(summary['mean_home_bias'])}")
    print(f"max clearing residual: {_fmt(summary['max_clearing_residual'])}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig, out_dir: Path | None, seed: int) -> int:
    results = run_verification(cfg, seed)
    lines = [r.line() for r in results]
    for line in lines:
        print(line)
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "verification.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return EXIT_VERIFY if any(r.status == "FAIL" for r in results) else EXIT_OK


def cmd_thresholds(cfg: RunConfig, out_dir: Path | None) -> int:
    params = cfg.model_params()
    th = find_thresholds(params)
    lo, hi = th.bracket
    lines = [
        f"tau_bar_1 = {th.tau_bar_1!r}",
        f"tau_bar_2 = {th.tau_bar_2!r}",
        f"search bracket (proof form): ({lo!r}, {hi!r})",
        f"statement-form interval for reference: ({params.tau_star!r}, {1.0 / params.sigma_sq!r})",
    ]
    for line in lines:
        print(line)
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "thresholds.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return EXIT_OK


def _panel_from_config(cfg: RunConfig, seed: int) -> PanelDataset:
    p = cfg.panel
    countries = default_country_params(
        n_countries=int(p["n_countries"]),
        theta=float(p["theta"]),
        sigma_sq=float(p["sigma_sq"]),
        tau=float(p["tau"]),
        tau_star=float(p["tau_star"]),
        gamma=float(p["gamma"]),
        R=float(p["R"]),
        phi_young_levels=tuple(p["phi_young_levels"]),
        phi_old_levels=tuple(p["phi_old_levels"]),
    )
    return build_synthetic_panel(
        countries,
        T=int(p["T"]),
        seed=seed,
        output_correlation=float(p["output_correlation"]),
        cycle_persistence=float(p["cycle_persistence"]),
        flow_noise_ratio=float(p["flow_noise_ratio"]),
    )


def cmd_make_panel(cfg: RunConfig, out_dir: Path, seed: int) -> int:
    panel = _panel_from_config(cfg, seed)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_panel_csv(panel, out_dir / "panel.csv")
    print(f"wrote {out_dir / 'panel.csv'} ({len(panel.frame)} rows, {panel.provenance})")
    return EXIT_OK


def cmd_regress(cfg: RunConfig, out_dir: Path, seed: int, data: str | None) -> int:
    if data is not None:
        panel = ingest_csv(data, "panel").dataset
    else:
        panel = _panel_from_config(cfg, seed)
    out_dir.mkdir(parents=True, exist_ok=True)
    blocks = []
    csv_rows = ["outcome,interactions,term,coef,clustered_se,t,p,sig,r_squared,n_obs,n_clusters"]
    available = set(panel.indicator_columns())
    for outcome in cfg.regression["outcomes"]:
        for interactions in cfg.regression["interaction_sets"]:
            interactions = [i for i in interactions if i in available]
            result = panel_ols(panel, outcome, interactions)
            blocks.append(_regression_text(result, interactions))
            for term in result.focus_terms:
                csv_rows.append(
                    ",".join(
                        [
                            outcome,
                            "+".join(interactions) if interactions else "none",
                            term,
                            repr(result.coefficients[term]),
                            repr(result.clustered_se[term]),
                            repr(result.t_stats[term]),
                            repr(result.p_values[term]),
                            result.stars(term) or "-",
                            repr(result.r_squared),
                            str(result.n_obs),
                            str(result.n_clusters),
                        ]
                    )
                )
    text = "\n\n".join(blocks)
    print(text)
    (out_dir / "regressions.txt").write_text(text + "\n", encoding="utf-8")
    (out_dir / "regressions.csv").write_text("\n".join(csv_rows) + "\n", encoding="utf-8")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eblflows",
        description="Two-country OLG asset pricing with experience-based learning",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, needs_data in (
        ("simulate", False),
        ("verify", False),
        ("thresholds", False),
        ("make-panel", False),
        ("regress", True),
    ):
        p = sub.add_parser(name)
        p.add_argument("--config", required=False, help="JSON config path (defaults used if omitted)")
        p.add_argument("--out", default=None, help="output directory (default: config output_dir)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        if needs_data:
            p.add_argument("--data", default=None, help="panel CSV to regress instead of synthetic data")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config is not None:
            cfg = RunConfig.from_file(args.config)
        else:
            cfg = RunConfig.from_dict(example_config())
        out_dir = Path(args.out) if args.out is not None else Path(cfg.output_dir)
        if args.command == "simulate":
            seed = args.seed if args.seed is not None else int(cfg.simulation["seed"])
            return cmd_simulate(cfg, out_dir, seed)
        if args.command == "verify":
            seed = args.seed if args.seed is not None else int(cfg.simulation["seed"])
            return cmd_verify(cfg, out_dir if args.out is not None else None, seed)
        if args.command == "thresholds":
            return cmd_thresholds(cfg, out_dir if args.out is not None else None)
        if args.command == "make-panel":
            seed = args.seed if args.seed is not None else int(cfg.panel["seed"])
            return cmd_make_panel(cfg, out_dir, seed)
        if args.command == "regress":
            seed = args.seed if args.seed is not None else int(cfg.panel["seed"])
            return cmd_regress(cfg, out_dir, seed, args.data)
        parser.error(f"unknown command {args.command}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except EblflowsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
