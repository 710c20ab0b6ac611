"""Command-line interface: scenario loading, solving, and CSV/JSON emission.

Subcommands cover single solutions (``solve``, ``metrics``, ``design-gmin``,
``pfo`` without a sweep), series outputs for every theory figure
(``sweep-bmax``, ``design-bmax``, ``pfo``, ``pfo-cdf``, ``scale``), and the
Monte Carlo self-check (``validate``).

Exit codes: 0 success, 1 solver non-convergence, 2 configuration error.
Outputs are deterministic: fixed column orders, floats at 9 significant
digits, LF line endings.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from .demand import DemandCurve, ExponentialDemand, LinearDemand
from .design_rules import (
    b_plat,
    choose_bmax_mmus,
    choose_gmin_baseline,
    choose_gmin_refined,
    entry_threshold_price,
    marginal_user_share,
    mu_user,
)
from .equilibrium import MarketParams, solve
from .errors import ConfigError, ConvergenceError, SpamEqError
from .mc_oracle import (
    McConfig,
    best_response_entry,
    simulate_claim_probability,
    simulate_pfo_capture,
)
from .metrics import CostParams, report, sweep_bmax
from .pfo import PfoParams, pfo_report, solve_pfo, spam_location_cdf
from .scaling import sweep_lambda
from .solvers import DEFAULT_SOLVER, SolverConfig

DEFAULT_SCENARIO: Dict[str, Any] = {
    "market": {
        "demand": {"type": "linear", "d0": 1200.0, "beta": 6.0},
        "s": 20.0,
        "r0": 6000.0,
        "gmin": 20.0,
        "bmax": 1000.0,
    },
    "costs": {"c1": 0.0, "c2": 1.0},
}


# ---------------------------------------------------------------------------
# scenario parsing


def _require_keys(obj: Dict[str, Any], allowed: Sequence[str], where: str) -> None:
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {', '.join(unknown)}")


def _number(obj: Dict[str, Any], key: str, where: str) -> float:
    if key not in obj:
        raise ConfigError(f"missing key '{key}' in {where}")
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{key}' in {where} must be a number")
    return float(value)


def _demand_from_config(cfg: Dict[str, Any]) -> DemandCurve:
    if not isinstance(cfg, dict):
        raise ConfigError("market.demand must be an object")
    kind = cfg.get("type")
    if kind == "linear":
        _require_keys(cfg, ("type", "d0", "beta"), "market.demand")
        return LinearDemand(_number(cfg, "d0", "market.demand"), _number(cfg, "beta", "market.demand"))
    if kind == "exponential":
        _require_keys(cfg, ("type", "d0", "lambda"), "market.demand")
        return ExponentialDemand(
            _number(cfg, "d0", "market.demand"), _number(cfg, "lambda", "market.demand")
        )
    raise ConfigError("market.demand.type must be 'linear' or 'exponential'")


class Scenario:
    """Validated scenario: market, costs, optional pfo and solver settings."""

    def __init__(
        self,
        market: MarketParams,
        costs: CostParams,
        pfo: Optional[PfoParams],
        solver: SolverConfig,
    ) -> None:
        self.market = market
        self.costs = costs
        self.pfo = pfo
        self.solver = solver


def load_scenario(path: Optional[str]) -> Scenario:
    if path is None:
        raw = DEFAULT_SCENARIO
    else:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                raw = json.load(handle)
        except OSError as exc:
            raise ConfigError(f"cannot read scenario file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"scenario is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("scenario must be a JSON object")
    _require_keys(raw, ("market", "costs", "pfo", "solver"), "scenario")
    market_cfg = raw.get("market")
    if not isinstance(market_cfg, dict):
        raise ConfigError("scenario.market is required and must be an object")
    _require_keys(market_cfg, ("demand", "s", "r0", "gmin", "bmax"), "market")
    try:
        market = MarketParams(
            demand=_demand_from_config(market_cfg.get("demand", {})),
            s=_number(market_cfg, "s", "market"),
            r0=_number(market_cfg, "r0", "market"),
            gmin=_number(market_cfg, "gmin", "market"),
            bmax=_number(market_cfg, "bmax", "market"),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid market parameters: {exc}") from exc

    costs_cfg = raw.get("costs", {"c1": 0.0, "c2": 1.0})
    if not isinstance(costs_cfg, dict):
        raise ConfigError("scenario.costs must be an object")
    _require_keys(costs_cfg, ("c1", "c2"), "costs")
    try:
        costs = CostParams(
            c1=float(costs_cfg.get("c1", 0.0)), c2=float(costs_cfg.get("c2", 1.0))
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid costs: {exc}") from exc

    pfo_params: Optional[PfoParams] = None
    if "pfo" in raw:
        pfo_cfg = raw["pfo"]
        if not isinstance(pfo_cfg, dict):
            raise ConfigError("scenario.pfo must be an object")
        _require_keys(pfo_cfg, ("n", "v"), "pfo")
        try:
            pfo_params = PfoParams(n=int(_number(pfo_cfg, "n", "pfo")), v=_number(pfo_cfg, "v", "pfo"))
        except ValueError as exc:
            raise ConfigError(f"invalid pfo parameters: {exc}") from exc

    solver = DEFAULT_SOLVER
    if "solver" in raw:
        solver_cfg = raw["solver"]
        if not isinstance(solver_cfg, dict):
            raise ConfigError("scenario.solver must be an object")
        fields = (
            "s_tol",
            "scan_points",
            "rel_match_tol",
            "fp_tol",
            "fp_residual_tol",
            "damping",
            "max_outer",
            "fd_step_frac",
            "design_tol",
        )
        _require_keys(solver_cfg, fields, "solver")
        kwargs: Dict[str, Any] = {}
        for key, value in solver_cfg.items():
            kwargs[key] = int(value) if key in ("scan_points", "max_outer") else float(value)
        try:
            solver = replace(DEFAULT_SOLVER, **kwargs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid solver settings: {exc}") from exc
    return Scenario(market=market, costs=costs, pfo=pfo_params, solver=solver)


# ---------------------------------------------------------------------------
# output formatting


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def _round9(value: float) -> float:
    if not math.isfinite(value):
        return value
    return float(f"{value:.9g}")


def _emit_text(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _emit_csv(header: Sequence[str], rows: Iterable[Sequence[Any]], out: Optional[str]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(cell) for cell in row))
    _emit_text("\n".join(lines) + "\n", out)


def _emit_json(obj: Dict[str, Any], out: Optional[str]) -> None:
    def clean(value: Any) -> Any:
        if isinstance(value, float):
            return _round9(value)
        if isinstance(value, dict):
            return {k: clean(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [clean(v) for v in value]
        return value

    _emit_text(json.dumps(clean(obj), indent=2) + "\n", out)


def _grid(start: float, stop: float, step: float) -> List[float]:
    if step <= 0.0:
        raise ConfigError("--step must be positive")
    if stop < start:
        raise ConfigError("--to must not be below --from")
    count = int(math.floor((stop - start) / step + 0.5)) + 1
    return [start + k * step for k in range(count)]


def _parse_floats(text: str, flag: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part != ""]
    except ValueError as exc:
        raise ConfigError(f"{flag} expects comma-separated numbers: {exc}") from exc


def _parse_ints(text: str, flag: str) -> List[int]:
    values = _parse_floats(text, flag)
    result = []
    for value in values:
        if value != int(value):
            raise ConfigError(f"{flag} expects integers")
        result.append(int(value))
    return result


# ---------------------------------------------------------------------------
# subcommands


def _cmd_solve(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    eq = solve(scenario.market, scenario.solver)
    _emit_json(
        {
            "regime": eq.regime.value,
            "spam_count": eq.spam_count,
            "clearing_price": eq.clearing_price,
            "user_gas": eq.user_gas,
            "spam_gas": eq.spam_gas,
            "total_gas": eq.total_gas,
            "opportunity": eq.opportunity,
        },
        args.out,
    )
    return 0


def _cmd_metrics(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    rep = report(scenario.market, scenario.costs, scenario.solver)
    _emit_json(
        {
            "w_user": rep.w_user,
            "revenue": rep.revenue,
            "externality": rep.externality,
            "w_user0": rep.w_user0,
            "revenue0": rep.revenue0,
            "externality0": rep.externality0,
            "delta_w": rep.delta_w,
            "delta_r": rep.delta_r,
            "delta_e": rep.delta_e,
            "w_plus_r": rep.w_plus_r,
            "w_plus_r0": rep.w_plus_r0,
        },
        args.out,
    )
    return 0


_SWEEP_HEADER = (
    "bmax",
    "regime",
    "spam_count",
    "clearing_price",
    "user_gas",
    "spam_gas",
    "total_gas",
    "rho_spam",
    "w_user",
    "revenue",
    "externality",
    "w_user0",
    "revenue0",
    "externality0",
    "delta_w",
    "delta_r",
    "delta_e",
    "w_plus_r",
    "w_plus_r0",
)


def _cmd_sweep_bmax(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    grid = _grid(args.start, args.stop, args.step)
    points = sweep_bmax(scenario.market, scenario.costs, grid, scenario.solver)
    rows = []
    for point in points:
        eq, met = point.equilibrium, point.metrics
        rho = eq.spam_gas / eq.total_gas if eq.total_gas > 0.0 else 0.0
        rows.append(
            (
                point.bmax,
                eq.regime.value,
                eq.spam_count,
                eq.clearing_price,
                eq.user_gas,
                eq.spam_gas,
                eq.total_gas,
                rho,
                met.w_user,
                met.revenue,
                met.externality,
                met.w_user0,
                met.revenue0,
                met.externality0,
                met.delta_w,
                met.delta_r,
                met.delta_e,
                met.w_plus_r,
                met.w_plus_r0,
            )
        )
    _emit_csv(_SWEEP_HEADER, rows, args.out)
    return 0


def _cmd_design_bmax(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    market = scenario.market
    plateau = b_plat(market)
    chosen = choose_bmax_mmus(market, args.eta, scenario.solver)
    start = args.start if args.start is not None else 0.25 * plateau
    stop = args.stop if args.stop is not None else 1.1 * plateau
    step = args.step if args.step is not None else (stop - start) / 120.0
    rows = []
    for bmax in _grid(start, stop, step):
        share = marginal_user_share(market.with_bmax(bmax), scenario.solver)
        rows.append((bmax, share, args.eta, chosen, plateau))
    _emit_csv(("bmax", "m_user", "eta", "bmax_star", "b_plat"), rows, args.out)
    return 0


def _cmd_design_gmin(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    market = scenario.market
    baseline = choose_gmin_baseline(market, market.bmax, scenario.solver)
    refined = choose_gmin_refined(market, market.bmax, args.eta, scenario.solver)
    share = mu_user(market)
    _emit_json(
        {
            "bmax": market.bmax,
            "eta": args.eta,
            "gmin_baseline": baseline,
            "gmin_refined": refined,
            "entry_threshold": entry_threshold_price(market, scenario.solver),
            "mu_user_at_floor": share,
        },
        args.out,
    )
    return 0


_PFO_HEADER = (
    "bmax",
    "n",
    "v",
    "bar_g",
    "total_spam",
    "spam_gas",
    "user_gas",
    "total_gas",
    "rho_spam",
    "converged",
    "outer_iterations",
    "w_user",
    "revenue",
    "externality",
    "w_user0",
    "revenue0",
    "externality0",
    "w_plus_r",
    "w_plus_r0",
)


def _pfo_combos(args: argparse.Namespace, scenario: Scenario) -> List[PfoParams]:
    default = scenario.pfo or PfoParams(n=500, v=1.0)
    ns = _parse_ints(args.n, "--n") if args.n else [default.n]
    vs = _parse_floats(args.v, "--v") if args.v else [default.v]
    try:
        return [PfoParams(n=n, v=v) for n in ns for v in vs]
    except ValueError as exc:
        raise ConfigError(f"invalid pfo parameters: {exc}") from exc


def _cmd_pfo(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    combos = _pfo_combos(args, scenario)
    sweep = args.start is not None or args.stop is not None or args.step is not None
    all_converged = True
    if sweep:
        if args.start is None or args.stop is None or args.step is None:
            raise ConfigError("--from/--to/--step must be given together")
        grid = _grid(args.start, args.stop, args.step)
        rows = []
        for combo in combos:
            warm: Optional[float] = None
            for bmax in grid:
                market = scenario.market.with_bmax(bmax)
                eq, rep = pfo_report(
                    market, combo, scenario.costs, scenario.solver, warm_start=warm
                )
                warm = eq.bar_g
                all_converged = all_converged and eq.converged
                rho = eq.spam_gas / eq.total_gas if eq.total_gas > 0.0 else 0.0
                rows.append(
                    (
                        bmax,
                        combo.n,
                        combo.v,
                        eq.bar_g,
                        eq.total_spam,
                        eq.spam_gas,
                        eq.total_user_gas,
                        eq.total_gas,
                        rho,
                        eq.converged,
                        eq.outer_iterations,
                        rep.w_user,
                        rep.revenue,
                        rep.externality,
                        rep.w_user0,
                        rep.revenue0,
                        rep.externality0,
                        rep.w_plus_r,
                        rep.w_plus_r0,
                    )
                )
        _emit_csv(_PFO_HEADER, rows, args.out)
    else:
        combo = combos[0]
        if len(combos) > 1:
            raise ConfigError("single-point pfo accepts one n and one v; add --from/--to/--step")
        eq, rep = pfo_report(scenario.market, combo, scenario.costs, scenario.solver)
        all_converged = eq.converged
        _emit_json(
            {
                "n": combo.n,
                "v": combo.v,
                "bar_g": eq.bar_g,
                "total_spam": eq.total_spam,
                "spam_gas": eq.spam_gas,
                "user_gas": eq.total_user_gas,
                "total_gas": eq.total_gas,
                "converged": eq.converged,
                "outer_iterations": eq.outer_iterations,
                "fixed_point_residual": eq.residual,
                "alternate_bar_g": list(eq.alternate_bar_g),
                "w_user": rep.w_user,
                "revenue": rep.revenue,
                "externality": rep.externality,
                "w_user0": rep.w_user0,
                "revenue0": rep.revenue0,
                "externality0": rep.externality0,
            },
            args.out,
        )
    if not all_converged:
        print("warning: at least one sub-block solve did not converge", file=sys.stderr)
        return 1
    return 0


def _cmd_pfo_cdf(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    combos = _pfo_combos(args, scenario)
    rows = []
    all_converged = True
    for combo in combos:
        eq = solve_pfo(scenario.market, combo, scenario.solver)
        all_converged = all_converged and eq.converged
        cdf = spam_location_cdf(eq, scenario.market)
        for position, share in cdf.points:
            rows.append((combo.n, combo.v, position, share))
    _emit_csv(("n", "v", "position", "cum_spam_share"), rows, args.out)
    if not all_converged:
        print("warning: at least one sub-block solve did not converge", file=sys.stderr)
        return 1
    return 0


def _cmd_scale(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    rules = [rule.strip() for rule in args.rule.split(",") if rule.strip()]
    if args.lambdas:
        lambdas = _parse_floats(args.lambdas, "--lambdas")
    else:
        lambdas = [float(x) for x in np.geomspace(1.0, args.lambda_max, 25)]
    scale_r0 = args.scaled_d0 == "scaled"
    rows = []
    for rule in rules:
        if rule == "pfo":
            combos = _pfo_combos(args, scenario)
            for combo in combos:
                points = sweep_lambda(
                    scenario.market,
                    "pfo",
                    lambdas,
                    pfo=combo,
                    scale_r0=scale_r0,
                    config=scenario.solver,
                )
                for pt in points:
                    rows.append(
                        (pt.lam, pt.rule, "", combo.n, combo.v, pt.bmax_used,
                         pt.spam_count, pt.spam_gas, pt.user_gas, pt.rho_spam)
                    )
        else:
            points = sweep_lambda(
                scenario.market,
                rule,
                lambdas,
                eta=args.eta,
                scale_r0=scale_r0,
                config=scenario.solver,
            )
            eta_cell = args.eta if rule == "mmus" else ""
            for pt in points:
                rows.append(
                    (pt.lam, pt.rule, eta_cell, "", "", pt.bmax_used,
                     pt.spam_count, pt.spam_gas, pt.user_gas, pt.rho_spam)
                )
    _emit_csv(
        ("lam", "rule", "eta", "n", "v", "bmax_used",
         "spam_count", "spam_gas", "user_gas", "rho_spam"),
        rows,
        args.out,
    )
    return 0


# ---------------------------------------------------------------------------
# validate


def _analytic_capture_share(spam: Sequence[int], gas: Sequence[float]) -> List[float]:
    """Expected capture frequency per sub-block from the spillover recursion."""
    total = sum(gas)
    shares = []
    for i, s_i in enumerate(spam, start=1):
        if s_i <= 0:
            shares.append(0.0)
            continue
        h = 0
        for j in range(i - 1, 0, -1):
            if spam[j - 1] > 0:
                h = j
                break
        value = gas[i - 1] * s_i / (s_i + 1.0)
        value += sum(gas[j - 1] for j in range(h + 1, i))
        if h >= 1:
            value += gas[h - 1] / (spam[h - 1] + 1.0)
        shares.append(value / total)
    return shares


def _three_sigma(name: str, observed, expected, cfg: McConfig, rerun) -> tuple[bool, str]:
    """3-sigma acceptance with one doubled-trials rerun before failing."""
    est = observed
    if abs(est.mean - expected) <= 3.0 * est.standard_error or est.standard_error == 0.0 and est.mean == expected:
        return True, f"{name}: {est.mean:.6f} vs {expected:.6f} (se {est.standard_error:.2e})"
    bigger = McConfig(trials=cfg.trials * 2, seed=cfg.seed)
    est = rerun(bigger)
    ok = abs(est.mean - expected) <= 3.0 * est.standard_error
    return ok, f"{name}: {est.mean:.6f} vs {expected:.6f} after rerun (se {est.standard_error:.2e})"


def run_validation(market: MarketParams, cfg: McConfig) -> List[tuple[str, bool, str]]:
    """MC oracle suite; every check must land within three standard errors."""
    results: List[tuple[str, bool, str]] = []

    for spam_count in (3, 12):
        expected = spam_count / (spam_count + 1.0)
        ok, detail = _three_sigma(
            f"claim probability S={spam_count}",
            simulate_claim_probability(spam_count, cfg),
            expected,
            cfg,
            lambda c, s=spam_count: simulate_claim_probability(s, c),
        )
        results.append((f"claim_probability_{spam_count}", ok, detail))
    zero = simulate_claim_probability(0, cfg)
    results.append(
        ("claim_probability_0", zero.mean == 0.0, f"claim probability S=0: {zero.mean}")
    )

    for factor in (0.4, 1.0, 1.5):
        bmax = market.bmax * factor
        try:
            count = best_response_entry(market.with_bmax(bmax))
            eq = solve(market.with_bmax(bmax))
            ok = count in (math.floor(eq.spam_count), math.ceil(eq.spam_count))
            detail = f"best response at bmax={bmax:g}: {count} brackets {eq.spam_count:.4f}"
        except (AssertionError, RuntimeError) as exc:
            ok, detail = False, f"best response at bmax={bmax:g}: {exc}"
        results.append((f"best_response_{factor}", ok, detail))

    capture_cases = [
        ("pfo_capture_n1", [3], [1000.0]),
        ("pfo_capture_n2", [1, 1], [500.0, 500.0]),
        ("pfo_capture_n3", [1, 0, 2], [300.0, 400.0, 300.0]),
    ]
    for name, spam, gas in capture_cases:
        estimates = simulate_pfo_capture(spam, gas, cfg)
        expected_shares = _analytic_capture_share(spam, gas)
        ok_all = True
        details = []
        for i, (est, expected) in enumerate(zip(estimates, expected_shares), start=1):
            ok, detail = _three_sigma(
                f"{name} block {i}",
                est,
                expected,
                cfg,
                lambda c, s=spam, g=gas, idx=i - 1: simulate_pfo_capture(s, g, c)[idx],
            )
            ok_all = ok_all and ok
            details.append(detail)
        results.append((name, ok_all, "; ".join(details)))
    return results


def _cmd_validate(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    cfg = McConfig(trials=args.trials, seed=args.seed)
    results = run_validation(scenario.market, cfg)
    lines = []
    all_ok = True
    for name, ok, detail in results:
        all_ok = all_ok and ok
        lines.append(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    text = "\n".join(lines) + "\n"
    if args.out:
        _emit_text(text, args.out)
    sys.stdout.write(text)
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spameq",
        description="Spam equilibrium engine for blockspace design",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="scenario JSON (defaults to the built-in reference scenario)")
        p.add_argument("--out", help="output file (defaults to stdout)")

    p = sub.add_parser("solve", help="solve one equilibrium, emit JSON")
    common(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("metrics", help="welfare/revenue/externality report, emit JSON")
    common(p)
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("sweep-bmax", help="block-size sweep, emit CSV")
    common(p)
    p.add_argument("--from", dest="start", type=float, default=200.0)
    p.add_argument("--to", dest="stop", type=float, default=1600.0)
    p.add_argument("--step", type=float, default=10.0)
    p.set_defaults(func=_cmd_sweep_bmax)

    p = sub.add_parser("design-bmax", help="marginal user share curve and MMUS block size, emit CSV")
    common(p)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--from", dest="start", type=float, default=None)
    p.add_argument("--to", dest="stop", type=float, default=None)
    p.add_argument("--step", type=float, default=None)
    p.set_defaults(func=_cmd_design_bmax)

    p = sub.add_parser("design-gmin", help="floor rules at the scenario block size, emit JSON")
    common(p)
    p.add_argument("--eta", type=float, required=True)
    p.set_defaults(func=_cmd_design_gmin)

    p = sub.add_parser("pfo", help="sub-block equilibrium (single point or bmax sweep)")
    common(p)
    p.add_argument("--n", help="sub-block count(s), comma separated")
    p.add_argument("--v", help="priority fraction(s), comma separated")
    p.add_argument("--from", dest="start", type=float, default=None)
    p.add_argument("--to", dest="stop", type=float, default=None)
    p.add_argument("--step", type=float, default=None)
    p.set_defaults(func=_cmd_pfo)

    p = sub.add_parser("pfo-cdf", help="spam location distribution, emit CSV")
    common(p)
    p.add_argument("--n", help="sub-block count(s), comma separated")
    p.add_argument("--v", help="priority fraction(s), comma separated")
    p.set_defaults(func=_cmd_pfo_cdf)

    p = sub.add_parser("scale", help="demand-scaling sweep, emit CSV")
    common(p)
    p.add_argument("--rule", default="plateau,mmus", help="plateau, mmus, pfo, or a comma list")
    p.add_argument("--eta", type=float, default=0.6)
    p.add_argument("--n", help="sub-block count(s) for the pfo rule")
    p.add_argument("--v", help="priority fraction(s) for the pfo rule")
    p.add_argument("--lambda-max", dest="lambda_max", type=float, default=50.0)
    p.add_argument("--lambdas", help="explicit comma-separated scaling factors")
    p.add_argument(
        "--scaled-d0",
        dest="scaled_d0",
        choices=("scaled", "unscaled"),
        default="scaled",
        help="whether the opportunity scales with demand (scaled keeps the per-user density constant)",
    )
    p.set_defaults(func=_cmd_scale)

    p = sub.add_parser("validate", help="run the Monte Carlo oracle suite")
    common(p)
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=_cmd_validate)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 1
    except SpamEqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
