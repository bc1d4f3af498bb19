"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .credit_metrics import DDQuery, dd_series, distance_to_default
from .hjb_verification import verify_policy
from .optimal_policy import (
    PolicyPath,
    UtilitySpec,
    capital_path,
    el_cap_delta,
    policy_path,
)
from .simulation import LimitedLiabilityPayoff, SimConfig, simulate_wealth
from .utility_approx import GammaSearchError, LiabilityBounds, best_gamma

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


def _fmt(full: bool):
    spec = ".17g" if full else ".6g"

    def f(x) -> str:
        if isinstance(x, (bool, np.bool_)):
            return "true" if x else "false"
        if isinstance(x, (int, np.integer)):
            return str(int(x))
        if isinstance(x, str):
            return x
        return format(float(x), spec)

    return f


def _write_csv(path: Path, header: list[str], rows, full: bool) -> None:
    f = _fmt(full)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(f(v) for v in row) + "\n")


def _emit(args, payload: dict, text: str) -> None:
    print(json.dumps(payload, sort_keys=True) if args.json else text)


def _load(args) -> cfgmod.ScenarioConfig:
    cfg = cfgmod.load_config(args.config)
    if args.seed is not None:
        cfg = replace(cfg, sim=replace(cfg.sim, seed=args.seed))
    if args.output_dir is not None:
        cfg = replace(cfg, output_dir=args.output_dir)
    return cfg


def _gamma(cfg, args) -> float:
    if getattr(args, "gamma", None) is not None:
        return args.gamma
    return best_gamma(cfg.liability).gamma_star


def cmd_approx_gamma(args) -> int:
    if args.f is not None or args.b is not None:
        if args.f is None or args.b is None:
            raise InputError("--f and --b must be given together")
        lb = LiabilityBounds(args.f, args.b)
    else:
        lb = _load(args).liability
    res = best_gamma(lb, tol=args.tol)
    payload = {
        "F": lb.F,
        "B": lb.B,
        "gamma_star": res.gamma_star,
        "err_at_min": res.err_at_min,
        "iterations": res.iterations,
        "bracket": list(res.bracket),
    }
    _emit(args, payload, f"gamma_star = {res.gamma_star:.6f}\nerr_at_min = {res.err_at_min:.6e}")
    return EXIT_OK


def _utility(cfg, args, kind: str) -> UtilitySpec:
    return UtilitySpec.linear() if kind == "linear" else UtilitySpec.power(_gamma(cfg, args))


def cmd_policy(args) -> int:
    cfg = _load(args)
    u = _utility(cfg, args, args.utility)
    path = policy_path(u, cfg.vasicek, cfg.market, cfg.credit, args.n, long_only=args.long_only)
    cap = capital_path(path, cfg.credit)
    out = Path(cfg.output_dir) / f"policy_{args.utility}.csv"
    _write_csv(
        out,
        ["t", "pi", "clipped", "capital"],
        zip(path.times, path.weights, path.clipped, cap),
        args.full_precision,
    )
    payload = {
        "file": str(out),
        "utility": args.utility,
        "gamma": u.exponent,
        "pi_start": float(path.weights[0]),
        "pi_end": float(path.weights[-1]),
        "plateau_time": path.plateau_time(),
    }
    _emit(args, payload, f"wrote {out}")
    return EXIT_OK


def cmd_dd(args) -> int:
    dd = distance_to_default(DDQuery(args.va, args.d, args.mu, args.sigma, args.t))
    _emit(args, {"dd": dd}, f"DD = {dd:.6f}")
    return EXIT_OK


def cmd_verify(args) -> int:
    if not args.step > 0:
        raise InputError(f"--step must be > 0, got {args.step}")
    cfg = _load(args)
    u = UtilitySpec.power(_gamma(cfg, args))
    rep = verify_policy(
        u,
        cfg.vasicek,
        cfg.market,
        el_cap_delta(cfg.credit),
        n_times=args.n,
        grid_step=args.step,
        long_only=args.long_only,
        strict=False,
    )
    status = "PASS" if rep.passed else "FAIL"
    payload = {
        "passed": rep.passed,
        "max_deviation": rep.max_deviation,
        "worst_time": rep.worst_time,
        "grid_step": args.step,
        "gamma": u.gamma,
    }
    text = (
        f"{status}: max deviation {rep.max_deviation:.6g} at t={rep.worst_time:.6g} "
        f"(grid step {args.step:g})"
    )
    _emit(args, payload, text)
    return EXIT_OK if rep.passed else EXIT_FAIL


def _parse_policy(spec: str, cfg, args) -> tuple[str, PolicyPath]:
    delta = el_cap_delta(cfg.credit)
    T = cfg.market.T
    if spec == "ll":
        u = UtilitySpec.power(_gamma(cfg, args))
        return "ll", policy_path(u, cfg.vasicek, cfg.market, cfg.credit, 1001)
    if spec == "noll":
        return "noll", PolicyPath.constant(delta, T)
    if spec.startswith("const:"):
        try:
            w = float(spec.split(":", 1)[1])
        except ValueError:
            raise InputError(f"bad constant weight in policy spec {spec!r}") from None
        if not np.isfinite(w) or abs(w) > delta:
            raise InputError(f"constant weight {w} violates the EL cap |pi| <= {delta:.6g}")
        return f"const_{w:g}", PolicyPath.constant(w, T)
    raise InputError(f"policy must be ll, noll or const:<w>, got {spec!r}")


def cmd_simulate(args) -> int:
    cfg = _load(args)
    sim = cfg.sim
    if args.n_paths is not None or args.n_steps is not None:
        try:
            sim = SimConfig(
                n_paths=args.n_paths or sim.n_paths,
                n_steps=args.n_steps or sim.n_steps,
                seed=sim.seed,
                antithetic=sim.antithetic,
            )
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    label, path = _parse_policy(args.policy, cfg, args)
    F = cfg.liability.F
    if args.utility == "payoff":
        payoff = LimitedLiabilityPayoff(F)
    else:
        payoff = _utility(cfg, args, args.utility)
    res = simulate_wealth(cfg.vasicek, cfg.market, path, payoff, sim, F=F, n_workers=args.workers)
    out = Path(cfg.output_dir) / f"simulate_{label}.csv"
    header = [
        "policy", "utility", "mean_utility", "std_error", "mean_terminal_wealth",
        "fraction_below_F", "n_paths", "n_steps", "seed",
    ]
    row = [
        label, args.utility, res.mean_utility, res.std_error, res.mean_terminal_wealth,
        res.fraction_below_F, sim.n_paths, sim.n_steps, sim.seed,
    ]
    _write_csv(out, header, [row], args.full_precision)
    if args.paths_csv:
        _write_csv(
            Path(cfg.output_dir) / f"terminal_wealth_{label}.csv",
            ["path", "x_T"],
            zip(range(sim.n_paths), res.terminal_wealth),
            args.full_precision,
        )
    payload = dict(zip(header, row))
    payload["file"] = str(out)
    text = (
        f"{label}: mean utility {res.mean_utility:.6f} +/- {res.std_error:.6f}, "
        f"fraction below F {res.fraction_below_F:.6f}\nwrote {out}"
    )
    _emit(args, payload, text)
    return EXIT_OK


def cmd_figures(args) -> int:
    cfg = _load(args)
    debt = cfg.require_debt_face()
    v, m, c = cfg.vasicek, cfg.market, cfg.credit
    no_ll = policy_path(UtilitySpec.linear(), v, m, c, args.n)
    ll = policy_path(UtilitySpec.power(_gamma(cfg, args)), v, m, c, args.n)
    out = Path(cfg.output_dir)
    _write_csv(
        out / "figure1.csv",
        ["t", "pi_no_LL", "pi_LL", "clipped_LL", "capital_LL"],
        zip(ll.times, no_ll.weights, ll.weights, ll.clipped, capital_path(ll, c)),
        args.full_precision,
    )
    kw = dict(horizon_mode=args.horizon_mode, fixed_horizon=args.horizon)
    dd_no = dd_series(no_ll, v, m, debt, **kw)
    dd_ll = dd_series(ll, v, m, debt, **kw)
    common, i_no, i_ll = np.intersect1d(dd_no.times, dd_ll.times, return_indices=True)
    _write_csv(
        out / "figure2.csv",
        ["t", "sigma_p_no_LL", "sigma_p_LL", "dd_no_LL", "dd_LL"],
        zip(
            common,
            dd_no.sigma_p[i_no],
            dd_ll.sigma_p[i_ll],
            dd_no.dd_values[i_no],
            dd_ll.dd_values[i_ll],
        ),
        args.full_precision,
    )
    payload = {
        "figure1": str(out / "figure1.csv"),
        "figure2": str(out / "figure2.csv"),
        "plateau_time": ll.plateau_time(),
    }
    _emit(args, payload, f"wrote {payload['figure1']}\nwrote {payload['figure2']}")
    return EXIT_OK


def _global_flags(parser: argparse.ArgumentParser, default) -> None:
    parser.add_argument("--config", default=default, help="scenario JSON (default: bundled example)")
    parser.add_argument("--json", action="store_true", default=default, help="machine-readable output")
    parser.add_argument("--output-dir", default=default, help="directory for CSV output")
    parser.add_argument("--seed", type=int, default=default, help="override the simulation seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="llbank", description="Bank portfolio choice with and without limited liability"
    )
    _global_flags(parser, None)
    parser.set_defaults(json=False)
    # repeated on each subcommand so the flags work on either side of it
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, argparse.SUPPRESS)
    precision = argparse.ArgumentParser(add_help=False)
    precision.add_argument("--full-precision", action="store_true", help="17 significant digits")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("approx-gamma", parents=[common], help="best power approximation of max(F, x)")
    p.add_argument("--f", type=float, help="bankruptcy level F")
    p.add_argument("--b", type=float, help="wealth cap B")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_approx_gamma)

    p = sub.add_parser("policy", parents=[common, precision], help="optimal weight path CSV")
    p.add_argument("--utility", choices=["linear", "power"], default="power")
    p.add_argument("--n", type=int, default=201, help="grid points over [0, T]")
    p.add_argument("--gamma", type=float, help="override gamma*")
    p.add_argument("--long-only", action="store_true")
    p.set_defaults(func=cmd_policy)

    p = sub.add_parser("dd", parents=[common], help="distance to default")
    for flag in ("--va", "--d", "--mu", "--sigma", "--t"):
        p.add_argument(flag, type=float, required=True)
    p.set_defaults(func=cmd_dd)

    p = sub.add_parser("verify", parents=[common], help="HJB argmax check of the closed form")
    p.add_argument("--step", type=float, default=5e-4)
    p.add_argument("--n", type=int, default=51)
    p.add_argument("--gamma", type=float)
    p.add_argument("--long-only", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", parents=[common, precision], help="Monte Carlo of a policy")
    p.add_argument("--policy", default="ll", help="ll, noll or const:<w>")
    p.add_argument("--utility", choices=["power", "linear", "payoff"], default="power")
    p.add_argument("--gamma", type=float)
    p.add_argument("--n-paths", type=int)
    p.add_argument("--n-steps", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--paths-csv", action="store_true", help="also write per-path terminal wealth")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("figures", parents=[common, precision], help="figure1.csv and figure2.csv")
    p.add_argument("--n", type=int, default=201)
    p.add_argument("--gamma", type=float)
    p.add_argument("--horizon-mode", choices=["fixed", "remaining"], default="fixed")
    p.add_argument("--horizon", type=float, default=1.0)
    p.set_defaults(func=cmd_figures)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, GammaSearchError) as exc:  # config, flags and parameter checks
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
