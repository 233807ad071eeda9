"""Command line entry point: ``majdabiello <subcommand> [--config PATH] [--out DIR] ...``."""

from __future__ import annotations

import argparse
import logging
import sys
import time
import warnings
from dataclasses import asdict, replace
from pathlib import Path

import numpy as np

from . import io
from .analysis import (
    EstimateProbeConfig,
    ProbeGrid,
    probe,
    region_classify,
    resonance_identity_residual,
    resonance_roots,
)
from .boundary import residual_ladder, trace_recovery_error
from .config import (
    RunConfig,
    config_reference,
    default_config,
    load_config,
    problem_from_config,
    solver_from_config,
    split_list,
)
from .errors import MajdaBielloError, NumericsWarning, ValidationError
from .extension import HalfLineFunction
from .solver import picard_solve, restrict_to_quadrant

log = logging.getLogger("majdabiello")

U = "[1]"  # every quantity is nondimensional


def _col(symbol: str) -> str:
    return f"{symbol} {U}"


# ---------------------------------------------------------------- subcommands


def _solve_outputs(sol, out: Path, prefix: str = "") -> dict:
    rep = sol.report
    grid = sol.grid
    files = []
    for name, field_ in (("u", sol.u), ("v", sol.v)):
        view = restrict_to_quadrant(field_, rep.accepted_T)
        X, Tm = np.meshgrid(view.x, view.t, indexing="ij")
        files.append(
            io.write_csv(
                out / f"{prefix}solution_{name}.csv",
                {_col("x"): X.ravel(), _col("t"): Tm.ravel(), _col(name): view.values.ravel()},
            )
        )
    k = np.arange(1, rep.iterations + 1)
    files.append(
        io.write_csv(
            out / f"{prefix}iterations.csv",
            {
                _col("iteration"): k,
                _col("difference_u"): rep.differences_u,
                _col("difference_v"): rep.differences_v,
                _col("ratio"): rep.ratios,
            },
        )
    )
    j0 = grid.space.origin
    ts = (grid.t >= 0) & (grid.t <= rep.accepted_T * (1 + 1e-12))
    t = grid.t[ts]
    files.append(
        io.write_csv(
            out / f"{prefix}traces.csv",
            {
                _col("t"): t,
                _col("u(0,t)"): sol.u.values[j0, ts],
                _col("f"): sol.spec.f(t),
                _col("v(0,t)"): sol.v.values[j0, ts],
                _col("g"): sol.spec.g(t),
            },
        )
    )
    ctx = sol.context
    return {
        "report": rep.as_dict(),
        "accepted_T": rep.accepted_T,
        "extensions": {"u": ctx.ext_u, "v": ctx.ext_v},
        "exponents": {"eps": ctx.eps, "b": ctx.b, "gamma": ctx.gamma_exp},
        "quadrature_tails": {k: asdict(v) for k, v in ctx.tails.items()},
        "grid": grid.describe(),
        "artifacts": [str(f.name) for f in files],
    }


def cmd_solve(config: RunConfig, out: Path, args) -> dict:
    spec = problem_from_config(config)
    params = solver_from_config(config)
    sol = picard_solve(spec, params)
    return _solve_outputs(sol, out)


def _probe_configs(config: RunConfig, section: str, names) -> list:
    seed = config.get("run", "seed")
    if section == "probe":
        p = config.section("probe")
        common = dict(
            s=p["s"],
            b=p["b"],
            gamma=p["gamma"],
            alpha=p["alpha"],
            ensemble=p["ensemble"],
            seed=seed,
            n_packets=p["n_packets"],
            decay_range=(p["decay_min"], p["decay_max"]),
            xi_max=p["xi_max"],
        )
    else:
        p = config.section("verify")
        common = dict(s=p["s"], b=p["b"], theta=p["theta"], p=p["p"], ensemble=p["ensemble"], seed=seed)
    return [EstimateProbeConfig(name, **common) for name in names]


def _probe_grid(config: RunConfig) -> ProbeGrid:
    p = config.section("probe")
    return ProbeGrid(p["n_x"], p["L"], p["n_t"], p["horizon"])


def _run_probes(configs, grid: ProbeGrid, out: Path, threads: int, double: bool, summary_name: str) -> tuple[dict, list]:
    summaries, files = {}, []
    rows = {"estimate": [], "max": [], "mean": [], "argmax": [], "doubled_max": []}
    for cfg in configs:
        stats = probe(cfg, grid, threads)
        cols = {_col("member"): np.arange(cfg.ensemble), _col("ratio"): stats.ratios}
        summary = stats.summary()
        doubled = float("nan")
        if double:
            big = probe(cfg, grid.doubled(), threads)
            cols[_col("ratio_doubled")] = big.ratios
            doubled = big.max
            summary["doubled_max"] = doubled
            summary["stability"] = stats.max / doubled
        files.append(io.write_csv(out / f"ratios_{cfg.which}.csv", cols))
        summaries[cfg.which] = summary
        rows["estimate"].append(cfg.which)
        rows["max"].append(stats.max)
        rows["mean"].append(stats.mean)
        rows["argmax"].append(stats.argmax_member)
        rows["doubled_max"].append(doubled)
    files.append(
        io.write_csv(
            out / summary_name,
            {
                "estimate [label]": rows["estimate"],
                _col("max_ratio"): rows["max"],
                _col("mean_ratio"): rows["mean"],
                _col("argmax_member"): rows["argmax"],
                _col("max_ratio_doubled"): rows["doubled_max"],
            },
        )
    )
    return summaries, files


def cmd_probe_bilinear(config: RunConfig, out: Path, args) -> dict:
    names = split_list(config.get("probe", "which"))
    configs = _probe_configs(config, "probe", names)
    summaries, files = _run_probes(
        configs, _probe_grid(config), out, config.get("run", "threads"), config.get("probe", "double_grid"), "bilinear_summary.csv"
    )
    return {"probes": summaries, "artifacts": [f.name for f in files]}


def cmd_verify_linear(config: RunConfig, out: Path, args) -> dict:
    v = config.section("verify")
    h = HalfLineFunction.from_callable(lambda t: np.exp(-t) * np.sin(t), 40.0, 4097)
    levels = split_list(v["n_beta_levels"], int)
    errors = [trace_recovery_error(h, n) for n in levels]
    steps = split_list(v["steps"], float)
    resid, orders = residual_ladder(h, 1.0, steps)
    files = [
        io.write_csv(out / "trace_recovery.csv", {_col("n_beta"): levels, _col("relative_L2_error"): errors}),
        io.write_csv(
            out / "residual_ladder.csv",
            {_col("step"): steps, _col("max_residual"): resid, _col("observed_order"): np.append(np.nan, orders)},
        ),
    ]
    configs = _probe_configs(config, "verify", split_list(v["which"]))
    summaries, probe_files = _run_probes(
        configs, _probe_grid(config), out, config.get("run", "threads"), config.get("probe", "double_grid"), "linear_summary.csv"
    )
    return {
        "trace_recovery": dict(zip(map(str, levels), errors)),
        "residual_ladder": {"steps": steps, "max_residual": resid, "orders": orders},
        "probes": summaries,
        "artifacts": [f.name for f in files + probe_files],
    }


def cmd_resonance_report(config: RunConfig, out: Path, args) -> dict:
    r = config.section("resonance")
    alphas = split_list(r["alphas"], float)
    rng = np.random.default_rng(config.get("run", "seed"))
    roots_rows = {k: [] for k in ("alpha", "r1", "r2", "sum_res", "prod_res")}
    sweep = {"alpha": [], "variant": [], "max": []}
    regions = {"alpha": [], "xi": [], "region": []}
    for alpha in alphas:
        roots = resonance_roots(alpha)
        res_sum, res_prod = roots.vieta_residuals()
        for k, val in zip(roots_rows, (alpha, roots.r1, roots.r2, res_sum, res_prod)):
            roots_rows[k].append(val)
        n = r["samples"]
        xi1, xi2 = rng.uniform(-50.0, 50.0, (2, n))
        tau1 = alpha * xi1**3 + rng.normal(0.0, 10.0, n)
        tau2 = alpha * xi2**3 + rng.normal(0.0, 10.0, n)
        for variant in (1, 2):
            sweep["alpha"].append(alpha)
            sweep["variant"].append(variant)
            sweep["max"].append(float(resonance_identity_residual(alpha, xi1, xi2, tau1, tau2, variant, relative=True).max()))
        span = 1.5 * r["c"] * abs(roots.r2 * r["xi1"])
        xs = np.linspace(-span, span, 241)
        labels = region_classify(xs, r["xi1"], alpha, r["c"])
        regions["alpha"] += [alpha] * xs.size
        regions["xi"] += list(xs)
        regions["region"] += list(labels)
    files = [
        io.write_csv(
            out / "roots.csv",
            {
                _col("alpha"): roots_rows["alpha"],
                _col("r1"): roots_rows["r1"],
                _col("r2"): roots_rows["r2"],
                _col("vieta_sum_residual"): roots_rows["sum_res"],
                _col("vieta_product_residual"): roots_rows["prod_res"],
            },
        ),
        io.write_csv(
            out / "identity_sweep.csv",
            {_col("alpha"): sweep["alpha"], _col("variant"): sweep["variant"], _col("max_relative_residual"): sweep["max"]},
        ),
        io.write_csv(
            out / "regions.csv",
            {_col("alpha"): regions["alpha"], _col("xi"): regions["xi"], "region [label]": regions["region"]},
        ),
    ]
    return {
        "roots": [dict(zip(("alpha", "r1", "r2"), row)) for row in zip(alphas, roots_rows["r1"], roots_rows["r2"])],
        "identity_sweep_max": max(sweep["max"]),
        "c": r["c"],
        "xi1": r["xi1"],
        "artifacts": [f.name for f in files],
    }


def cmd_convergence_study(config: RunConfig, out: Path, args) -> dict:
    spec = problem_from_config(config)
    base = solver_from_config(config)
    levels = config.get("convergence", "levels")
    if levels < 1:
        raise ValidationError("convergence levels must be at least 1")
    rows = {k: [] for k in ("level", "n_x", "n_t", "n_beta", "T", "bc_u", "bc_v", "ic_u", "ic_v", "pde", "change")}
    previous = None
    for level in range(levels):
        k = 2**level
        params = replace(base, n_x=base.n_x * k, n_t=base.n_t * k, n_beta=base.n_beta * k)
        sol = picard_solve(spec, params)
        rep = sol.report
        change = float("nan")
        if previous is not None and previous.report.accepted_T == rep.accepted_T:
            # coarse nodes are every other fine node in x and t
            fine = sol.u.values[::2, ::2], sol.v.values[::2, ::2]
            coarse = previous.u.values, previous.v.values
            num = sum(np.linalg.norm(a - b) for a, b in zip(fine, coarse))
            den = sum(np.linalg.norm(b) for b in coarse)
            change = float(num / den) if den > 0 else float(num)
        for key, val in zip(
            rows,
            (level, params.n_x, params.n_t, params.n_beta, rep.accepted_T, rep.boundary_error_u, rep.boundary_error_v,
             rep.initial_error_u, rep.initial_error_v, rep.pde_residual, change),
        ):
            rows[key].append(val)
        previous = sol
    files = [io.write_csv(out / "convergence.csv", {_col(k): v for k, v in rows.items()})]
    return {"ladder": rows, "artifacts": [f.name for f in files]}


def cmd_config_reference(config: RunConfig, out: Path, args) -> dict:
    text = config_reference()
    out.mkdir(parents=True, exist_ok=True)
    (out / "config_reference.md").write_text(text + "\n")
    print(text)
    return {"artifacts": ["config_reference.md"]}


COMMANDS = {
    "solve": cmd_solve,
    "probe-bilinear": cmd_probe_bilinear,
    "verify-linear": cmd_verify_linear,
    "resonance-report": cmd_resonance_report,
    "convergence-study": cmd_convergence_study,
    "config-reference": cmd_config_reference,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="majdabiello", description="Half-line Majda-Biello solver and estimate probes")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", type=Path, help="INI configuration file")
    parser.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    parser.add_argument("--seed", type=int, help="override [run] seed")
    parser.add_argument("--threads", type=int, help="override [run] threads")
    parser.add_argument("--strict", action="store_true", help="treat flagged numerical warnings as errors")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    out: Path = args.out
    manifest = {"command": args.command, "versions": io.versions(), "strict": args.strict}
    start = time.perf_counter()
    status = 0
    config = None
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("error" if args.strict else "always", NumericsWarning)
            config = load_config(args.config) if args.config else default_config()
            overrides = {}
            if args.seed is not None:
                overrides["run__seed"] = args.seed
            if args.threads is not None:
                if args.threads < 1:
                    raise ValidationError("--threads must be at least 1")
                overrides["run__threads"] = args.threads
            config = config.with_overrides(**overrides)
            manifest["seed"] = config.get("run", "seed")
            manifest["threads"] = config.get("run", "threads")
            manifest["results"] = COMMANDS[args.command](config, out, args)
        manifest["warnings"] = [f"{w.category.__name__}: {w.message}" for w in caught]
    except NumericsWarning as exc:
        status = 2
        manifest["error"] = f"{type(exc).__name__}: {exc}"
        print(f"error (strict mode): {exc}", file=sys.stderr)
    except MajdaBielloError as exc:
        status = exc.exit_code
        manifest["error"] = f"{type(exc).__name__}: {exc}"
        for name in ("differences", "ratios", "attempts", "tail"):
            if hasattr(exc, name):
                manifest.setdefault("failure", {})[name] = getattr(exc, name)
        print(f"error: {exc}", file=sys.stderr)
    manifest["status"] = status
    manifest["config"] = config.as_dict() if config is not None else None
    manifest["wall_time_s"] = time.perf_counter() - start
    io.write_manifest(out / f"manifest_{args.command}.json", manifest)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
