"""Command-line experiment orchestration: thermalize | solve | rmt.

Every command takes --config <json>, optional --seed (overrides the config's
seed list) and --out (output directory). The fully resolved configuration is
echoed next to the outputs, and every output file is a deterministic function
of (config, seeds).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .config import ConfigError
from .cost import (
    GibbsOverflowError,
    brute_force_minima,
    decode_factor_pair,
    gibbs_observable,
)
from .floquet import FloquetParams, IntegratorConfig
from .mcmc import (
    ChainConfig,
    cost_histogram,
    run_chain,
    trace_summary,
    write_trace_jsonl,
)
from .rmt import (
    JS_CSV_COLUMNS,
    cue_bin_masses,
    cue_pdf,
    haar_ensemble,
    histogram,
    js_distance,
    poisson_bin_masses,
    poisson_pdf,
    product_ensemble,
    uniform_edges,
    write_js_csv,
)


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])


def _echo_config(doc: dict, command: str, out_dir: Path, extra: dict) -> None:
    _write_json(out_dir / "resolved_config.json",
                cfgmod.resolved_document(doc, command, str(out_dir), extra))


def _chain_config(
    params: FloquetParams,
    integrator: IntegratorConfig,
    chain: cfgmod.ChainSettings,
    seed: int,
) -> ChainConfig:
    return ChainConfig(
        floquet=params,
        integrator=integrator,
        beta=chain.beta,
        max_iters=chain.max_iters,
        estimator_mode=chain.estimator_mode,
        estimator_shots=chain.estimator_shots,
        replay_mode=chain.replay_mode,
        master_seed=seed,
    )


def _hist_rows(hist: dict[float, float]):
    return [(c, p) for c, p in sorted(hist.items())]


# --- thermalize ----------------------------------------------------------------


def _thermalize_job(job) -> dict:
    (chain_cfg, obs, solutions, w_over_j, trace_path, snapshots, out_dir) = job
    trace = run_chain(chain_cfg, obs, solutions)
    write_trace_jsonl(trace, trace_path)
    seed = chain_cfg.master_seed
    for k in snapshots:
        if k == chain_cfg.max_iters:
            state = trace.final_state
        else:
            # per-iteration seeds are independent of max_iters, so rerunning
            # a shorter chain reproduces the long chain's prefix state exactly
            prefix_cfg = replace(chain_cfg, max_iters=k)
            state = run_chain(prefix_cfg, obs, solutions).final_state
        hist = cost_histogram(state, obs.hamiltonian)
        _write_csv(
            Path(out_dir) / f"hist_w{w_over_j:g}_s{seed}_iter{k}.csv",
            ["cost", "probability"],
            _hist_rows(hist),
        )
    summary = trace_summary(trace)
    summary.update({"w_over_j": w_over_j, "trace_file": Path(trace_path).name})
    return summary


def cmd_thermalize(doc: dict, out_dir: Path) -> int:
    cfg = cfgmod.parse_thermalize(doc)
    for k in cfg.snapshot_iters:
        if k > cfg.chain.max_iters:
            raise ConfigError(
                f"thermalize.snapshot_iters: {k} exceeds chain.max_iters "
                f"({cfg.chain.max_iters})"
            )
    hamiltonian, _ = cfgmod.build_problem(cfg.problem)
    n = hamiltonian.n_qubits
    min_cost, solutions = brute_force_minima(hamiltonian)
    obs = gibbs_observable(hamiltonian, cfg.chain.beta)
    jobs = []
    for w_over_j in cfg.w_over_j_list:
        params = cfgmod.parse_floquet(cfg.floquet_raw, n, w_over_j=w_over_j)
        for seed in cfg.chain.seeds:
            trace_path = out_dir / f"trace_w{w_over_j:g}_s{seed}.jsonl"
            jobs.append(
                (
                    _chain_config(params, cfg.integrator, cfg.chain, seed),
                    obs,
                    solutions,
                    w_over_j,
                    str(trace_path),
                    cfg.snapshot_iters,
                    str(out_dir),
                )
            )
    results = _run_jobs(jobs, _thermalize_job, cfg.workers)
    _write_json(
        out_dir / "summary.json",
        {
            "problem": cfg.problem.describe(),
            "min_cost": min_cost,
            "n_solutions": len(solutions),
            "runs": results,
        },
    )
    print(f"wrote {len(jobs)} trace(s) and summary.json to {out_dir}")
    return 0


# --- solve -----------------------------------------------------------------------


def _solve_job(job) -> dict:
    (chain_cfg, obs, solutions, trace_path, checkpoints, budgets) = job
    trace = run_chain(chain_cfg, obs, solutions)
    write_trace_jsonl(trace, trace_path)
    summary = trace_summary(trace, shot_budgets=budgets, checkpoints=checkpoints)
    summary["trace_file"] = Path(trace_path).name
    return summary


def cmd_solve(doc: dict, out_dir: Path) -> int:
    cfg = cfgmod.parse_solve(doc)
    hamiltonian, _ = cfgmod.build_problem(cfg.problem)
    n = hamiltonian.n_qubits
    min_cost, solutions = brute_force_minima(hamiltonian)
    payload: dict = {
        "problem": cfg.problem.describe(),
        "min_cost": min_cost,
        "n_solutions": len(solutions),
        "solutions": [list(b) for b in sorted(solutions)],
    }
    if cfg.problem.kind == "factorization":
        target = -float(cfg.problem.m) ** 2
        payload["solvable"] = min_cost == target
        payload["factor_pairs"] = sorted(
            decode_factor_pair(b, cfg.problem.n_bits) for b in solutions
        )
        if not payload["solvable"]:
            print(
                f"warning: no assignment reaches -m^2 = {target:g}; "
                f"m={cfg.problem.m} has no {cfg.problem.n_bits}-bit factor pair",
                file=sys.stderr,
            )
    obs = gibbs_observable(hamiltonian, cfg.chain.beta)
    checkpoints = cfg.checkpoints or (cfg.chain.max_iters,)
    params = cfgmod.parse_floquet(cfg.floquet_raw, n)
    jobs = [
        (
            _chain_config(params, cfg.integrator, cfg.chain, seed),
            obs,
            solutions,
            str(out_dir / f"trace_s{seed}.jsonl"),
            checkpoints,
            cfg.shot_budgets,
        )
        for seed in cfg.chain.seeds
    ]
    payload["runs"] = _run_jobs(jobs, _solve_job, cfg.workers)
    _write_json(out_dir / "summary.json", payload)
    print(f"wrote {len(jobs)} trace(s) and summary.json to {out_dir}")
    return 0


# --- rmt -------------------------------------------------------------------------


def _rmt_job(job) -> tuple:
    (params, integrator, n_factors, ensemble_size, bins, seed, m_index) = job
    rng = np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(m_index,))
    )
    sample = product_ensemble(params, integrator, n_factors, ensemble_size, rng)
    return n_factors, sample.r_values


def cmd_rmt(doc: dict, out_dir: Path) -> int:
    cfg = cfgmod.parse_rmt(doc)
    edges = uniform_edges(cfg.bins)
    pois = poisson_bin_masses(edges)
    cue = cue_bin_masses(edges)
    widths = np.diff(edges)

    _write_csv(
        out_dir / "reference_densities.csv",
        ["r", "poisson_pdf", "cue_pdf"],
        [(float(r), poisson_pdf(float(r)), cue_pdf(float(r))) for r in edges],
    )

    def emit_hist(name: str, r_values: np.ndarray) -> tuple[float, float]:
        from .rmt import LevelSpacingSample

        emp = histogram(LevelSpacingSample(r_values), edges)
        _write_csv(
            out_dir / name,
            ["bin_left", "bin_right", "empirical_mass", "poisson_mass", "cue_mass"],
            [
                (float(edges[i]), float(edges[i + 1]), float(emp.masses[i]),
                 float(pois.masses[i]), float(cue.masses[i]))
                for i in range(len(widths))
            ],
        )
        return js_distance(emp, pois), js_distance(emp, cue)

    if cfg.haar_oracle:
        rng = np.random.default_rng(np.random.SeedSequence(entropy=cfg.seed))
        sample = haar_ensemble(1 << cfg.n_qubits, cfg.ensemble_size, rng)
        js_pois, js_cue = emit_hist("rhist_haar.csv", sample.r_values)
        _write_csv(
            out_dir / "js_haar.csv",
            ["n_qubits", "JS_to_CUE", "JS_to_Poisson", "ensemble_size"],
            [(cfg.n_qubits, js_cue, js_pois, cfg.ensemble_size)],
        )
        print(f"wrote Haar-oracle statistics to {out_dir}")
        return 0

    params = cfgmod.parse_floquet(cfg.floquet_raw, cfg.n_qubits)
    jobs = [
        (params, cfg.integrator, m, cfg.ensemble_size, cfg.bins, cfg.seed, mi)
        for mi, m in enumerate(cfg.m_list)
    ]
    results = _run_jobs(jobs, _rmt_job, cfg.workers)
    rows = []
    for n_factors, r_values in results:
        js_pois, js_cue = emit_hist(f"rhist_m{n_factors}.csv", r_values)
        rows.append((n_factors, cfg.n_qubits, js_cue, js_pois, cfg.ensemble_size))
    write_js_csv(out_dir / "js_vs_m.csv", rows)
    print(f"wrote {len(rows)}-row {JS_CSV_COLUMNS[0]}-sweep to {out_dir}")
    return 0


# --- entry point -------------------------------------------------------------------


def _run_jobs(jobs, fn, workers: int):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mblmc",
        description="Markov chains over qubit states driven by disordered "
        "Floquet-Ising periods",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("thermalize", "chains across a list of disorder strengths"),
        ("solve", "optimize a problem instance and report success probability"),
        ("rmt", "level-spacing statistics of products of one-period propagators"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON configuration file")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config's seed(s) with a single seed")
        p.add_argument("--out", default=None, help="output directory")
    return parser


def _apply_overrides(doc: dict, command: str, args) -> None:
    if args.seed is not None:
        if command == "rmt":
            doc.setdefault("rmt", {})["seed"] = args.seed
        else:
            doc.setdefault("chain", {})["seeds"] = [args.seed]


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = cfgmod.load_json(args.config)
        if not isinstance(doc, dict):
            raise ConfigError(f"{args.config}: top-level JSON must be an object")
        _apply_overrides(doc, args.command, args)
        out = args.out or doc.get("out_dir")
        if not out:
            raise ConfigError("no output directory: pass --out or set out_dir")
        out_dir = Path(out)
        out_dir.mkdir(parents=True, exist_ok=True)
        handler = {
            "thermalize": cmd_thermalize,
            "solve": cmd_solve,
            "rmt": cmd_rmt,
        }[args.command]
        _echo_config(doc, args.command, out_dir, {"seed_override": args.seed})
        return handler(doc, out_dir)
    except (ConfigError, GibbsOverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
