import json

import pytest


def write_trace(path, n=40, w_over_j=200.0):
    with open(path, "w") as fh:
        for i in range(1, n + 1):
            rec = {
                "index": i,
                "proposal_cost_expectation": 2.0 - i * 0.05,
                "metropolis_ratio_q": 0.9,
                "accepted": i % 3 != 0,
                "post_cost_expectation": 2.0 - i * 0.04,
                "post_solution_mass": min(0.9, i * 0.01),
                "disorder_seed": 1000 + i,
            }
            fh.write(json.dumps(rec) + "\n")
    return path


def write_thermalize_summary(path, trace_names, ws):
    doc = {
        "problem": {"kind": "mis", "er": {"n": 9, "p": 0.7, "seed": 7}},
        "min_cost": -2.0,
        "n_solutions": 9,
        "runs": [
            {
                "trace_file": name,
                "w_over_j": w,
                "acceptance_rate": 0.5 + 0.1 * k,
                "best_solution_mass": 0.3,
                "final_cost_expectation": -1.0,
                "iterations": 40,
                "master_seed": k,
            }
            for k, (name, w) in enumerate(zip(trace_names, ws))
        ],
    }
    path.write_text(json.dumps(doc))
    return path


def write_hist_csv(path):
    rows = [(-2.0, 0.55), (-1.0, 0.3), (0.0, 0.1), (1.0, 0.04), (2.0, 0.01)]
    with open(path, "w") as fh:
        fh.write("cost,probability\n")
        for c, p in rows:
            fh.write(f"{c},{p}\n")
    return path


def write_js_csv(path):
    with open(path, "w") as fh:
        fh.write("M,n_qubits,JS_to_CUE,JS_to_Poisson,ensemble_size\n")
        for m, js in ((1, 0.31), (10, 0.2), (50, 0.08), (150, 0.03)):
            fh.write(f"{m},5,{js},{0.35 - js},500\n")
    return path


def write_rhist_csv(path, bins=20):
    # normalized Poisson-shaped empirical masses
    masses = []
    for k in range(bins):
        a, b = k / bins, (k + 1) / bins
        masses.append(2 / (1 + a) - 2 / (1 + b))
    total = sum(masses)
    with open(path, "w") as fh:
        fh.write("bin_left,bin_right,empirical_mass,poisson_mass,cue_mass\n")
        for k, m in enumerate(masses):
            a, b = k / bins, (k + 1) / bins
            cue = 2 * (b - a) * (a + b) / 2  # triangular stand-in, sums to ~1
            fh.write(f"{a},{b},{m / total},{m},{cue}\n")
    return path


def write_densities_csv(path, bins=20):
    with open(path, "w") as fh:
        fh.write("r,poisson_pdf,cue_pdf\n")
        for k in range(bins + 1):
            r = k / bins
            pois = 2 / (1 + r) ** 2
            cue = 2 * r  # triangular density, integrates to 1
            fh.write(f"{r},{pois},{cue}\n")
    return path


def write_solve_summary(path, n=10, checkpoint="2000"):
    doc = {
        "problem": {"kind": "mis", "er": {"n": n, "p": 0.5, "seed": 11}},
        "min_cost": -4.0,
        "n_solutions": 1,
        "solutions": [[0, 1, 0, 1, 0, 0, 0, 1, 0, 1]],
        "runs": [
            {
                "acceptance_rate": 0.4,
                "best_solution_mass": 0.02,
                "success_probability": {checkpoint: {"10000": 0.97, "100": 0.6}},
                "trace_file": "trace_s1.jsonl",
            }
        ],
    }
    path.write_text(json.dumps(doc))
    return path


@pytest.fixture
def outputs_dir(tmp_path):
    ws = [4.0, 100.0, 200.0, 400.0]
    traces = [
        write_trace(tmp_path / f"trace_w{w:g}_s1.jsonl", w_over_j=w) for w in ws
    ]
    write_thermalize_summary(
        tmp_path / "summary.json",
        [p.name for p in traces],
        ws,
    )
    write_hist_csv(tmp_path / "hist_w200_s1_iter40.csv")
    write_js_csv(tmp_path / "js_vs_m.csv")
    write_rhist_csv(tmp_path / "rhist_m1.csv")
    write_densities_csv(tmp_path / "reference_densities.csv")
    write_solve_summary(tmp_path / "solve_summary.json")
    return tmp_path
