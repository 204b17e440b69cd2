"""Readers for the experiment output contract, with column-level validation.

Consumed formats (produced by the mblmc command line):
  trace JSONL        one iteration record per line
  summary JSON       run-level aggregates (thermalize and solve variants)
  hist CSV           cost, probability
  js CSV             M, n_qubits, JS_to_CUE, JS_to_Poisson, ensemble_size
  rhist CSV          bin_left, bin_right, empirical_mass, poisson_mass, cue_mass
  densities CSV      r, poisson_pdf, cue_pdf
"""

from __future__ import annotations

import csv
import json
from pathlib import Path


class SchemaError(ValueError):
    pass


TRACE_FIELDS = {
    "index",
    "proposal_cost_expectation",
    "metropolis_ratio_q",
    "accepted",
    "post_cost_expectation",
    "post_solution_mass",
    "disorder_seed",
}


def _check_columns(path, found, required) -> None:
    missing = sorted(set(required) - set(found))
    if missing:
        raise SchemaError(
            f"{path}: missing column(s) {', '.join(repr(m) for m in missing)} "
            f"(found: {', '.join(sorted(found))})"
        )


def read_csv_columns(path, required) -> dict[str, list[float]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty CSV")
        _check_columns(path, reader.fieldnames, required)
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    out: dict[str, list[float]] = {name: [] for name in reader.fieldnames}
    for i, row in enumerate(rows, start=2):
        for name in reader.fieldnames:
            try:
                out[name].append(float(row[name]))
            except (TypeError, ValueError):
                raise SchemaError(
                    f"{path}:{i}: column {name!r} is not numeric: {row[name]!r}"
                ) from None
    return out


def read_trace(path) -> dict[str, list]:
    records = []
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}:{line_no}: invalid JSON: {exc}") from None
            missing = TRACE_FIELDS - set(rec)
            if missing:
                raise SchemaError(
                    f"{path}:{line_no}: record missing field(s) "
                    f"{', '.join(sorted(missing))}"
                )
            records.append(rec)
    if not records:
        raise SchemaError(f"{path}: empty trace")
    return {
        "index": [r["index"] for r in records],
        "post_cost_expectation": [r["post_cost_expectation"] for r in records],
        "accepted": [r["accepted"] for r in records],
        "post_solution_mass": [r["post_solution_mass"] for r in records],
    }


def read_summary(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON: {exc}") from None
    if "runs" not in doc or not isinstance(doc["runs"], list):
        raise SchemaError(f"{path}: summary must contain a 'runs' list")
    return doc


def read_hist(path):
    return read_csv_columns(path, ("cost", "probability"))


def read_js(path):
    return read_csv_columns(
        path, ("M", "n_qubits", "JS_to_CUE", "JS_to_Poisson", "ensemble_size")
    )


def read_rhist(path):
    return read_csv_columns(
        path, ("bin_left", "bin_right", "empirical_mass", "poisson_mass", "cue_mass")
    )


def read_densities(path):
    return read_csv_columns(path, ("r", "poisson_pdf", "cue_pdf"))
