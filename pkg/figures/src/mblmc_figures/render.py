"""Figure rendering from experiment outputs. Thin consumer: no statistics are
recomputed here; overlay densities come from the emitted reference CSVs."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "mblmc-figures"  # deterministic SVG ids

import matplotlib.pyplot as plt  # noqa: E402

from . import io  # noqa: E402

KINDS = ("thermalization", "histogram", "js", "rstats", "success")


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    inputs: tuple[str, ...]
    output: str
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")
        if not self.inputs:
            raise ValueError("at least one input file is required")
        for p in self.inputs:
            if not Path(p).is_file():
                raise FileNotFoundError(f"input not found: {p}")


def _save(fig, output: str) -> None:
    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    fmt = path.suffix.lstrip(".").lower() or "png"
    # strip volatile metadata so identical inputs give identical bytes
    metadata = {"Date": None} if fmt == "svg" else {"Software": "mblmc-figures"}
    fig.savefig(path, format=fmt, dpi=144, metadata=metadata)
    plt.close(fig)


def _split_summary_and_traces(inputs):
    summaries, traces = [], []
    for p in inputs:
        (summaries if p.endswith(".json") else traces).append(p)
    return summaries, traces


def _render_thermalization(spec: FigureSpec):
    summaries, traces = _split_summary_and_traces(spec.inputs)
    if not traces:
        raise io.SchemaError("thermalization needs at least one trace JSONL input")
    labels: dict[str, str] = {}
    for spath in summaries:
        doc = io.read_summary(spath)
        for run in doc["runs"]:
            name = run.get("trace_file")
            if name is None:
                continue
            w = run.get("w_over_j")
            ar = run.get("acceptance_rate")
            label = f"W/J={w:g}" if w is not None else name
            if ar is not None:
                label += f" (A.R. {100 * ar:.0f}%)"
            labels[name] = label
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for tpath in traces:
        data = io.read_trace(tpath)
        ax.plot(
            data["index"],
            data["post_cost_expectation"],
            label=labels.get(Path(tpath).name, Path(tpath).name),
            linewidth=1.0,
        )
    ax.set_xlabel("iteration")
    ax.set_ylabel("cost expectation")
    ax.legend(fontsize=8)
    return fig


def _render_histogram(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for path in spec.inputs:
        data = io.read_hist(path)
        ax.bar(
            data["cost"],
            data["probability"],
            width=0.8 / len(spec.inputs),
            align="center",
            alpha=0.7,
            label=Path(path).stem,
        )
    ax.set_yscale("log")
    ax.set_xlabel("cost")
    ax.set_ylabel("probability")
    ax.legend(fontsize=8)
    return fig


def _render_js(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for path in spec.inputs:
        data = io.read_js(path)
        by_n: dict[float, list[tuple[float, float]]] = {}
        for m, n, js in zip(data["M"], data["n_qubits"], data["JS_to_CUE"]):
            by_n.setdefault(n, []).append((m, js))
        for n, points in sorted(by_n.items()):
            points.sort()
            ax.plot(
                [p[0] for p in points],
                [p[1] for p in points],
                marker="o",
                label=f"{int(n)} qubits",
            )
    ax.set_xscale("log")
    ax.set_xlabel("number of one-period factors M")
    ax.set_ylabel("JS distance to CUE")
    ax.legend(fontsize=8)
    return fig


def _render_rstats(spec: FigureSpec):
    hist_paths = [p for p in spec.inputs if "densit" not in Path(p).name]
    dens_paths = [p for p in spec.inputs if "densit" in Path(p).name]
    if len(hist_paths) != 1 or len(dens_paths) != 1:
        raise io.SchemaError(
            "rstats needs exactly one rhist CSV and one reference-densities CSV"
        )
    hist = io.read_rhist(hist_paths[0])
    dens = io.read_densities(dens_paths[0])
    fig, ax = plt.subplots(figsize=(7, 4.5))
    widths = [b - a for a, b in zip(hist["bin_left"], hist["bin_right"])]
    centers = [(a + b) / 2 for a, b in zip(hist["bin_left"], hist["bin_right"])]
    density = [m / w for m, w in zip(hist["empirical_mass"], widths)]
    ax.bar(centers, density, width=widths, alpha=0.6, label=Path(hist_paths[0]).stem)
    ax.plot(dens["r"], dens["poisson_pdf"], "--", label="Poisson")
    ax.plot(dens["r"], dens["cue_pdf"], "-", label="CUE")
    ax.set_xlabel("spacing ratio r")
    ax.set_ylabel("density")
    ax.legend(fontsize=8)
    return fig


def _render_success(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    series: dict[str, list[tuple[float, float]]] = {}
    for i, path in enumerate(sorted(spec.inputs)):
        doc = io.read_summary(path)
        problem = doc.get("problem", {})
        x = float(problem.get("er", {}).get("n", 0) or problem.get("m", 0) or i)
        for run in doc["runs"]:
            table = run.get("success_probability")
            if not isinstance(table, dict):
                raise io.SchemaError(
                    f"{path}: run is missing the 'success_probability' table"
                )
            for checkpoint, by_budget in table.items():
                for budget, prob in by_budget.items():
                    series.setdefault(
                        f"{checkpoint} iters, {budget} shots", []
                    ).append((x, float(prob)))
    for label, points in sorted(series.items()):
        points.sort()
        ax.scatter([p[0] for p in points], [p[1] for p in points], label=label)
    ax.set_ylim(-0.02, 1.02)
    ax.set_xlabel("instance size")
    ax.set_ylabel("success probability")
    ax.legend(fontsize=7)
    return fig


_RENDERERS = {
    "thermalization": _render_thermalization,
    "histogram": _render_histogram,
    "js": _render_js,
    "rstats": _render_rstats,
    "success": _render_success,
}


def render(spec: FigureSpec) -> str:
    """Render the figure described by spec; returns the output path."""
    fig = _RENDERERS[spec.kind](spec)
    if spec.options.get("title"):
        fig.axes[0].set_title(spec.options["title"])
    _save(fig, spec.output)
    return spec.output
