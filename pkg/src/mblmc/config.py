"""Experiment configuration: JSON ingestion, validation, defaults, echo."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .cost import Graph, KBodyHamiltonian, erdos_renyi, load_graph
from .cost import factorization_hubo, mis_hamiltonian, maxcut_hamiltonian
from .floquet import FloquetParams, IntegratorConfig

DEFAULT_J = 4.15
DEFAULT_B0_OVER_J = 1.25
DEFAULT_DELTA_B_OVER_J = -1.25
DEFAULT_OMEGA_OVER_J = 10.0
DEFAULT_BETA = 1.0

PROBLEM_KINDS = ("mis", "maxcut", "factorization")


class ConfigError(ValueError):
    pass


def _need(cfg: dict, key: str, ctx: str):
    if key not in cfg:
        raise ConfigError(f"{ctx}.{key} is required")
    return cfg[key]


def _get_number(cfg: dict, key: str, ctx: str, default=None, minimum=None, strict=False):
    val = cfg.get(key, default)
    if val is None:
        return None
    if not isinstance(val, (int, float)) or isinstance(val, bool):
        raise ConfigError(f"{ctx}.{key} must be a number, got {val!r}")
    if minimum is not None and (val <= minimum if strict else val < minimum):
        cmp = ">" if strict else ">="
        raise ConfigError(f"{ctx}.{key} must be {cmp} {minimum}, got {val}")
    return float(val)


def _get_int(cfg: dict, key: str, ctx: str, default=None, minimum=None):
    val = cfg.get(key, default)
    if val is None:
        return None
    if not isinstance(val, int) or isinstance(val, bool):
        raise ConfigError(f"{ctx}.{key} must be an integer, got {val!r}")
    if minimum is not None and val < minimum:
        raise ConfigError(f"{ctx}.{key} must be >= {minimum}, got {val}")
    return val


@dataclass(frozen=True)
class ProblemSpec:
    kind: str
    graph_path: str | None = None
    er: tuple[int, float, int] | None = None
    m: int | None = None
    n_bits: int | None = None

    def describe(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.graph_path:
            out["graph_path"] = self.graph_path
        if self.er:
            out["er"] = {"n": self.er[0], "p": self.er[1], "seed": self.er[2]}
        if self.m is not None:
            out["m"] = self.m
            out["n_bits"] = self.n_bits
        return out


def parse_problem(cfg: dict, ctx: str = "problem") -> ProblemSpec:
    kind = _need(cfg, "kind", ctx)
    if kind not in PROBLEM_KINDS:
        raise ConfigError(f"{ctx}.kind must be one of {PROBLEM_KINDS}, got {kind!r}")
    if kind == "factorization":
        m = _get_int(cfg, "m", ctx, minimum=2)
        n_bits = _get_int(cfg, "n_bits", ctx, minimum=2)
        if m is None or n_bits is None:
            raise ConfigError(f"{ctx}: factorization needs integer fields 'm' and 'n_bits'")
        return ProblemSpec(kind, m=m, n_bits=n_bits)
    graph = _need(cfg, "graph", ctx)
    if not isinstance(graph, dict):
        raise ConfigError(f"{ctx}.graph must be an object")
    if "path" in graph:
        path = graph["path"]
        if not Path(path).is_file():
            raise ConfigError(f"{ctx}.graph.path: no such file: {path}")
        return ProblemSpec(kind, graph_path=str(path))
    if "er" in graph:
        er = graph["er"]
        n = _get_int(er, "n", f"{ctx}.graph.er", minimum=1)
        seed = _get_int(er, "seed", f"{ctx}.graph.er", minimum=0)
        p = _get_number(er, "p", f"{ctx}.graph.er", minimum=0.0)
        if n is None or seed is None or p is None or p > 1.0:
            raise ConfigError(
                f"{ctx}.graph.er needs fields n (int), p (in [0,1]), seed (int)"
            )
        return ProblemSpec(kind, er=(n, p, seed))
    raise ConfigError(f"{ctx}.graph must contain 'path' or 'er'")


def build_problem(spec: ProblemSpec) -> tuple[KBodyHamiltonian, Graph | None]:
    if spec.kind == "factorization":
        return factorization_hubo(spec.m, spec.n_bits), None
    if spec.graph_path:
        graph = load_graph(spec.graph_path)
    else:
        n, p, seed = spec.er
        graph = erdos_renyi(n, p, seed)
    builder = mis_hamiltonian if spec.kind == "mis" else maxcut_hamiltonian
    return builder(graph), graph


def parse_floquet(cfg: dict, n_qubits: int, ctx: str = "floquet",
                  w_over_j: float | None = None) -> FloquetParams:
    """Absolute fields win over ratio fields; W may be supplied externally
    (thermalize sweeps) via w_over_j."""
    j = _get_number(cfg, "j", ctx, default=DEFAULT_J, minimum=0.0, strict=True)
    b0 = _get_number(cfg, "b0", ctx)
    if b0 is None:
        b0 = _get_number(cfg, "b0_over_j", ctx, default=DEFAULT_B0_OVER_J) * j
    delta_b = _get_number(cfg, "delta_b", ctx)
    if delta_b is None:
        delta_b = _get_number(cfg, "delta_b_over_j", ctx, default=DEFAULT_DELTA_B_OVER_J) * j
    omega = _get_number(cfg, "omega", ctx)
    if omega is None:
        omega = _get_number(cfg, "omega_over_j", ctx, default=DEFAULT_OMEGA_OVER_J, minimum=0.0, strict=True) * j
    if w_over_j is not None:
        w = w_over_j * j
    else:
        w = _get_number(cfg, "w", ctx, minimum=0.0)
        if w is None:
            w_ratio = _get_number(cfg, "w_over_j", ctx, minimum=0.0)
            if w_ratio is None:
                raise ConfigError(f"{ctx} needs 'w' or 'w_over_j'")
            w = w_ratio * j
    return FloquetParams(n_qubits=n_qubits, j=j, b0=b0, delta_b=delta_b,
                         omega=omega, w=w)


def parse_integrator(cfg: dict, ctx: str = "integrator") -> IntegratorConfig:
    steps = _get_int(cfg, "steps_per_period", ctx, default=256, minimum=2)
    tol = _get_number(cfg, "tolerance", ctx, default=1e-8, minimum=0.0, strict=True)
    adaptive = cfg.get("adaptive", True)
    if not isinstance(adaptive, bool):
        raise ConfigError(f"{ctx}.adaptive must be a boolean, got {adaptive!r}")
    max_doublings = _get_int(cfg, "max_doublings", ctx, default=16, minimum=1)
    return IntegratorConfig(steps, tol, adaptive, max_doublings)


@dataclass(frozen=True)
class ChainSettings:
    beta: float
    max_iters: int
    estimator_mode: str
    estimator_shots: int
    replay_mode: str
    seeds: tuple[int, ...]


def parse_chain(cfg: dict, ctx: str = "chain") -> ChainSettings:
    beta = _get_number(cfg, "beta", ctx, default=DEFAULT_BETA, minimum=0.0, strict=True)
    max_iters = _get_int(cfg, "max_iters", ctx, minimum=1)
    if max_iters is None:
        raise ConfigError(f"{ctx}.max_iters is required")
    estimator = cfg.get("estimator", "exact")
    if estimator == "exact":
        mode, shots = "exact", 0
    elif isinstance(estimator, dict) and "shots" in estimator:
        mode = "shots"
        shots = _get_int(estimator, "shots", f"{ctx}.estimator", minimum=1)
    else:
        raise ConfigError(
            f"{ctx}.estimator must be 'exact' or {{'shots': K}}, got {estimator!r}"
        )
    replay = cfg.get("replay", "cached_state")
    if replay not in ("cached_state", "full_replay"):
        raise ConfigError(
            f"{ctx}.replay must be 'cached_state' or 'full_replay', got {replay!r}"
        )
    seeds = cfg.get("seeds", [0])
    if not isinstance(seeds, list) or not seeds or not all(
        isinstance(s, int) and not isinstance(s, bool) for s in seeds
    ):
        raise ConfigError(f"{ctx}.seeds must be a nonempty list of integers")
    return ChainSettings(beta, max_iters, mode, shots, replay, tuple(seeds))


@dataclass(frozen=True)
class ThermalizeConfig:
    problem: ProblemSpec
    floquet_raw: dict
    integrator: IntegratorConfig
    chain: ChainSettings
    w_over_j_list: tuple[float, ...]
    snapshot_iters: tuple[int, ...]
    workers: int


@dataclass(frozen=True)
class SolveConfig:
    problem: ProblemSpec
    floquet_raw: dict
    integrator: IntegratorConfig
    chain: ChainSettings
    checkpoints: tuple[int, ...]
    shot_budgets: tuple[int, ...]
    workers: int


@dataclass(frozen=True)
class RmtConfig:
    n_qubits: int
    floquet_raw: dict
    integrator: IntegratorConfig
    m_list: tuple[int, ...]
    ensemble_size: int
    bins: int
    haar_oracle: bool
    seed: int
    workers: int


def _float_list(cfg: dict, key: str, ctx: str, minimum=None) -> tuple[float, ...]:
    vals = _need(cfg, key, ctx)
    if not isinstance(vals, list) or not vals:
        raise ConfigError(f"{ctx}.{key} must be a nonempty list")
    out = []
    for i, v in enumerate(vals):
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise ConfigError(f"{ctx}.{key}[{i}] must be a number, got {v!r}")
        if minimum is not None and v < minimum:
            raise ConfigError(f"{ctx}.{key}[{i}] must be >= {minimum}, got {v}")
        out.append(float(v))
    return tuple(out)


def _int_list(cfg: dict, key: str, ctx: str, minimum=None, default=None) -> tuple[int, ...]:
    vals = cfg.get(key, default)
    if vals is None:
        raise ConfigError(f"{ctx}.{key} is required")
    if not isinstance(vals, list):
        raise ConfigError(f"{ctx}.{key} must be a list")
    out = []
    for i, v in enumerate(vals):
        if not isinstance(v, int) or isinstance(v, bool):
            raise ConfigError(f"{ctx}.{key}[{i}] must be an integer, got {v!r}")
        if minimum is not None and v < minimum:
            raise ConfigError(f"{ctx}.{key}[{i}] must be >= {minimum}, got {v}")
        out.append(v)
    return tuple(out)


def _workers(cfg: dict) -> int:
    return _get_int(cfg, "workers", "", default=1, minimum=1)


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None


def parse_thermalize(doc: dict) -> ThermalizeConfig:
    problem = parse_problem(_need(doc, "problem", "config"))
    if problem.kind == "factorization":
        raise ConfigError("thermalize expects a graph problem (mis or maxcut)")
    therm = _need(doc, "thermalize", "config")
    return ThermalizeConfig(
        problem=problem,
        floquet_raw=doc.get("floquet", {}),
        integrator=parse_integrator(doc.get("integrator", {})),
        chain=parse_chain(_need(doc, "chain", "config")),
        w_over_j_list=_float_list(therm, "w_over_j_list", "thermalize", minimum=0.0),
        snapshot_iters=_int_list(therm, "snapshot_iters", "thermalize", minimum=1, default=[]),
        workers=_workers(doc),
    )


def parse_solve(doc: dict) -> SolveConfig:
    solve = doc.get("solve", {})
    return SolveConfig(
        problem=parse_problem(_need(doc, "problem", "config")),
        floquet_raw=doc.get("floquet", {}),
        integrator=parse_integrator(doc.get("integrator", {})),
        chain=parse_chain(_need(doc, "chain", "config")),
        checkpoints=_int_list(solve, "checkpoints", "solve", minimum=1, default=[]),
        shot_budgets=_int_list(solve, "shot_budgets", "solve", minimum=1, default=[10000]),
        workers=_workers(doc),
    )


def parse_rmt(doc: dict) -> RmtConfig:
    rmt_cfg = _need(doc, "rmt", "config")
    n_qubits = _get_int(rmt_cfg, "n_qubits", "rmt", minimum=1)
    if n_qubits is None:
        raise ConfigError("rmt.n_qubits is required")
    if n_qubits > 10:
        raise ConfigError(f"rmt.n_qubits must be <= 10, got {n_qubits}")
    haar = rmt_cfg.get("haar_oracle", False)
    if not isinstance(haar, bool):
        raise ConfigError(f"rmt.haar_oracle must be a boolean, got {haar!r}")
    return RmtConfig(
        n_qubits=n_qubits,
        floquet_raw=doc.get("floquet", {}),
        integrator=parse_integrator(doc.get("integrator", {})),
        m_list=_int_list(rmt_cfg, "m_list", "rmt", minimum=1, default=[1]),
        ensemble_size=_get_int(rmt_cfg, "ensemble_size", "rmt", default=500, minimum=1),
        bins=_get_int(rmt_cfg, "bins", "rmt", default=20, minimum=2),
        haar_oracle=haar,
        seed=_get_int(rmt_cfg, "seed", "rmt", default=0, minimum=0),
        workers=_workers(doc),
    )


def resolved_document(doc: dict, command: str, out_dir: str, extra: dict) -> dict:
    """Echo of the configuration with every default filled in."""
    resolved = json.loads(json.dumps(doc, sort_keys=True))
    resolved["_resolved"] = {
        "command": command,
        "out_dir": str(out_dir),
        **extra,
    }
    return resolved
