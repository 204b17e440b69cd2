"""Metropolis chain over quantum states with one-period Floquet proposals.

Each iteration draws a fresh disorder realization, evolves the current state
through one driving period, estimates the Gibbs weight <psi|exp(-beta H)|psi>
(exactly or from a finite number of measurements), and accepts or rejects the
move by the Metropolis rule. Rejected proposals count as iterations.

All randomness is derived from the chain's master seed: iteration i uses
independent child streams for the disorder draw, the weight estimator, and
the accept/reject draw, so a rejected-and-replayed chain reproduces a cached
chain bit for bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict

import numpy as np

from .cost import GibbsObservable, KBodyHamiltonian, diagonal
from .floquet import (
    FloquetParams,
    IntegratorConfig,
    draw_disorder,
    apply_period,
)
from .qstate import (
    QuantumState,
    basis_state,
    bits_to_index,
    expectation_diagonal,
    sample_indices,
)

CACHED_STATE = "cached_state"
FULL_REPLAY = "full_replay"
EXACT = "exact"
SHOTS = "shots"

_STREAM_DISORDER = 0
_STREAM_ESTIMATOR = 1
_STREAM_DECISION = 2
_INIT_ITERATION = 0


class WeightUnderflowError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ChainConfig:
    floquet: FloquetParams
    integrator: IntegratorConfig
    beta: float
    max_iters: int
    estimator_mode: str = EXACT
    estimator_shots: int = 0
    replay_mode: str = CACHED_STATE
    master_seed: int = 0

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.beta <= 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if self.estimator_mode not in (EXACT, SHOTS):
            raise ValueError(f"unknown estimator mode {self.estimator_mode!r}")
        if self.estimator_mode == SHOTS and self.estimator_shots < 1:
            raise ValueError("shots mode needs estimator_shots >= 1")
        if self.replay_mode not in (CACHED_STATE, FULL_REPLAY):
            raise ValueError(f"unknown replay mode {self.replay_mode!r}")


@dataclass(frozen=True)
class IterationRecord:
    index: int
    proposal_cost_expectation: float
    metropolis_ratio_q: float
    accepted: bool
    post_cost_expectation: float
    post_solution_mass: float
    disorder_seed: int


@dataclass(frozen=True)
class ChainTrace:
    config: ChainConfig
    records: tuple[IterationRecord, ...]
    acceptance_rate: float
    final_state: QuantumState


def derived_seed(master_seed: int, iteration: int, stream: int) -> int:
    """Stable 64-bit child seed for (iteration, stream) under one master seed."""
    ss = np.random.SeedSequence(
        entropy=int(master_seed) % (1 << 64), spawn_key=(iteration, stream)
    )
    return int(ss.generate_state(1, np.uint64)[0])


def _stream_rng(master_seed: int, iteration: int, stream: int) -> np.random.Generator:
    return np.random.default_rng(derived_seed(master_seed, iteration, stream))


def metropolis_decide(
    current_weight: float, proposal_weight: float, rng: np.random.Generator
) -> tuple[bool, float]:
    """Accept iff q = proposal/current >= 1, else with probability q.

    The uniform draw happens only on the q < 1 branch.
    """
    if current_weight <= 0 or proposal_weight <= 0:
        raise ValueError(
            f"weights must be positive, got current={current_weight!r} "
            f"proposal={proposal_weight!r}"
        )
    q = proposal_weight / current_weight
    if q >= 1.0:
        return True, q
    return bool(rng.random() < q), q


def estimate_weight(
    state: QuantumState,
    obs: GibbsObservable,
    mode: str = EXACT,
    shots: int = 0,
    rng: np.random.Generator | None = None,
) -> float:
    """<state|exp(-beta H)|state>, exact or as a K-measurement sample mean."""
    if mode == EXACT:
        return expectation_diagonal(state, obs.diag_cache)
    if mode != SHOTS:
        raise ValueError(f"unknown estimator mode {mode!r}")
    if shots < 1:
        raise ValueError(f"shots mode needs shots >= 1, got {shots}")
    if rng is None:
        raise ValueError("shots mode needs an rng")
    idx = sample_indices(state, shots, rng)
    est = float(obs.diag_cache[idx].mean())
    if est == 0.0:
        raise WeightUnderflowError(
            f"all {shots} sampled weights underflowed; beta={obs.beta} is too "
            f"large for this shot budget"
        )
    return est


def run_chain(cfg: ChainConfig, obs: GibbsObservable, solutions) -> ChainTrace:
    """Full Metropolis loop from |0...0>; see the module docstring.

    solutions: bitstrings whose pooled Born mass is recorded per iteration
    (pass an empty set when no target set is known).
    """
    params = cfg.floquet
    n = params.n_qubits
    if obs.n_qubits != n:
        raise ValueError(
            f"observable has {obs.n_qubits} qubits, chain has {n}"
        )
    cost_diag = diagonal(obs.hamiltonian)
    sol_idx = np.asarray(
        sorted(bits_to_index(tuple(b)) for b in solutions), dtype=np.int64
    )

    def mass(state: QuantumState) -> float:
        if sol_idx.size == 0:
            return 0.0
        return float(state.born_probabilities()[sol_idx].sum())

    state = basis_state(n, (0,) * n)
    current_weight = estimate_weight(
        state,
        obs,
        cfg.estimator_mode,
        cfg.estimator_shots,
        _stream_rng(cfg.master_seed, _INIT_ITERATION, _STREAM_ESTIMATOR),
    )
    current_cost = expectation_diagonal(state, cost_diag)
    current_mass = mass(state)

    accepted_seeds: list[int] = []
    records: list[IterationRecord] = []
    n_accepted = 0

    for i in range(1, cfg.max_iters + 1):
        dseed = derived_seed(cfg.master_seed, i, _STREAM_DISORDER)
        disorder = draw_disorder(params, np.random.default_rng(dseed))
        proposal = apply_period(state, params, disorder, cfg.integrator)
        proposal_weight = estimate_weight(
            proposal,
            obs,
            cfg.estimator_mode,
            cfg.estimator_shots,
            _stream_rng(cfg.master_seed, i, _STREAM_ESTIMATOR),
        )
        accepted, q = metropolis_decide(
            current_weight,
            proposal_weight,
            _stream_rng(cfg.master_seed, i, _STREAM_DECISION),
        )
        proposal_cost = expectation_diagonal(proposal, cost_diag)

        if accepted:
            n_accepted += 1
            accepted_seeds.append(dseed)
            state = proposal
            current_weight = proposal_weight
            current_cost = proposal_cost
            current_mass = mass(proposal)
        elif cfg.replay_mode == FULL_REPLAY:
            state = _replay(params, cfg.integrator, accepted_seeds)

        records.append(
            IterationRecord(
                index=i,
                proposal_cost_expectation=proposal_cost,
                metropolis_ratio_q=q,
                accepted=accepted,
                post_cost_expectation=current_cost,
                post_solution_mass=current_mass,
                disorder_seed=dseed,
            )
        )

    return ChainTrace(
        config=cfg,
        records=tuple(records),
        acceptance_rate=n_accepted / cfg.max_iters,
        final_state=state,
    )


def _replay(
    params: FloquetParams, integrator: IntegratorConfig, accepted_seeds
) -> QuantumState:
    # rebuild the post state by reapplying every accepted period from scratch
    state = basis_state(params.n_qubits, (0,) * params.n_qubits)
    for seed in accepted_seeds:
        disorder = draw_disorder(params, np.random.default_rng(seed))
        state = apply_period(state, params, disorder, integrator)
    return state


# --- diagnostics ---------------------------------------------------------------


def success_probability(trace: ChainTrace, shot_budget: int) -> float:
    """1 - (1 - p*)^budget with p* the best recorded solution mass."""
    if not trace.records:
        raise ValueError("empty trace")
    if shot_budget < 1:
        raise ValueError(f"shot_budget must be >= 1, got {shot_budget}")
    p_star = max(r.post_solution_mass for r in trace.records)
    return best_state_success(p_star, shot_budget)


def best_state_success(p_star: float, shot_budget: int) -> float:
    if p_star >= 1.0:
        return 1.0
    if p_star <= 0.0:
        return 0.0
    return -math.expm1(shot_budget * math.log1p(-p_star))


def required_shots(sigma_sq: float, epsilon: float, delta: float) -> int:
    """Chebyshev measurement budget: ceil(sigma^2 / (epsilon^2 delta))."""
    if sigma_sq < 0:
        raise ValueError(f"sigma_sq must be >= 0, got {sigma_sq}")
    if epsilon <= 0 or not 0 < delta < 1:
        raise ValueError("need epsilon > 0 and delta in (0, 1)")
    return math.ceil(sigma_sq / (epsilon**2 * delta))


def mixing_time_lower_bound(acceptance_t: float, epsilon: float) -> float:
    """ln(1/eps) * (1/T - 1), with the empirical acceptance rate standing in
    for the chain's acceptance functional."""
    if not 0.0 < acceptance_t <= 1.0:
        raise ValueError(
            f"acceptance rate must be in (0, 1], got {acceptance_t}"
        )
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    return math.log(1.0 / epsilon) * (1.0 / acceptance_t - 1.0)


def cost_histogram(state: QuantumState, hamiltonian: KBodyHamiltonian) -> dict[float, float]:
    """Born mass aggregated by cost value."""
    if hamiltonian.n_qubits != state.n_qubits:
        raise ValueError(
            f"hamiltonian has {hamiltonian.n_qubits} qubits, state {state.n_qubits}"
        )
    diag = diagonal(hamiltonian)
    probs = state.born_probabilities()
    values, inverse = np.unique(diag, return_inverse=True)
    sums = np.zeros(len(values))
    np.add.at(sums, inverse, probs)
    return {float(v): float(m) for v, m in zip(values, sums) if m > 0.0}


# --- trace serialization ---------------------------------------------------------

TRACE_FIELDS = [
    "index",
    "proposal_cost_expectation",
    "metropolis_ratio_q",
    "accepted",
    "post_cost_expectation",
    "post_solution_mass",
    "disorder_seed",
]


def write_trace_jsonl(trace: ChainTrace, path) -> None:
    """One JSON object per iteration record per line."""
    with open(path, "w") as fh:
        for rec in trace.records:
            fh.write(json.dumps(asdict(rec), sort_keys=True))
            fh.write("\n")


def trace_summary(trace: ChainTrace, shot_budgets=(), checkpoints=()) -> dict:
    """Aggregate chain statistics; success probabilities per checkpoint/budget."""
    if not trace.records:
        raise ValueError("empty trace")
    best_mass = max(r.post_solution_mass for r in trace.records)
    summary = {
        "iterations": len(trace.records),
        "acceptance_rate": trace.acceptance_rate,
        "best_solution_mass": best_mass,
        "final_cost_expectation": trace.records[-1].post_cost_expectation,
        "master_seed": trace.config.master_seed,
    }
    if shot_budgets:
        checkpoints = list(checkpoints) or [len(trace.records)]
        table: dict[str, dict[str, float]] = {}
        for stop in checkpoints:
            stop = min(stop, len(trace.records))
            p_star = max(r.post_solution_mass for r in trace.records[:stop])
            table[str(stop)] = {
                str(b): best_state_success(p_star, b) for b in shot_budgets
            }
        summary["success_probability"] = table
    return summary
