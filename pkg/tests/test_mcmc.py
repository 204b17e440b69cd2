import json
import math
from dataclasses import asdict

import numpy as np
import pytest

from mblmc import (
    ChainConfig,
    GibbsObservable,
    IntegratorConfig,
    KBodyHamiltonian,
    basis_state,
    brute_force_minima,
    cost_histogram,
    erdos_renyi,
    estimate_weight,
    gibbs_observable,
    metropolis_decide,
    mis_hamiltonian,
    mixing_time_lower_bound,
    required_shots,
    run_chain,
    standard_params,
    success_probability,
    trace_summary,
    write_trace_jsonl,
)
from mblmc.cost import Graph
from mblmc.mcmc import WeightUnderflowError, best_state_success
from conftest import random_state


def chain_config(n_qubits, w_over_j=200.0, beta=1.0, max_iters=10, seed=0, **kw):
    return ChainConfig(
        floquet=standard_params(n_qubits, w_over_j=w_over_j),
        integrator=IntegratorConfig(steps_per_period=64, adaptive=False),
        beta=beta,
        max_iters=max_iters,
        master_seed=seed,
        **kw,
    )


class TestMetropolisDecide:
    def test_equal_weights_always_accepted(self, rng):
        accepted, q = metropolis_decide(0.4, 0.4, rng)
        assert accepted and q == 1.0

    def test_uphill_always_accepted(self, rng):
        accepted, q = metropolis_decide(0.3, 0.6, rng)
        assert accepted and q == 2.0

    def test_downhill_uses_uniform_draw(self):
        # 1-qubit H = diag(0, 1), beta = 1, move |0> -> |1>: q = exp(-1)
        h = KBodyHamiltonian(1, (((0,), 1.0),), convention="binary")
        obs = gibbs_observable(h, 1.0)
        w0 = estimate_weight(basis_state(1, [0]), obs)
        w1 = estimate_weight(basis_state(1, [1]), obs)
        q_expected = math.exp(-1.0)
        for seed in range(40):
            peek = np.random.default_rng(seed).random()
            accepted, q = metropolis_decide(w0, w1, np.random.default_rng(seed))
            assert q == pytest.approx(q_expected)
            assert accepted == (peek < q_expected)

    def test_nonpositive_weight_rejected(self, rng):
        with pytest.raises(ValueError):
            metropolis_decide(0.0, 1.0, rng)
        with pytest.raises(ValueError):
            metropolis_decide(1.0, -0.5, rng)


class TestEstimateWeight:
    def test_exact_on_basis_state(self):
        obs = gibbs_observable(mis_hamiltonian(Graph(2, frozenset({(0, 1)}))), 2.0)
        st = basis_state(2, [1, 0])
        assert estimate_weight(st, obs) == obs.diag_cache[1]

    def test_single_shot_on_basis_state(self, rng):
        obs = gibbs_observable(mis_hamiltonian(Graph(2, frozenset({(0, 1)}))), 2.0)
        st = basis_state(2, [0, 1])
        est = estimate_weight(st, obs, mode="shots", shots=1, rng=rng)
        assert est == obs.diag_cache[2]

    def test_shot_estimate_clt_band(self, rng):
        h = mis_hamiltonian(erdos_renyi(5, 0.5, 2))
        obs = gibbs_observable(h, 1.5)
        st = random_state(5, rng)
        exact = estimate_weight(st, obs)
        probs = st.born_probabilities()
        sigma = math.sqrt(
            float(probs @ obs.diag_cache**2) - exact**2
        )
        k = 1_000_000
        est = estimate_weight(
            st, obs, mode="shots", shots=k, rng=np.random.default_rng(11)
        )
        assert abs(est - exact) < 5 * sigma / math.sqrt(k)

    def test_shot_estimator_unbiased(self, rng):
        h = mis_hamiltonian(erdos_renyi(5, 0.5, 2))
        obs = gibbs_observable(h, 1.5)
        st = random_state(5, rng)
        exact = estimate_weight(st, obs)
        probs = st.born_probabilities()
        sigma = math.sqrt(float(probs @ obs.diag_cache**2) - exact**2)
        reps, k = 1000, 100
        estimates = [
            estimate_weight(
                st, obs, mode="shots", shots=k, rng=np.random.default_rng(1000 + i)
            )
            for i in range(reps)
        ]
        assert abs(np.mean(estimates) - exact) < 3 * sigma / math.sqrt(reps * k)

    def test_underflow_error(self, rng):
        zero_obs = GibbsObservable(
            beta=1.0,
            hamiltonian=KBodyHamiltonian(1, ()),
            diag_cache=np.zeros(2),
            energy_shift=0.0,
        )
        with pytest.raises(WeightUnderflowError):
            estimate_weight(
                basis_state(1, [0]), zero_obs, mode="shots", shots=4, rng=rng
            )


class TestRunChain:
    def test_constant_hamiltonian_accepts_everything(self):
        obs = gibbs_observable(KBodyHamiltonian(3, ()), 1.0)
        trace = run_chain(chain_config(3, max_iters=1), obs, set())
        assert trace.acceptance_rate == 1.0
        # q equals one up to the unitary's norm rounding
        assert trace.records[0].metropolis_ratio_q == pytest.approx(1.0, abs=1e-12)

    def test_cached_equals_full_replay(self):
        g = erdos_renyi(9, 0.7, 7)
        h = mis_hamiltonian(g)
        obs = gibbs_observable(h, 3.0)
        _, sols = brute_force_minima(h)
        traces = {}
        for mode in ("cached_state", "full_replay"):
            cfg = chain_config(
                9, beta=3.0, max_iters=50, seed=21, replay_mode=mode
            )
            traces[mode] = run_chain(cfg, obs, sols)
        recs_a = [asdict(r) for r in traces["cached_state"].records]
        recs_b = [asdict(r) for r in traces["full_replay"].records]
        assert recs_a == recs_b
        assert np.array_equal(
            traces["cached_state"].final_state.amplitudes,
            traces["full_replay"].final_state.amplitudes,
        )

    def test_trace_is_deterministic(self):
        h = mis_hamiltonian(erdos_renyi(4, 0.5, 1))
        obs = gibbs_observable(h, 2.0)
        _, sols = brute_force_minima(h)
        t1 = run_chain(chain_config(4, max_iters=25, seed=5), obs, sols)
        t2 = run_chain(chain_config(4, max_iters=25, seed=5), obs, sols)
        assert [asdict(r) for r in t1.records] == [asdict(r) for r in t2.records]
        assert np.array_equal(t1.final_state.amplitudes, t2.final_state.amplitudes)

    def test_acceptance_rate_counts_records(self):
        h = mis_hamiltonian(erdos_renyi(4, 0.5, 1))
        obs = gibbs_observable(h, 2.0)
        trace = run_chain(chain_config(4, max_iters=30, seed=2), obs, set())
        accepted = sum(r.accepted for r in trace.records)
        assert trace.acceptance_rate == accepted / 30

    def test_accepted_records_carry_proposal_values(self):
        h = mis_hamiltonian(erdos_renyi(5, 0.6, 3))
        obs = gibbs_observable(h, 2.0)
        _, sols = brute_force_minima(h)
        trace = run_chain(chain_config(5, max_iters=40, seed=9), obs, sols)
        assert any(r.accepted for r in trace.records)
        assert any(not r.accepted for r in trace.records)
        last_mass = None
        for rec in trace.records:
            if rec.accepted:
                assert rec.post_cost_expectation == rec.proposal_cost_expectation
                last_mass = rec.post_solution_mass
            elif last_mass is not None:
                assert rec.post_solution_mass == last_mass

    def test_constant_shift_leaves_decisions(self):
        h = mis_hamiltonian(erdos_renyi(5, 0.6, 3))
        shifted = KBodyHamiltonian(5, h.terms + (((), 11.0),), convention="binary")
        dec = []
        for ham in (h, shifted):
            obs = gibbs_observable(ham, 2.0)
            trace = run_chain(chain_config(5, max_iters=30, seed=4), obs, set())
            dec.append([r.accepted for r in trace.records])
        assert dec[0] == dec[1]

    def test_shots_mode_runs(self):
        h = mis_hamiltonian(erdos_renyi(3, 0.5, 0))
        obs = gibbs_observable(h, 1.0)
        cfg = chain_config(
            3, max_iters=15, seed=1, estimator_mode="shots", estimator_shots=64
        )
        trace = run_chain(cfg, obs, set())
        assert len(trace.records) == 15

    def test_dimension_mismatch(self):
        obs = gibbs_observable(mis_hamiltonian(erdos_renyi(3, 0.5, 0)), 1.0)
        with pytest.raises(ValueError):
            run_chain(chain_config(4, max_iters=5), obs, set())


class TestSuccessProbability:
    def test_limits(self):
        assert best_state_success(0.0, 10_000) == 0.0
        assert best_state_success(1.0, 3) == 1.0

    def test_direct_evaluation(self):
        expected = 1.0 - (1.0 - 1e-4) ** 10_000
        assert best_state_success(1e-4, 10_000) == pytest.approx(expected, rel=1e-12)
        assert best_state_success(1e-4, 10_000) == pytest.approx(0.632, abs=5e-4)

    def test_from_trace(self):
        h = mis_hamiltonian(erdos_renyi(4, 0.5, 1))
        obs = gibbs_observable(h, 2.0)
        _, sols = brute_force_minima(h)
        trace = run_chain(chain_config(4, max_iters=20, seed=3), obs, sols)
        p_star = max(r.post_solution_mass for r in trace.records)
        assert success_probability(trace, 100) == pytest.approx(
            1 - (1 - p_star) ** 100
        )


class TestShotBudget:
    def test_substitution(self):
        assert required_shots(1.0, 0.1, 0.05) == 2000

    def test_degenerate_distribution(self):
        assert required_shots(0.0, 0.1, 0.05) == 0

    def test_variance_bound_case(self):
        sigma_sq = math.exp(-2 * 1.0 * (-3.0))  # exp(6)
        assert sigma_sq == pytest.approx(403.4288, abs=1e-4)
        assert required_shots(sigma_sq, 0.5, 0.1) == math.ceil(sigma_sq / 0.025)

    def test_validation(self):
        with pytest.raises(ValueError):
            required_shots(1.0, 0.0, 0.5)
        with pytest.raises(ValueError):
            required_shots(1.0, 0.1, 1.0)


class TestMixingTime:
    def test_always_accepting(self):
        assert mixing_time_lower_bound(1.0, 0.01) == 0.0

    def test_half_acceptance(self):
        assert mixing_time_lower_bound(0.5, 0.01) == pytest.approx(math.log(100))

    def test_low_acceptance(self):
        assert mixing_time_lower_bound(0.01, 0.01) == pytest.approx(
            math.log(100) * 99, abs=1e-9
        )
        assert mixing_time_lower_bound(0.01, 0.01) == pytest.approx(455.9, abs=0.1)

    def test_zero_acceptance_error(self):
        with pytest.raises(ValueError):
            mixing_time_lower_bound(0.0, 0.01)


class TestCostHistogram:
    def test_basis_state_single_bin(self):
        h = mis_hamiltonian(Graph(2, frozenset({(0, 1)})))
        hist = cost_histogram(basis_state(2, [1, 0]), h)
        assert hist == {-1.0: 1.0}

    def test_uniform_two_qubit_single_edge(self):
        from mblmc import QuantumState

        h = mis_hamiltonian(Graph(2, frozenset({(0, 1)})))
        st = QuantumState(2, np.full(4, 0.5, dtype=complex))
        hist = cost_histogram(st, h)
        assert hist[0.0] == pytest.approx(0.5)
        assert hist[-1.0] == pytest.approx(0.5)

    def test_total_mass_one(self, rng):
        h = mis_hamiltonian(erdos_renyi(5, 0.5, 7))
        st = random_state(5, rng)
        hist = cost_histogram(st, h)
        assert sum(hist.values()) == pytest.approx(1.0, abs=1e-9)


class TestSerialization:
    def test_jsonl_round_trip(self, tmp_path):
        h = mis_hamiltonian(erdos_renyi(4, 0.5, 1))
        obs = gibbs_observable(h, 2.0)
        _, sols = brute_force_minima(h)
        trace = run_chain(chain_config(4, max_iters=12, seed=6), obs, sols)
        path = tmp_path / "trace.jsonl"
        write_trace_jsonl(trace, path)
        lines = path.read_text().splitlines()
        assert len(lines) == 12
        parsed = [json.loads(ln) for ln in lines]
        assert parsed[0]["index"] == 1
        assert [p["accepted"] for p in parsed] == [
            r.accepted for r in trace.records
        ]

    def test_summary_fields(self):
        h = mis_hamiltonian(erdos_renyi(4, 0.5, 1))
        obs = gibbs_observable(h, 2.0)
        _, sols = brute_force_minima(h)
        trace = run_chain(chain_config(4, max_iters=12, seed=6), obs, sols)
        summary = trace_summary(trace, shot_budgets=(100, 10_000), checkpoints=(5, 12))
        assert summary["acceptance_rate"] == trace.acceptance_rate
        assert set(summary["success_probability"]) == {"5", "12"}
        assert set(summary["success_probability"]["5"]) == {"100", "10000"}
        p5 = max(r.post_solution_mass for r in trace.records[:5])
        assert summary["success_probability"]["5"]["100"] == pytest.approx(
            best_state_success(p5, 100)
        )
