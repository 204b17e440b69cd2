"""Factor an integer by sampling a 4-body cost Hamiltonian.

The least-squares objective (pq - m)^2 expands to a quartic pseudo-Boolean
polynomial over the bits of p and q; no reduction to quadratic form is needed
because the chain only ever evaluates the cost on measured bitstrings.
"""

import numpy as np

from mblmc import (
    ChainConfig,
    IntegratorConfig,
    brute_force_minima,
    factorization_hubo,
    gibbs_observable,
    run_chain,
    standard_params,
    success_probability,
)
from mblmc.cost import decode_factor_pair

M, N_BITS = 15, 3
hamiltonian = factorization_hubo(M, N_BITS)
min_cost, solutions = brute_force_minima(hamiltonian)
pairs = sorted(decode_factor_pair(b, N_BITS) for b in solutions)
print(f"factoring {M} with {2 * N_BITS} qubits")
print(f"interaction order {hamiltonian.max_order}, {len(hamiltonian.terms)} terms")
print(f"brute-force optimum {min_cost:g} at {pairs}\n")

cfg = ChainConfig(
    floquet=standard_params(2 * N_BITS, w_over_j=200.0),
    integrator=IntegratorConfig(steps_per_period=256, adaptive=False),
    beta=0.05,
    max_iters=800,
    master_seed=3,
)
trace = run_chain(cfg, gibbs_observable(hamiltonian, cfg.beta), solutions)

best = max(r.post_solution_mass for r in trace.records)
print(f"chain of {cfg.max_iters} moves, acceptance rate {trace.acceptance_rate:.2f}")
print(f"best solution mass visited: {best:.4f}")
for budget in (100, 1_000, 10_000):
    print(f"  P(hit a factor pair | {budget:>6} measurements) = "
          f"{success_probability(trace, budget):.4f}")

counts = {}
rng = np.random.default_rng(0)
from mblmc import sample_bitstrings

for bits in sample_bitstrings(trace.final_state, 20, rng):
    counts[decode_factor_pair(bits, N_BITS)] = counts.get(
        decode_factor_pair(bits, N_BITS), 0
    ) + 1
print(f"\n20 measurements of the final state decode to: {counts}")
