"""Watch the chain's cost expectation relax and histogram the sampled costs.

Runs a short chain on a small instance at two disorder strengths and prints
the trajectory of the cost expectation together with the final cost
histogram. (The command line does the same at scale and writes files:
see `mblmc thermalize`.)
"""

from mblmc import (
    ChainConfig,
    IntegratorConfig,
    brute_force_minima,
    cost_histogram,
    erdos_renyi,
    gibbs_observable,
    mis_hamiltonian,
    run_chain,
    standard_params,
)

graph = erdos_renyi(6, 0.7, seed=9)
hamiltonian = mis_hamiltonian(graph)
min_cost, solutions = brute_force_minima(hamiltonian)
obs = gibbs_observable(hamiltonian, beta=3.0)
print(f"6-qubit instance, optimum {min_cost:g}, {len(solutions)} solutions")

for w_over_j in (4.0, 200.0):
    cfg = ChainConfig(
        floquet=standard_params(6, w_over_j=w_over_j),
        integrator=IntegratorConfig(steps_per_period=256, adaptive=False),
        beta=3.0,
        max_iters=400,
        master_seed=2,
    )
    trace = run_chain(cfg, obs, solutions)
    marks = [trace.records[i].post_cost_expectation for i in (0, 49, 99, 199, 399)]
    print(f"\nW/J = {w_over_j:g}: acceptance rate {trace.acceptance_rate:.2f}")
    print("  <H> at iterations 1/50/100/200/400: "
          + "  ".join(f"{v:+.3f}" for v in marks))
    hist = cost_histogram(trace.final_state, hamiltonian)
    line = "  final histogram: "
    line += "  ".join(f"{c:+g}: {p:.3f}" for c, p in sorted(hist.items())[:5])
    print(line)
