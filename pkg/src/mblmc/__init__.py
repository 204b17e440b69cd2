"""Markov chain Monte Carlo over qubit states with disordered Floquet proposals."""

from .qstate import (
    QuantumState,
    basis_state,
    bits_to_index,
    expectation_diagonal,
    index_to_bits,
    sample_bitstrings,
    solution_mass,
)
from .cost import (
    Graph,
    GibbsObservable,
    KBodyHamiltonian,
    brute_force_minima,
    diagonal,
    erdos_renyi,
    evaluate,
    factorization_hubo,
    gibbs_observable,
    load_graph,
    maxcut_hamiltonian,
    mis_hamiltonian,
    save_graph,
    to_binary,
    to_zpauli,
)
from .floquet import (
    DisorderRealization,
    FloquetParams,
    IntegratorConfig,
    RydbergParams,
    apply_period,
    draw_disorder,
    floquet_propagator,
    hamiltonian_at,
    map_to_rydberg,
    ode_reference_propagator,
    standard_params,
    unitarity_defect,
)
from .mcmc import (
    ChainConfig,
    ChainTrace,
    IterationRecord,
    cost_histogram,
    estimate_weight,
    metropolis_decide,
    mixing_time_lower_bound,
    required_shots,
    run_chain,
    success_probability,
    trace_summary,
    write_trace_jsonl,
)
from .rmt import (
    BinnedDistribution,
    LevelSpacingSample,
    cue_pdf,
    eigenphases,
    haar_unitary,
    js_distance,
    poisson_pdf,
    product_ensemble,
    r_statistics,
)

__version__ = "0.1.0"
