import itertools

import numpy as np
import pytest

from mblmc import standard_params
from mblmc.floquet import DisorderRealization, IntegratorConfig


def pytest_runtest_logreport(report):
    if report.when == "call" and "acceptance" in report.keywords:
        name = report.nodeid.split("::")[-1]
        outcome = "PASS" if report.passed else "FAIL"
        print(f"\n[ACCEPTANCE] {name}: {outcome}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def fixed_steps():
    return IntegratorConfig(steps_per_period=128, tolerance=1e-8, adaptive=False)


def random_state(n_qubits: int, rng: np.random.Generator):
    from mblmc import QuantumState

    amps = rng.normal(size=2**n_qubits) + 1j * rng.normal(size=2**n_qubits)
    amps /= np.linalg.norm(amps)
    return QuantumState(n_qubits, amps)


def all_bitstrings(n: int):
    return itertools.product((0, 1), repeat=n)


# independent cost oracles, written from the problem statements, not the package


def independence_number(n_vertices: int, edges) -> int:
    best = 0
    for bits in all_bitstrings(n_vertices):
        chosen = [v for v in range(n_vertices) if bits[v]]
        ok = all(
            not (u in chosen and v in chosen) for (u, v) in edges
        )
        if ok:
            best = max(best, len(chosen))
    return best


def cut_size(bits, edges) -> int:
    return sum(1 for (u, v) in edges if bits[u] != bits[v])


def mis_cost_direct(bits, n_vertices, edges) -> float:
    conflict = sum(1 for (u, v) in edges if bits[u] and bits[v])
    return -sum(bits) + 2.0 * conflict


def factoring_cost_direct(bits, m: int, n_bits: int) -> float:
    p = sum(bits[i] << i for i in range(n_bits))
    q = sum(bits[n_bits + i] << i for i in range(n_bits))
    return float(p * p * q * q - 2 * m * p * q)


def small_params(n_qubits=3, w_over_j=10.0, seed=1):
    params = standard_params(n_qubits, w_over_j=w_over_j)
    disorder = DisorderRealization(
        np.random.default_rng(seed).uniform(-params.w / 2, params.w / 2, n_qubits)
    )
    return params, disorder
