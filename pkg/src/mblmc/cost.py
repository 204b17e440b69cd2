"""Diagonal k-body cost Hamiltonians as pseudo-Boolean polynomials.

Two variable conventions are supported and interconvertible:
  zpauli  -- each factor is z_j = 1 - 2*b_j (Pauli-Z eigenvalue on bit j)
  binary  -- each factor is x_j = b_j
The conversion x_j = (1 - z_j)/2 is exact; constant offsets live in the
empty-support term.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .qstate import index_to_bits

DIAGONAL_QUBIT_GUARD = 24
GIBBS_EXPONENT_GUARD = 700.0

ZPAULI = "zpauli"
BINARY = "binary"


class SizeGuardError(ValueError):
    pass


class GibbsOverflowError(OverflowError):
    pass


@dataclass(frozen=True)
class KBodyHamiltonian:
    """Sparse diagonal Hamiltonian: sum of coeff * prod_{j in support} v_j."""

    n_qubits: int
    terms: tuple[tuple[tuple[int, ...], float], ...]
    convention: str = ZPAULI

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        if self.convention not in (ZPAULI, BINARY):
            raise ValueError(f"unknown convention {self.convention!r}")
        merged: dict[tuple[int, ...], float] = {}
        for support, coeff in self.terms:
            support = tuple(sorted(set(int(j) for j in support)))
            if support and (support[0] < 0 or support[-1] >= self.n_qubits):
                raise IndexError(
                    f"term support {support} out of range for "
                    f"{self.n_qubits} qubits"
                )
            merged[support] = merged.get(support, 0.0) + float(coeff)
        object.__setattr__(
            self,
            "terms",
            tuple(sorted((s, c) for s, c in merged.items() if c != 0.0)),
        )

    @property
    def max_order(self) -> int:
        return max((len(s) for s, _ in self.terms), default=0)


def evaluate(hamiltonian: KBodyHamiltonian, bits) -> float:
    """Cost of a single bitstring."""
    bits = tuple(bits)
    if len(bits) != hamiltonian.n_qubits:
        raise IndexError(
            f"bitstring of length {len(bits)} for {hamiltonian.n_qubits} qubits"
        )
    binary = hamiltonian.convention == BINARY
    total = 0.0
    for support, coeff in hamiltonian.terms:
        prod = 1.0
        for j in support:
            v = bits[j] if binary else 1.0 - 2.0 * bits[j]
            prod *= v
            if prod == 0.0:
                break
        total += coeff * prod
    return total


def diagonal(hamiltonian: KBodyHamiltonian) -> np.ndarray:
    """Dense diagonal over all 2**N basis states, entry b = evaluate(H, b)."""
    n = hamiltonian.n_qubits
    if n > DIAGONAL_QUBIT_GUARD:
        raise SizeGuardError(
            f"dense diagonal limited to {DIAGONAL_QUBIT_GUARD} qubits, got {n}"
        )
    dim = 1 << n
    idx = np.arange(dim, dtype=np.uint64)
    out = np.zeros(dim, dtype=float)
    binary = hamiltonian.convention == BINARY
    for support, coeff in hamiltonian.terms:
        if not support:
            out += coeff
            continue
        mask = np.uint64(0)
        for j in support:
            mask |= np.uint64(1) << np.uint64(j)
        masked = idx & mask
        if binary:
            out += np.where(masked == mask, coeff, 0.0)
        else:
            parity = (np.bitwise_count(masked) & np.uint64(1)).astype(bool)
            out += np.where(parity, -coeff, coeff)
    return out


def _convert(hamiltonian: KBodyHamiltonian, target: str) -> KBodyHamiltonian:
    # substitute x_j = (1 - z_j)/2 (or z_j = 1 - 2 x_j) and expand over subsets
    from itertools import combinations

    new_terms: dict[tuple[int, ...], float] = {}
    to_binary = target == BINARY
    for support, coeff in hamiltonian.terms:
        k = len(support)
        for r in range(k + 1):
            for subset in combinations(support, r):
                if to_binary:
                    c = coeff * (-2.0) ** r
                else:
                    c = coeff * (-1.0) ** r / 2.0**k
                new_terms[subset] = new_terms.get(subset, 0.0) + c
    return KBodyHamiltonian(
        hamiltonian.n_qubits, tuple(new_terms.items()), convention=target
    )


def to_binary(hamiltonian: KBodyHamiltonian) -> KBodyHamiltonian:
    if hamiltonian.convention == BINARY:
        return hamiltonian
    return _convert(hamiltonian, BINARY)


def to_zpauli(hamiltonian: KBodyHamiltonian) -> KBodyHamiltonian:
    if hamiltonian.convention == ZPAULI:
        return hamiltonian
    return _convert(hamiltonian, ZPAULI)


# --- graphs ----------------------------------------------------------------


@dataclass(frozen=True)
class Graph:
    n_vertices: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n_vertices < 1:
            raise ValueError("graph needs at least one vertex")
        norm = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise ValueError(f"edge ({u},{v}) out of range")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)


def erdos_renyi(n_vertices: int, edge_probability: float, seed: int) -> Graph:
    """G(n, p) with each pair (i, j), i<j in lexicographic order, included
    independently. Deterministic for a given seed."""
    if not 0.0 <= edge_probability <= 1.0:
        raise ValueError(f"edge_probability must be in [0,1], got {edge_probability}")
    rng = np.random.default_rng(seed)
    edges = [
        (i, j)
        for i in range(n_vertices)
        for j in range(i + 1, n_vertices)
        if rng.random() < edge_probability
    ]
    return Graph(n_vertices, frozenset(edges))


def load_graph(path) -> Graph:
    """Plain-text graph: first line N, then one 'u v' pair per line (0-indexed)."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty graph file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ValueError(f"{path}: first line must be the vertex count") from None
    edges = set()
    for ln_no, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{ln_no}: expected 'u v', got {ln!r}")
        edges.add((int(parts[0]), int(parts[1])))
    return Graph(n, frozenset(edges))


def save_graph(graph: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{graph.n_vertices}\n")
        for u, v in sorted(graph.edges):
            fh.write(f"{u} {v}\n")


# --- problem Hamiltonians ---------------------------------------------------


def mis_hamiltonian(graph: Graph) -> KBodyHamiltonian:
    """Maximum-independent-set cost: -sum x_i + 2 sum_{edges} x_i x_j.

    The minimum is minus the independence number; every conflict-free
    selection of k vertices costs -k.
    """
    terms = [((v,), -1.0) for v in range(graph.n_vertices)]
    terms += [(e, 2.0) for e in graph.edges]
    return KBodyHamiltonian(graph.n_vertices, tuple(terms), convention=BINARY)


def maxcut_hamiltonian(graph: Graph) -> KBodyHamiltonian:
    """Max-cut cost: -sum deg(i) x_i + 2 sum_{edges} x_i x_j == -cut(x)."""
    terms = [((v,), -float(graph.degree(v))) for v in range(graph.n_vertices)]
    terms += [(e, 2.0) for e in graph.edges]
    return KBodyHamiltonian(graph.n_vertices, tuple(terms), convention=BINARY)


def factorization_hubo(m: int, n_bits: int) -> KBodyHamiltonian:
    """Least-squares factoring objective p**2 q**2 - 2 m p q over bit variables.

    p lives on qubits 0..n_bits-1, q on n_bits..2*n_bits-1, both little-endian.
    Reduction x_j**2 = x_j keeps the interaction order at most 4. The constant
    m**2 completing the square is dropped. The minimum -m**2 is attained
    exactly by factorizations p*q = m representable in n_bits.
    """
    if n_bits < 2:
        raise ValueError(f"n_bits must be >= 2, got {n_bits}")
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    if m < 2**n_bits:
        warnings.warn(
            f"m={m} is representable in {n_bits} bits; the trivial pair "
            f"(1, m) is then a valid assignment",
            stacklevel=2,
        )
    n = n_bits
    pq_terms: list[tuple[tuple[int, int], float]] = []
    for l in range(n):
        for k in range(n):
            pq_terms.append(((l, n + k), float(2 ** (l + k))))

    terms: dict[tuple[int, ...], float] = {}
    # p^2 q^2 = (pq)^2: products of pq monomials, squares reduced
    for (s1, c1) in pq_terms:
        for (s2, c2) in pq_terms:
            support = tuple(sorted(set(s1) | set(s2)))
            terms[support] = terms.get(support, 0.0) + c1 * c2
    for (s, c) in pq_terms:
        terms[s] = terms.get(s, 0.0) - 2.0 * m * c
    return KBodyHamiltonian(2 * n, tuple(terms.items()), convention=BINARY)


def decode_factor_pair(bits, n_bits: int) -> tuple[int, int]:
    bits = tuple(int(b) for b in bits)
    p = sum(bits[l] << l for l in range(n_bits))
    q = sum(bits[n_bits + l] << l for l in range(n_bits))
    return p, q


def brute_force_minima(hamiltonian: KBodyHamiltonian) -> tuple[float, set]:
    """Exhaustive scan; returns (min cost, all argmin bitstrings, ties included)."""
    diag = diagonal(hamiltonian)
    min_cost = float(diag.min())
    winners = np.flatnonzero(diag == min_cost)
    n = hamiltonian.n_qubits
    return min_cost, {index_to_bits(int(b), n) for b in winners}


# --- Gibbs observable --------------------------------------------------------


@dataclass(frozen=True)
class GibbsObservable:
    """Positive-definite diagonal observable exp(-beta * H).

    Energies are shifted by the exact minimum before exponentiation so the
    cached weights lie in (0, 1]; Metropolis ratios are unchanged by the shift.
    """

    beta: float
    hamiltonian: KBodyHamiltonian
    diag_cache: np.ndarray
    energy_shift: float

    @property
    def n_qubits(self) -> int:
        return self.hamiltonian.n_qubits


def gibbs_observable(hamiltonian: KBodyHamiltonian, beta: float) -> GibbsObservable:
    if beta <= 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    diag = diagonal(hamiltonian)
    e_min = float(diag.min())
    spread = beta * (float(diag.max()) - e_min)
    if spread > GIBBS_EXPONENT_GUARD:
        raise GibbsOverflowError(
            f"beta * (E_max - E_min) = {spread:.3g} exceeds "
            f"{GIBBS_EXPONENT_GUARD}; weights would underflow"
        )
    cache = np.exp(-beta * (diag - e_min))
    return GibbsObservable(beta, hamiltonian, cache, e_min)
