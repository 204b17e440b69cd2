"""Dense state vectors for N-qubit pure states.

Basis convention: qubit j is the j-th least significant bit of the basis
index, so index(b) = sum_j b[j] * 2**j.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

Bitstring = tuple[int, ...]

NORM_TOL = 1e-9
SAMPLING_NORM_TOL = 1e-6


class DimensionMismatchError(ValueError):
    pass


class UnnormalizedStateError(ValueError):
    pass


@dataclass(frozen=True)
class QuantumState:
    """Value type holding 2**n_qubits complex amplitudes."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (2**self.n_qubits,):
            raise DimensionMismatchError(
                f"expected {2**self.n_qubits} amplitudes for {self.n_qubits} "
                f"qubits, got shape {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def born_probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def bits_to_index(bits) -> int:
    index = 0
    for j, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"bit {j} is {b}, expected 0 or 1")
        index |= int(b) << j
    return index


def index_to_bits(index: int, n_qubits: int) -> Bitstring:
    return tuple((index >> j) & 1 for j in range(n_qubits))


def basis_state(n_qubits: int, bits) -> QuantumState:
    """Computational basis state |bits>, amplitude 1 at index(bits)."""
    bits = tuple(bits)
    if len(bits) != n_qubits:
        raise DimensionMismatchError(
            f"got {len(bits)} bits for {n_qubits} qubits"
        )
    amps = np.zeros(2**n_qubits, dtype=np.complex128)
    amps[bits_to_index(bits)] = 1.0
    return QuantumState(n_qubits, amps)


def expectation_diagonal(state: QuantumState, diag) -> float:
    """<state| D |state> for a diagonal operator D given by its diagonal."""
    diag = np.asarray(diag, dtype=float)
    if diag.shape != (state.dim,):
        raise DimensionMismatchError(
            f"diagonal has shape {diag.shape}, expected ({state.dim},)"
        )
    return float(np.dot(state.born_probabilities(), diag))


def sample_indices(state: QuantumState, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Born-rule basis-index samples via inverse CDF on cumulative weights."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    probs = state.born_probabilities()
    total = probs.sum()
    if abs(total - 1.0) > SAMPLING_NORM_TOL:
        raise UnnormalizedStateError(
            f"state norm**2 = {total!r} deviates from 1 by more than "
            f"{SAMPLING_NORM_TOL}"
        )
    cum = np.cumsum(probs)
    cum[-1] = total  # guard against cumsum rounding above/below the total
    r = rng.random(shots) * total
    return np.searchsorted(cum, r, side="right").astype(np.int64)


def sample_bitstrings(state: QuantumState, shots: int, rng: np.random.Generator) -> np.ndarray:
    """shots i.i.d. Born-rule draws, one bitstring per row (qubit j = column j)."""
    idx = sample_indices(state, shots, rng)
    cols = np.arange(state.n_qubits, dtype=np.int64)
    return ((idx[:, None] >> cols) & 1).astype(np.uint8)


def solution_mass(state: QuantumState, solutions) -> float:
    """Total Born probability on a set of target bitstrings."""
    indices = []
    for bits in solutions:
        bits = tuple(bits)
        if len(bits) != state.n_qubits:
            raise DimensionMismatchError(
                f"solution of length {len(bits)} for {state.n_qubits} qubits"
            )
        indices.append(bits_to_index(bits))
    if not indices:
        return 0.0
    probs = state.born_probabilities()
    return float(probs[np.asarray(indices, dtype=np.int64)].sum())
