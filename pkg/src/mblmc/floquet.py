"""Disordered Floquet transverse-field Ising chain and its one-period propagator.

The chain Hamiltonian is
    H(t) = sum_i h_i Z_i + B(t) sum_i X_i + J sum_{i<N} Z_i Z_{i+1},
    B(t) = B0 + dB * cos(omega * t),
open boundaries, with on-site fields h_i drawn uniformly from [-W/2, W/2].

One period [0, T=2pi/omega] is integrated by Strang splitting between the
diagonal part (exact phases) and the transverse part (exact product of
single-qubit X rotations, with B evaluated at each step midpoint). Every
factor is unitary, so the propagator is unitary at any step count; the
splitting error is second order in the step size. Because B(t) is symmetric
about T/2, negating (J, B0, dB, h) reproduces the exact adjoint of the
discretized propagator, not merely an O(dt^2) approximation of it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import QuantumState

DENSE_QUBIT_GUARD = 12
ODE_ORACLE_QUBIT_GUARD = 6


class IntegratorConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class FloquetParams:
    n_qubits: int
    j: float
    b0: float
    delta_b: float
    omega: float
    w: float

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        if self.omega <= 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")
        if self.w < 0:
            raise ValueError(f"disorder strength must be >= 0, got {self.w}")

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.omega

    def transverse_field(self, t: float) -> float:
        return self.b0 + self.delta_b * np.cos(self.omega * t)

    def negated(self) -> "FloquetParams":
        return FloquetParams(
            self.n_qubits, -self.j, -self.b0, -self.delta_b, self.omega, self.w
        )


def standard_params(
    n_qubits: int,
    w_over_j: float,
    j: float = 4.15,
    b0_over_j: float = 1.25,
    delta_b_over_j: float = -1.25,
    omega_over_j: float = 10.0,
) -> FloquetParams:
    """Parameters given as ratios of the coupling J."""
    return FloquetParams(
        n_qubits=n_qubits,
        j=j,
        b0=b0_over_j * j,
        delta_b=delta_b_over_j * j,
        omega=omega_over_j * j,
        w=w_over_j * j,
    )


@dataclass(frozen=True)
class DisorderRealization:
    h: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "h", np.asarray(self.h, dtype=float))


@dataclass(frozen=True)
class IntegratorConfig:
    """Strang-splitting controls.

    With adaptive=True the step count starts at steps_per_period and doubles
    until the change between successive refinements drops below tolerance.
    With adaptive=False the propagator is the exact-unitary Strang product at
    steps_per_period steps (the right choice inside Markov chains, where
    proposals only need to be unitary and sign-reversible).
    """

    steps_per_period: int = 256
    tolerance: float = 1e-8
    adaptive: bool = True
    max_doublings: int = 16

    def __post_init__(self):
        if self.steps_per_period < 2:
            raise ValueError(
                f"steps_per_period must be >= 2, got {self.steps_per_period}"
            )
        if self.tolerance <= 0:
            raise ValueError(f"tolerance must be > 0, got {self.tolerance}")


@dataclass(frozen=True)
class RydbergParams:
    """Neutral-atom realization: spacing, drive amplitude bound, detunings."""

    spacing_a: float
    omega_drive_max: float
    detunings: np.ndarray
    c6: float

    def __post_init__(self):
        object.__setattr__(self, "detunings", np.asarray(self.detunings, dtype=float))


@dataclass(frozen=True)
class WeightedPauli:
    label: str  # "Z" | "X" | "ZZ"
    sites: tuple[int, ...]
    coefficient: float


def draw_disorder(params: FloquetParams, rng: np.random.Generator) -> DisorderRealization:
    """n_qubits i.i.d. uniform fields from [-W/2, W/2]."""
    half = params.w / 2.0
    return DisorderRealization(rng.uniform(-half, half, params.n_qubits))


def hamiltonian_at(
    params: FloquetParams, disorder: DisorderRealization, t: float
) -> list[WeightedPauli]:
    """Weighted Pauli terms of H(t); open chain, N-1 ZZ couplings."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    h = disorder.h
    if h.shape != (params.n_qubits,):
        raise ValueError(
            f"disorder has {h.shape[0]} fields for {params.n_qubits} qubits"
        )
    b = params.transverse_field(t)
    terms = [WeightedPauli("Z", (i,), float(h[i])) for i in range(params.n_qubits)]
    terms += [WeightedPauli("X", (i,), b) for i in range(params.n_qubits)]
    terms += [
        WeightedPauli("ZZ", (i, i + 1), params.j)
        for i in range(params.n_qubits - 1)
    ]
    return terms


def interaction_diagonal(params: FloquetParams, disorder: DisorderRealization) -> np.ndarray:
    """Diagonal of sum_i h_i Z_i + J sum Z_i Z_{i+1} over the 2**N basis."""
    n = params.n_qubits
    idx = np.arange(1 << n)
    z_prev = None
    out = np.zeros(1 << n)
    for i in range(n):
        z_i = 1.0 - 2.0 * ((idx >> i) & 1)
        out += disorder.h[i] * z_i
        if z_prev is not None:
            out += params.j * z_prev * z_i
        z_prev = z_i
    return out


# --- splitting engine --------------------------------------------------------

_BLOCK_BITS = 3


def _group_dims(n_qubits: int) -> list[int]:
    # most-significant bits first, matching C-order reshape of the state index
    dims = []
    left = n_qubits
    while left > 0:
        g = min(_BLOCK_BITS, left)
        dims.append(1 << g)
        left -= g
    return dims


def _x_rotation_blocks(thetas: np.ndarray, dims: list[int]) -> dict[int, np.ndarray]:
    """exp(-i theta X)^(x k) for every distinct block size, all steps at once."""
    c, s = np.cos(thetas), np.sin(thetas)
    r2 = np.empty((len(thetas), 2, 2), dtype=np.complex128)
    r2[:, 0, 0] = c
    r2[:, 1, 1] = c
    r2[:, 0, 1] = -1j * s
    r2[:, 1, 0] = -1j * s
    blocks = {2: r2}
    for d in sorted(set(dims)):
        while d not in blocks:
            have = max(b for b in blocks if b <= d)
            grown = np.einsum("kab,kcd->kacbd", blocks[have], r2).reshape(
                len(thetas), have * 2, have * 2
            )
            blocks[have * 2] = grown
    return blocks


def _apply_block_rotations(x, dims, blocks, k, scratch):
    """Uniform X rotation on the last axis of x, block by block.

    x and scratch ping-pong as matmul sources/destinations (no temporaries);
    both must be C-contiguous and disjoint. Returns (result, free_buffer).
    """
    lead = x.shape[:-1]
    total = x.shape[-1]
    src, dst = x, scratch
    pre = 1
    for d in dims:
        post = total // (pre * d)
        rot = blocks[d][k]
        if post == 1:
            np.matmul(
                src.reshape(lead + (pre, d)),
                rot.T,
                out=dst.reshape(lead + (pre, d)),
            )
        else:
            np.matmul(
                rot,
                src.reshape(lead + (pre, d, post)),
                out=dst.reshape(lead + (pre, d, post)),
            )
        src, dst = dst, src
        pre *= d
    return src, dst


def strang_period_map(
    x: np.ndarray,
    diag: np.ndarray,
    params: FloquetParams,
    steps: int,
    inverse: bool = False,
) -> np.ndarray:
    """Evolve the last axis of x through one driving period.

    x: (..., 2**N) array of state vectors (a matrix's rows evolve
    independently). diag must broadcast against x and hold the forward-sign
    interaction diagonal; inverse=True negates every Hamiltonian term, which
    for the symmetric drive equals the exact adjoint of the forward map.
    """
    sign = -1.0 if inverse else 1.0
    dt = params.period / steps
    half = np.exp(-0.5j * sign * dt * diag)
    full = half * half
    t_mid = (np.arange(steps) + 0.5) * dt
    thetas = sign * dt * (params.b0 + params.delta_b * np.cos(params.omega * t_mid))
    dims = _group_dims(params.n_qubits)
    blocks = _x_rotation_blocks(thetas, dims)
    x = x * half  # private working copy; in-place updates below never alias input
    scratch = np.empty_like(x)
    for k in range(steps):
        x, scratch = _apply_block_rotations(x, dims, blocks, k, scratch)
        x *= full if k < steps - 1 else half
    return x


def _converged_map(x0, diag, params, cfg: IntegratorConfig, inverse: bool):
    steps = cfg.steps_per_period
    prev = strang_period_map(x0, diag, params, steps, inverse)
    if not cfg.adaptive:
        return prev, steps
    for _ in range(cfg.max_doublings):
        steps *= 2
        cur = strang_period_map(x0, diag, params, steps, inverse)
        if np.max(np.abs(cur - prev)) < cfg.tolerance:
            return cur, steps
        prev = cur
    raise IntegratorConvergenceError(
        f"no convergence to {cfg.tolerance} within {cfg.max_doublings} "
        f"doublings from {cfg.steps_per_period} steps"
    )


def floquet_propagator(
    params: FloquetParams,
    disorder: DisorderRealization,
    cfg: IntegratorConfig,
    inverse: bool = False,
) -> np.ndarray:
    """Dense one-period propagator U (2**N x 2**N)."""
    if params.n_qubits > DENSE_QUBIT_GUARD:
        raise ValueError(
            f"dense propagator limited to {DENSE_QUBIT_GUARD} qubits, "
            f"got {params.n_qubits}"
        )
    dim = 1 << params.n_qubits
    diag = interaction_diagonal(params, disorder)
    eye = np.eye(dim, dtype=np.complex128)
    # rows evolve as independent states, so the result is U^T
    out, _ = _converged_map(eye, diag, params, cfg, inverse)
    return out.T


def apply_period(
    state: QuantumState,
    params: FloquetParams,
    disorder: DisorderRealization,
    cfg: IntegratorConfig,
    inverse: bool = False,
) -> QuantumState:
    """Matrix-free application of the one-period propagator (or its adjoint)."""
    if state.n_qubits != params.n_qubits:
        raise ValueError(
            f"state has {state.n_qubits} qubits, params {params.n_qubits}"
        )
    diag = interaction_diagonal(params, disorder)
    out, _ = _converged_map(state.amplitudes, diag, params, cfg, inverse)
    return QuantumState(state.n_qubits, out)


# --- independent reference propagator (used by tests and demos) -------------


def dense_hamiltonian(
    params: FloquetParams, disorder: DisorderRealization, t: float
) -> np.ndarray:
    dim = 1 << params.n_qubits
    h_mat = np.diag(interaction_diagonal(params, disorder).astype(np.complex128))
    b = params.transverse_field(t)
    idx = np.arange(dim)
    for jq in range(params.n_qubits):
        h_mat[idx, idx ^ (1 << jq)] += b
    return h_mat


def ode_reference_propagator(
    params: FloquetParams,
    disorder: DisorderRealization,
    rtol: float = 1e-12,
) -> np.ndarray:
    """High-accuracy dense propagator by direct integration of dU/dt = -iH(t)U.

    Deliberately independent of the splitting scheme; small systems only.
    """
    from scipy.integrate import solve_ivp

    if params.n_qubits > ODE_ORACLE_QUBIT_GUARD:
        raise ValueError(
            f"reference propagator limited to {ODE_ORACLE_QUBIT_GUARD} qubits"
        )
    dim = 1 << params.n_qubits
    diag = interaction_diagonal(params, disorder).astype(np.complex128)
    idx = np.arange(dim)
    flip = np.stack([idx ^ (1 << jq) for jq in range(params.n_qubits)])

    def rhs(t, y):
        u = y.reshape(dim, dim)
        b = params.transverse_field(t)
        hu = diag[:, None] * u
        for jq in range(params.n_qubits):
            hu += b * u[flip[jq]]
        return (-1j * hu).ravel()

    sol = solve_ivp(
        rhs,
        (0.0, params.period),
        np.eye(dim, dtype=np.complex128).ravel(),
        method="DOP853",
        rtol=rtol,
        atol=rtol,
    )
    if not sol.success:
        raise IntegratorConvergenceError(f"reference ODE solve failed: {sol.message}")
    return sol.y[:, -1].reshape(dim, dim)


def unitarity_defect(u: np.ndarray) -> float:
    """max-entry |U^dag U - I|."""
    dim = u.shape[0]
    return float(np.max(np.abs(u.conj().T @ u - np.eye(dim))))


# --- neutral-atom parameter translation --------------------------------------


def map_to_rydberg(
    params: FloquetParams, disorder: DisorderRealization, c6: float
) -> RydbergParams:
    """Translate chain parameters to atom spacing, drive bound, and detunings.

    Spacing follows from J = C6 / (4 a^6); the drive is Omega(t) = 2 B(t);
    detunings are 4J - 2 h_i in the bulk and 2J - 2 h_i on the two edge sites.
    """
    if params.j <= 0:
        raise ValueError(f"coupling J must be > 0 for the mapping, got {params.j}")
    if c6 <= 0:
        raise ValueError(f"C6 must be > 0, got {c6}")
    n = params.n_qubits
    h = disorder.h
    spacing = (c6 / (4.0 * params.j)) ** (1.0 / 6.0)
    omega_max = 2.0 * (params.b0 + abs(params.delta_b))
    detunings = np.empty(n)
    for i in range(n):
        edge = i == 0 or i == n - 1
        base = 2.0 * params.j if edge else 4.0 * params.j
        detunings[i] = base - 2.0 * h[i]
    return RydbergParams(spacing, omega_max, detunings, c6)
