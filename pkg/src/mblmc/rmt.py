"""Level-spacing statistics: r-values, Poisson/CUE references, JS distance.

The spacing ratio of a unitary with eigenphases theta_1 < ... < theta_D is
    r_n = min(d_n, d_{n+1}) / max(d_n, d_{n+1}),
with cyclic gaps d_n (the wrap-around gap 2*pi - (theta_D - theta_1) is
included), so D phases yield D gaps and D ratios.

Reference densities on [0, 1]:
    Poisson:  2 / (1 + r)^2
    CUE:      N^-1 * integral_0^{2pi/(1+r)} y sin^2(ry/2) sin^2(y/2)
              sin^2((1+r)y/2) dy
The CUE form resolves the delta constraint r = x/y of the underlying
two-gap distribution by the substitution x = r*y (Jacobian y); N makes it
integrate to one.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .floquet import (
    FloquetParams,
    IntegratorConfig,
    interaction_diagonal,
    DisorderRealization,
    draw_disorder,
    strang_period_map,
)

UNITARITY_TOL = 1e-8
PRODUCT_QUBIT_GUARD = 10
DEFAULT_BINS = 20


class NonUnitaryError(ValueError):
    pass


@dataclass(frozen=True)
class LevelSpacingSample:
    r_values: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.r_values, dtype=float)
        if r.size and (r.min() < 0.0 or r.max() > 1.0):
            raise ValueError("spacing ratios must lie in [0, 1]")
        object.__setattr__(self, "r_values", r)

    def mean(self) -> float:
        return float(self.r_values.mean())


@dataclass(frozen=True)
class BinnedDistribution:
    bin_edges: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        edges = np.asarray(self.bin_edges, dtype=float)
        masses = np.asarray(self.masses, dtype=float)
        if edges.ndim != 1 or len(edges) != len(masses) + 1:
            raise ValueError("need len(edges) == len(masses) + 1")
        if np.any(np.diff(edges) <= 0):
            raise ValueError("bin edges must be strictly increasing")
        if np.any(masses < 0):
            raise ValueError("masses must be nonnegative")
        if abs(masses.sum() - 1.0) > 1e-12:
            raise ValueError(f"masses sum to {masses.sum()!r}, expected 1")
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "masses", masses)


def eigenphases(u: np.ndarray) -> np.ndarray:
    """Sorted eigenvalue phases in [0, 2*pi) of a unitary matrix."""
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {u.shape}")
    defect = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if defect > UNITARITY_TOL:
        raise NonUnitaryError(f"unitarity defect {defect:.3g} exceeds {UNITARITY_TOL}")
    phases = np.angle(np.linalg.eigvals(u)) % (2.0 * np.pi)
    return np.sort(phases)


def r_statistics(phases: np.ndarray) -> LevelSpacingSample:
    """Cyclic consecutive-gap ratios; one r per phase. Zero gaps give r = 0."""
    phases = np.asarray(phases, dtype=float)
    if phases.size < 3:
        raise ValueError(f"need at least 3 phases, got {phases.size}")
    gaps = np.append(np.diff(phases), 2.0 * np.pi - (phases[-1] - phases[0]))
    nxt = np.roll(gaps, -1)
    lo = np.minimum(gaps, nxt)
    hi = np.maximum(gaps, nxt)
    r = np.zeros_like(lo)
    ok = hi > 0
    r[ok] = lo[ok] / hi[ok]
    return LevelSpacingSample(np.clip(r, 0.0, 1.0))


# --- reference densities ------------------------------------------------------


def poisson_pdf(r: float) -> float:
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"r must be in [0, 1], got {r}")
    return 2.0 / (1.0 + r) ** 2


def _cue_integrand_factory(r: float):
    def f(y: float) -> float:
        return (
            y
            * (np.sin(r * y / 2.0) * np.sin(y / 2.0) * np.sin((1.0 + r) * y / 2.0))
            ** 2
        )

    return f


def _cue_raw(r: float) -> float:
    if r <= 0.0:
        return 0.0
    upper = 2.0 * np.pi / (1.0 + r)
    val, _ = quad(_cue_integrand_factory(r), 0.0, upper, limit=200)
    return val


@lru_cache(maxsize=1)
def _cue_norm() -> float:
    val, _ = quad(_cue_raw, 0.0, 1.0, limit=200)
    return val


def cue_pdf(r: float) -> float:
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"r must be in [0, 1], got {r}")
    return _cue_raw(r) / _cue_norm()


def uniform_edges(n_bins: int = DEFAULT_BINS) -> np.ndarray:
    return np.linspace(0.0, 1.0, n_bins + 1)


def poisson_bin_masses(edges: np.ndarray) -> BinnedDistribution:
    """Exact per-bin integrals of the Poisson density."""
    edges = np.asarray(edges, dtype=float)
    masses = 2.0 / (1.0 + edges[:-1]) - 2.0 / (1.0 + edges[1:])
    return BinnedDistribution(edges, masses / masses.sum())


@lru_cache(maxsize=8)
def _cue_masses_cached(edges_key: tuple) -> np.ndarray:
    edges = np.asarray(edges_key)
    norm = _cue_norm()
    masses = np.array(
        [
            quad(_cue_raw, a, b, limit=200)[0] / norm
            for a, b in zip(edges[:-1], edges[1:])
        ]
    )
    return masses / masses.sum()


def cue_bin_masses(edges: np.ndarray) -> BinnedDistribution:
    """Per-bin quadrature of the CUE density (not midpoint sampling)."""
    edges = np.asarray(edges, dtype=float)
    return BinnedDistribution(edges, _cue_masses_cached(tuple(edges.tolist())))


def histogram(sample: LevelSpacingSample, edges: np.ndarray) -> BinnedDistribution:
    counts, _ = np.histogram(sample.r_values, bins=np.asarray(edges, dtype=float))
    total = counts.sum()
    if total == 0:
        raise ValueError("empty sample")
    return BinnedDistribution(edges, counts / total)


def js_distance(p: BinnedDistribution, q: BinnedDistribution) -> float:
    """Jensen-Shannon distance sqrt((KL(P,A) + KL(Q,A))/2), A the average.

    Natural logarithm, so disjoint supports give sqrt(ln 2). Empty bins
    contribute zero.
    """
    if not np.array_equal(p.bin_edges, q.bin_edges):
        raise ValueError("distributions use different bin edges")
    a = 0.5 * (p.masses + q.masses)

    def kl(x, y):
        m = x > 0
        return float(np.sum(x[m] * np.log(x[m] / y[m])))

    return float(np.sqrt(0.5 * (kl(p.masses, a) + kl(q.masses, a))))


# --- ensembles ----------------------------------------------------------------


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix with the
    R-diagonal phases fixed."""
    a = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(a)
    lam = np.diag(r)
    return q * (lam / np.abs(lam))


def haar_ensemble(dim: int, ensemble_size: int, rng: np.random.Generator) -> LevelSpacingSample:
    rs = [
        r_statistics(eigenphases(haar_unitary(dim, rng))).r_values
        for _ in range(ensemble_size)
    ]
    return LevelSpacingSample(np.concatenate(rs))


def product_ensemble(
    params: FloquetParams,
    cfg: IntegratorConfig,
    n_factors: int,
    ensemble_size: int,
    rng: np.random.Generator,
) -> LevelSpacingSample:
    """Pooled spacing ratios of products of n_factors one-period propagators.

    Each ensemble member draws its own i.i.d. disorder realizations from a
    child stream of rng, so results do not depend on internal batching. The
    accumulators hold the transposed products (rows evolve as states); the
    spectrum is transpose-invariant.
    """
    n = params.n_qubits
    if n > PRODUCT_QUBIT_GUARD:
        raise ValueError(
            f"product ensembles limited to {PRODUCT_QUBIT_GUARD} qubits, got {n}"
        )
    if n_factors < 1 or ensemble_size < 1:
        raise ValueError("n_factors and ensemble_size must be >= 1")
    dim = 1 << n
    children = rng.spawn(ensemble_size)
    fields = np.empty((ensemble_size, n_factors, n))
    for e, child in enumerate(children):
        for k in range(n_factors):
            fields[e, k] = draw_disorder(params, child).h

    chunk = max(1, (1 << 21) // (dim * dim))
    pooled = []
    for start in range(0, ensemble_size, chunk):
        stop = min(start + chunk, ensemble_size)
        acc = np.broadcast_to(
            np.eye(dim, dtype=np.complex128), (stop - start, dim, dim)
        ).copy()
        for k in range(n_factors):
            diags = np.stack(
                [
                    interaction_diagonal(params, DisorderRealization(fields[e, k]))
                    for e in range(start, stop)
                ]
            )[:, None, :]
            acc = strang_period_map(acc, diags, params, cfg.steps_per_period)
        for mat in acc:
            pooled.append(r_statistics(eigenphases(mat)).r_values)
    return LevelSpacingSample(np.concatenate(pooled))


def reference_distances(
    sample: LevelSpacingSample, n_bins: int = DEFAULT_BINS
) -> tuple[float, float]:
    """(JS to Poisson, JS to CUE) of the sample's n_bins histogram."""
    edges = uniform_edges(n_bins)
    emp = histogram(sample, edges)
    return (
        js_distance(emp, poisson_bin_masses(edges)),
        js_distance(emp, cue_bin_masses(edges)),
    )


# --- CSV emission ---------------------------------------------------------------

JS_CSV_COLUMNS = ["M", "n_qubits", "JS_to_CUE", "JS_to_Poisson", "ensemble_size"]


def write_js_csv(path, rows) -> None:
    """rows: iterables matching JS_CSV_COLUMNS."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(JS_CSV_COLUMNS)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
