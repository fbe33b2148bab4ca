"""Brute-force convex roofs over pure-state decompositions.

Every decomposition of a rank-r state into K pure states comes from a K x r
isometry ``u`` (orthonormal columns) applied to the scaled eigenvectors,
``|phi_h> = sum_j u[h, j] sqrt(mu_j) |e_j>``. Searching over such isometries
gives numerical bounds on the minimum (convex roof) and maximum (roof of
assistance) average entanglement.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DomainError
from .lin import DensityMatrix, PureState, qubit_subset
from .measures import concurrence_pure, negativity

MEASURES = ("concurrence", "negativity")
DIRECTIONS = ("min", "max")
RANK_TOL = 1e-12
WEIGHT_FLOOR = 1e-14
ORTHONORMAL_TOL = 1e-10
MAX_RANK = 4
EXTRA_MEMBERS = 4
STEP_START = 0.1
STEP_STOP = 1e-6
MAX_MOVES_PER_STEP = 50


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Weighted pure-state decomposition; ``states`` holds one state per row."""
    weights: np.ndarray
    states: np.ndarray
    num_qubits: int

    @property
    def members(self) -> list[tuple[float, PureState]]:
        return [(float(p), PureState(self.num_qubits, s))
                for p, s in zip(self.weights, self.states)]

    def density(self) -> np.ndarray:
        return np.einsum("h,hi,hj->ij", self.weights, self.states, self.states.conj())


def check_mixing(u) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] < u.shape[1] or u.shape[1] < 1:
        raise DomainError(f"mixing matrix must be K x r with K >= r >= 1, got {u.shape}")
    gram = u.conj().T @ u
    if np.max(np.abs(gram - np.eye(u.shape[1]))) > ORTHONORMAL_TOL:
        raise DomainError("mixing matrix columns are not orthonormal")
    return u


def random_mixing(rng: np.random.Generator, k: int, r: int) -> np.ndarray:
    """K x r isometry from the QR factor of a complex Gaussian matrix."""
    z = rng.standard_normal((k, r)) + 1j * rng.standard_normal((k, r))
    q, rr = np.linalg.qr(z)
    # fix column phases so the distribution is unitarily invariant
    d = np.diagonal(rr)
    return q * (d / np.abs(d))


def _eigen(rho: DensityMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Nonzero eigenvalues (descending) and matching eigenvectors as columns."""
    w, v = np.linalg.eigh(rho.entries)
    w, v = w[::-1], v[:, ::-1]
    r = int(np.sum(w > RANK_TOL))
    return w[:r], v[:, :r]


def hjw_ensemble(rho: DensityMatrix, u) -> Ensemble:
    w, v = _eigen(rho)
    u = check_mixing(u)
    if u.shape[1] != w.size:
        raise DomainError(f"mixing matrix has {u.shape[1]} columns but rank is {w.size}")
    phi = u @ (np.sqrt(w)[:, None] * v.T)
    p = np.sum(np.abs(phi) ** 2, axis=1)
    keep = p >= WEIGHT_FLOOR
    states = phi[keep] / np.sqrt(p[keep])[:, None]
    return Ensemble(p[keep] / np.sum(p[keep]), states, rho.num_subsystems)


def average_entanglement(ens: Ensemble, cut: Iterable[int], measure: str) -> float:
    if measure == "negativity":
        fn = negativity
    elif measure == "concurrence":
        fn = concurrence_pure
    else:
        raise DomainError(f"unknown measure {measure!r}; expected one of {MEASURES}")
    cut = tuple(cut)
    return float(sum(p * fn(psi, cut) for p, psi in ens.members))


def pure_values(states: np.ndarray, num_qubits: int, cut: Iterable[int],
                measure: str) -> np.ndarray:
    """Vectorized pure-state concurrence or negativity over the last axis.

    Both follow from the Schmidt coefficients s of each state:
    negativity = (sum s)^2 - 1 and concurrence = sqrt(2 (1 - sum s^4)).
    """
    cut = qubit_subset(cut, num_qubits)
    rest = [q for q in range(1, num_qubits + 1) if q not in cut]
    if not rest:
        raise DomainError("cut must be a proper subset of the qubits")
    lead = states.shape[:-1]
    t = states.reshape(lead + (2,) * num_qubits)
    axes = list(range(len(lead))) + [len(lead) + q - 1 for q in (*cut, *rest)]
    mat = t.transpose(axes).reshape(lead + (2 ** len(cut), 2 ** len(rest)))
    s = np.linalg.svd(mat, compute_uv=False)
    if measure == "negativity":
        return np.maximum(np.sum(s, axis=-1) ** 2 - 1.0, 0.0)
    if measure == "concurrence":
        return np.sqrt(np.maximum(2.0 * (1.0 - np.sum(s ** 4, axis=-1)), 0.0))
    raise DomainError(f"unknown measure {measure!r}; expected one of {MEASURES}")


class _Objective:
    def __init__(self, rho: DensityMatrix, cut, measure: str):
        w, v = _eigen(rho)
        self.rank = w.size
        self.scaled = np.sqrt(w)[:, None] * v.T
        self.num_qubits = rho.num_subsystems
        self.cut = cut
        self.measure = measure
        self.evaluations = 0

    def __call__(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Average entanglement for a stack of raw K x r matrices."""
        q, _ = np.linalg.qr(z)
        phi = q @ self.scaled
        p = np.sum(np.abs(phi) ** 2, axis=-1)
        live = p >= WEIGHT_FLOOR
        norm = np.where(live, np.sqrt(np.where(live, p, 1.0)), 1.0)
        vals = pure_values(phi / norm[..., None], self.num_qubits, self.cut, self.measure)
        p = np.where(live, p, 0.0)
        self.evaluations += z.shape[0]
        return np.sum(p * vals, axis=-1) / np.sum(p, axis=-1), q


def _structured_starts(r: int) -> list[np.ndarray]:
    # eigen-ensemble and the Fourier mixing of it
    k = np.arange(r)
    dft = np.exp(2j * np.pi * np.outer(k, k) / r) / np.sqrt(r)
    return [np.eye(r, dtype=complex), dft]


def optimize(rho: DensityMatrix, cut: Iterable[int], measure: str, direction: str,
             budget: int = 100, seed: int = 0) -> tuple[float, np.ndarray]:
    """Search decompositions of ``rho`` for the min or max average entanglement.

    ``budget`` random isometries are drawn with K swept over r..r+4 (the
    eigen-ensemble and its Fourier mixing are always among them). The best
    one is then refined coordinate-wise on the real and imaginary parts of
    its generating matrix, halving the step from 0.1 down to 1e-6. The
    result is an upper bound on the true minimum, or a lower bound on the
    true maximum.

    Returns ``(value, mixing_matrix)``.
    """
    if measure not in MEASURES:
        raise DomainError(f"unknown measure {measure!r}; expected one of {MEASURES}")
    if direction not in DIRECTIONS:
        raise DomainError(f"direction must be 'min' or 'max', got {direction!r}")
    if budget < 100:
        raise DomainError(f"budget must be at least 100, got {budget}")
    cut = qubit_subset(cut, rho.num_subsystems)
    obj = _Objective(rho, cut, measure)
    r = obj.rank
    if r > MAX_RANK:
        raise DomainError(f"rank {r} exceeds the supported maximum {MAX_RANK}")
    sign = 1.0 if direction == "min" else -1.0
    rng = np.random.default_rng(seed)

    sizes = list(range(r, r + EXTRA_MEMBERS + 1))
    counts = [budget // len(sizes)] * len(sizes)
    for i in range(budget % len(sizes)):
        counts[i] += 1

    best_score, best_z = np.inf, None
    for k, count in zip(sizes, counts):
        z = rng.standard_normal((count, k, r)) + 1j * rng.standard_normal((count, k, r))
        if k == r:
            starts = _structured_starts(r)[:count]
            z[: len(starts)] = starts
        vals, _ = obj(z)
        scores = sign * vals
        i = int(np.argmin(scores))
        if scores[i] < best_score:
            best_score, best_z = scores[i], z[i]

    best_z = _refine(obj, best_z, sign)
    val, q = obj(best_z[None])
    return float(val[0]), q[0]


def _refine(obj: _Objective, z: np.ndarray, sign: float) -> np.ndarray:
    k, r = z.shape
    params = np.concatenate([z.real.ravel(), z.imag.ravel()])
    size = params.size

    def unpack(x):
        return x[..., : size // 2].reshape(x.shape[:-1] + (k, r)) + \
            1j * x[..., size // 2:].reshape(x.shape[:-1] + (k, r))

    current = sign * obj(unpack(params[None]))[0][0]
    basis = np.eye(size)
    step = STEP_START
    while step >= STEP_STOP:
        for _ in range(MAX_MOVES_PER_STEP):
            trial = np.concatenate([params + step * basis, params - step * basis])
            scores = sign * obj(unpack(trial))[0]
            i = int(np.argmin(scores))
            if scores[i] < current - 1e-15:
                params, current = trial[i], scores[i]
            else:
                break
        step /= 2.0
    return unpack(params)
