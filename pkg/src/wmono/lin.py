"""Dense linear algebra on multiqubit states.

Qubits are labelled 1..n as in A_1..A_n. Qubit 1 is the most significant bit
of the computational-basis index, so ``|q1 q2 ... qn>`` sits at index
``sum(q_k * 2**(n-k))``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
SPECTRUM_HERMITIAN_TOL = 1e-10
ZERO_EIGENVALUE = 1e-12


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=complex, copy=True)
    out.flags.writeable = False
    return out


def qubit_subset(indices: Iterable[int], n: int) -> tuple[int, ...]:
    """Validate 1-based subsystem labels against ``n`` subsystems.

    Returns the labels sorted ascending.
    """
    idx = [int(i) for i in indices]
    if not idx:
        raise DomainError("subset must be nonempty")
    if len(set(idx)) != len(idx):
        raise DomainError(f"subset {idx} contains duplicates")
    bad = [i for i in idx if i < 1 or i > n]
    if bad:
        raise DomainError(f"subset indices {bad} out of range 1..{n}")
    return tuple(sorted(idx))


@dataclass(frozen=True, eq=False)
class PureState:
    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).ravel()
        if self.num_qubits < 1:
            raise DomainError("num_qubits must be positive")
        if amps.size != 2 ** self.num_qubits:
            raise DomainError(
                f"expected {2 ** self.num_qubits} amplitudes, got {amps.size}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise DomainError(f"state not normalized: <psi|psi> = {norm!r}")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @classmethod
    def from_amplitudes(cls, amplitudes: Sequence[complex], normalize: bool = False) -> "PureState":
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        n = int(round(np.log2(amps.size))) if amps.size else 0
        if amps.size == 0 or 2 ** n != amps.size:
            raise DomainError(f"length {amps.size} is not a power of two")
        if normalize:
            amps = amps / np.linalg.norm(amps)
        return cls(n, amps)

    def density(self) -> "DensityMatrix":
        psi = self.amplitudes
        return DensityMatrix((2,) * self.num_qubits, np.outer(psi, psi.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    subsystem_dims: tuple[int, ...]
    entries: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.subsystem_dims)
        if not dims or any(d < 1 for d in dims):
            raise DomainError(f"invalid subsystem dims {dims}")
        m = np.asarray(self.entries, dtype=complex)
        size = prod(dims)
        if m.shape != (size, size):
            raise DomainError(f"entries shape {m.shape} does not match dims {dims}")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise DomainError("density matrix is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > NORM_TOL:
            raise DomainError(f"density matrix trace is {tr!r}, expected 1")
        lowest = np.linalg.eigvalsh(m)[0]
        if lowest < -PSD_TOL:
            raise DomainError(f"density matrix has negative eigenvalue {lowest!r}")
        object.__setattr__(self, "subsystem_dims", dims)
        object.__setattr__(self, "entries", _frozen(m))

    @property
    def num_subsystems(self) -> int:
        return len(self.subsystem_dims)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def _as_matrix(m) -> np.ndarray:
    if isinstance(m, DensityMatrix):
        return m.entries
    return np.asarray(m, dtype=complex)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduce ``rho`` onto the subsystems in ``keep`` (order preserved)."""
    dims = list(rho.subsystem_dims)
    n = len(dims)
    kept = [i - 1 for i in qubit_subset(keep, n)]
    dropped = [i for i in range(n) if i not in kept]
    perm = kept + dropped
    t = rho.entries.reshape(dims + dims).transpose(perm + [p + n for p in perm])
    dk = prod(dims[i] for i in kept)
    dd = prod(dims[i] for i in dropped)
    reduced = np.einsum("ajbj->ab", t.reshape(dk, dd, dk, dd))
    # rounding in the sum can break exact Hermiticity by ~1e-17
    reduced = 0.5 * (reduced + reduced.conj().T)
    return DensityMatrix(tuple(dims[i] for i in kept), reduced)


def partial_transpose(rho, side: Iterable[int], dims: Sequence[int] | None = None) -> np.ndarray:
    """Transpose the indices of the subsystems in ``side``.

    ``rho`` is a DensityMatrix, or a plain square matrix together with its
    subsystem ``dims``. The result is Hermitian for Hermitian input but
    generally not positive semidefinite.
    """
    if isinstance(rho, DensityMatrix):
        dims = rho.subsystem_dims
    elif dims is None:
        raise DomainError("dims are required for a plain matrix")
    dims = [int(d) for d in dims]
    m = _as_matrix(rho)
    size = prod(dims)
    if m.shape != (size, size):
        raise DomainError(f"matrix shape {m.shape} does not match dims {dims}")
    n = len(dims)
    chosen = {i - 1 for i in qubit_subset(side, n)}
    axes = list(range(2 * n))
    for i in chosen:
        axes[i], axes[i + n] = axes[i + n], axes[i]
    return m.reshape(dims + dims).transpose(axes).reshape(size, size)


def hermitian_spectrum(m) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, sorted descending."""
    a = _as_matrix(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    if a.size and np.max(np.abs(a - a.conj().T)) > SPECTRUM_HERMITIAN_TOL:
        raise DomainError("matrix is not Hermitian within tolerance")
    return np.linalg.eigvalsh(0.5 * (a + a.conj().T))[::-1]


def trace_norm(m) -> float:
    return float(np.sum(np.abs(hermitian_spectrum(m))))


def probabilities(spectrum: np.ndarray) -> np.ndarray:
    """Drop eigenvalues below the zero threshold, for use as probabilities."""
    return spectrum[spectrum > ZERO_EIGENVALUE]
