"""Generalized W-class states and their closed-form reductions.

A W-class state on n qubits is ``a|0...0> + sum_i b_i |e_i>`` where ``|e_i>``
excites qubit i only. Every reduced state that keeps qubit 1 has rank at most
two: a W-class vector on the kept qubits plus a vacuum component carrying the
weight of the traced excitations.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DomainError
from .lin import DensityMatrix, PureState, qubit_subset

PARAM_NORM_TOL = 1e-9


@dataclass(frozen=True)
class WClassParams:
    a: complex
    b: tuple[complex, ...]

    def __post_init__(self):
        b = tuple(complex(x) for x in self.b)
        a = complex(self.a)
        if len(b) < 2:
            raise DomainError(f"need at least 2 qubits, got {len(b)}")
        norm = abs(a) ** 2 + sum(abs(x) ** 2 for x in b)
        if abs(norm - 1.0) > PARAM_NORM_TOL:
            raise DomainError(f"|a|^2 + sum |b_i|^2 = {norm!r}, expected 1")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return len(self.b)

    def weight(self, i: int) -> float:
        """``|b_i|^2`` for the 1-based qubit label ``i``."""
        return abs(self.b[i - 1]) ** 2


def paper_state() -> WClassParams:
    """The 5-qubit example state used for both figures (b_5 = 0)."""
    s = np.sqrt
    return WClassParams(1 / s(10), (1 / s(15), 1 / s(10), s(2 / 15), s(3 / 5), 0.0))


def make_wclass(params: WClassParams) -> PureState:
    n = params.n
    amps = np.zeros(2 ** n, dtype=complex)
    amps[0] = params.a
    for i, bi in enumerate(params.b, start=1):
        amps[1 << (n - i)] = bi
    return PureState(n, amps)


def _subset_with_first(params: WClassParams, s: Iterable[int]) -> tuple[int, ...]:
    s = qubit_subset(s, params.n)
    if s[0] != 1:
        raise DomainError(f"subset {s} must contain qubit 1")
    if len(s) < 2:
        raise DomainError("subset must contain qubit 1 and at least one other qubit")
    return s


def _pair_index(params: WClassParams, i: int) -> int:
    i = int(i)
    if i < 2 or i > params.n:
        raise DomainError(f"pair index {i} must lie in 2..{params.n}")
    return i


def reduced_subset(params: WClassParams, s: Iterable[int]) -> DensityMatrix:
    """Closed-form reduced state on the qubits ``s`` (which must include 1)."""
    s = _subset_with_first(params, s)
    m = len(s)
    x = np.zeros(2 ** m, dtype=complex)
    x[0] = params.a
    for pos, q in enumerate(s, start=1):
        x[1 << (m - pos)] = params.b[q - 1]
    vacuum = sum(params.weight(k) for k in range(1, params.n + 1) if k not in s)
    rho = np.outer(x, x.conj())
    rho[0, 0] += vacuum
    return DensityMatrix((2,) * m, rho)


def reduced_pair(params: WClassParams, i: int) -> DensityMatrix:
    return reduced_subset(params, (1, _pair_index(params, i)))


def pair_cren(params: WClassParams, i: int) -> float:
    """CREN (equal to CRENoA) of the two-qubit reduction on qubits 1 and i."""
    i = _pair_index(params, i)
    return 2.0 * abs(params.b[0]) * abs(params.b[i - 1])


def one_vs_rest_cren(params: WClassParams, s: Iterable[int]) -> float:
    """CREN of the reduction on ``s`` across the cut qubit 1 | rest of ``s``.

    Every decomposition of the rank-two reduction has the same average
    negativity on this cut, so this is also the CRENoA.
    """
    s = _subset_with_first(params, s)
    rest = sum(params.weight(k) for k in s[1:])
    return 2.0 * abs(params.b[0]) * float(np.sqrt(rest))


def sample_random(seed: int, n: int) -> WClassParams:
    """Random W-class parameters, deterministic in ``seed``.

    Squared moduli are normalized squared standard Gaussians over
    ``(a, b_1..b_n)``; phases are uniform on ``[0, 2 pi)``.
    """
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal(n + 1)
    weights = g ** 2 / np.sum(g ** 2)
    phases = rng.uniform(0.0, 2 * np.pi, size=n + 1)
    amps = np.sqrt(weights) * np.exp(1j * phases)
    amps /= np.linalg.norm(amps)
    return WClassParams(amps[0], tuple(amps[1:]))
