"""Entanglement measures: concurrence, negativity, Renyi-alpha quantities."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .errors import DomainError
from .lin import (ZERO_EIGENVALUE, DensityMatrix, PureState, hermitian_spectrum,
                  partial_trace, partial_transpose, probabilities, qubit_subset,
                  trace_norm)

ALPHA_TWO_QUBIT_MIN = (np.sqrt(7.0) - 1.0) / 2.0
ALPHA_2XD_MAX = (np.sqrt(13.0) - 1.0) / 2.0
LIMIT_BAND = 1e-6
X_CLAMP = 1e-12

_SIGMA_YY = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]])


@dataclass(frozen=True)
class RenyiOrder:
    alpha: float

    def __post_init__(self):
        alpha = float(self.alpha)
        if not alpha > 0:
            raise DomainError(f"Renyi order must be positive, got {alpha}")
        object.__setattr__(self, "alpha", alpha)

    @property
    def in_2xd_window(self) -> bool:
        """Whether E_alpha = f_alpha(C^2) holds for every 2 x d mixed state."""
        return ALPHA_TWO_QUBIT_MIN <= self.alpha <= ALPHA_2XD_MAX

    @property
    def in_two_qubit_window(self) -> bool:
        return self.alpha >= ALPHA_TWO_QUBIT_MIN

    @property
    def near_one(self) -> bool:
        return abs(self.alpha - 1.0) < LIMIT_BAND


Order = Union[RenyiOrder, float]


def as_order(order: Order) -> RenyiOrder:
    return order if isinstance(order, RenyiOrder) else RenyiOrder(order)


def _proper_cut(cut: Iterable[int], n: int) -> tuple[int, ...]:
    cut = qubit_subset(cut, n)
    if len(cut) == n:
        raise DomainError("cut must be a proper subset of the subsystems")
    return cut


def concurrence_pure(psi: PureState, cut: Iterable[int]) -> float:
    cut = _proper_cut(cut, psi.num_qubits)
    red = partial_trace(psi.density(), cut).entries
    purity = float(np.real(np.vdot(red, red)))
    return float(np.sqrt(max(0.0, 2.0 * (1.0 - purity))))


def negativity(rho: Union[DensityMatrix, PureState], cut: Iterable[int]) -> float:
    """``||rho^{T_cut}||_1 - 1``; equals the concurrence on 2 x d pure states."""
    if isinstance(rho, PureState):
        rho = rho.density()
    cut = _proper_cut(cut, rho.num_subsystems)
    return max(0.0, trace_norm(partial_transpose(rho, cut)) - 1.0)


def wootters_concurrence(rho: DensityMatrix) -> float:
    if rho.subsystem_dims != (2, 2):
        raise DomainError(f"expected a two-qubit state, got dims {rho.subsystem_dims}")
    # With rho = Phi Phi^dagger, the square roots of the eigenvalues of
    # rho (Y x Y) rho* (Y x Y) are the singular values of Phi^T (Y x Y) Phi;
    # this avoids square roots of eigenvalues that are zero up to rounding.
    w, v = np.linalg.eigh(rho.entries)
    live = w > ZERO_EIGENVALUE
    phi = v[:, live] * np.sqrt(w[live])
    lam = np.zeros(4)
    sv = np.linalg.svd(phi.T @ _SIGMA_YY @ phi, compute_uv=False)
    lam[: sv.size] = sv
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def renyi_entropy(rho: DensityMatrix, order: Order) -> float:
    order = as_order(order)
    lam = probabilities(hermitian_spectrum(rho))
    if order.near_one:
        return float(max(0.0, -np.sum(lam * np.log2(lam))))
    alpha = order.alpha
    return float(max(0.0, np.log2(np.sum(lam ** alpha)) / (1.0 - alpha)))


def _binary_entropy(p):
    p = np.asarray(p, dtype=float)
    q = 1.0 - p
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -np.where(p > 0, p * np.log2(p), 0.0) - np.where(q > 0, q * np.log2(q), 0.0)
    return h


def f_alpha(x, order: Order):
    """Renyi-alpha entanglement of a two-qubit state as a function of C^2.

    Accepts a scalar or an array ``x`` in [0, 1].
    """
    order = as_order(order)
    x = np.asarray(x, dtype=float)
    if np.any(x < -X_CLAMP) or np.any(x > 1.0 + X_CLAMP):
        raise DomainError(f"f_alpha argument outside [0, 1]: {x}")
    x = np.clip(x, 0.0, 1.0)
    root = np.sqrt(1.0 - x)
    lo, hi = (1.0 - root) / 2.0, (1.0 + root) / 2.0
    if order.near_one:
        out = _binary_entropy(lo)
    else:
        # lo + hi = 1, so lo**alpha + hi**alpha - 1 = lo*(lo**d - 1) + hi*(hi**d - 1)
        # with d = alpha - 1; expm1/log1p keep full precision as alpha -> 1
        d = order.alpha - 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            excess = np.where(lo > 0, lo * np.expm1(d * np.log(lo)), 0.0) \
                + hi * np.expm1(d * np.log(hi))
        out = -np.log1p(excess) / (d * np.log(2.0))
    out = np.maximum(out, 0.0)
    return float(out) if out.ndim == 0 else out


def e_alpha_pair(c_squared: float, order: Order, system: str = "2xd") -> float:
    """Renyi-alpha entanglement from a squared concurrence.

    ``system="2xd"`` requires alpha in [(sqrt7-1)/2, (sqrt13-1)/2], where the
    closed form holds for every 2 x d mixed state. ``system="2x2"`` only needs
    alpha >= (sqrt7-1)/2.
    """
    order = as_order(order)
    if system == "2xd":
        if not order.in_2xd_window:
            raise DomainError(
                f"alpha={order.alpha} is outside [{ALPHA_TWO_QUBIT_MIN:.6f}, "
                f"{ALPHA_2XD_MAX:.6f}], where E_alpha = f_alpha(C^2) is not "
                "established for 2 x d mixed states")
    elif system == "2x2":
        if not order.in_two_qubit_window:
            raise DomainError(
                f"alpha={order.alpha} is below {ALPHA_TWO_QUBIT_MIN:.6f}, where "
                "E_alpha = f_alpha(C^2) is not established for two-qubit states")
    else:
        raise DomainError(f"unknown system kind {system!r}")
    return f_alpha(c_squared, order)
