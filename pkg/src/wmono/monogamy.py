"""Monogamy inequalities for W-class states and parameter sweeps over them.

All left-hand sides use the closed-form one-vs-rest CREN, which equals the
CRENoA for W-class reductions; ``convexroof.optimize`` is used only as a
spot check in the verification suites.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .lin import qubit_subset
from .measures import Order, as_order, e_alpha_pair
from .wclass import WClassParams, one_vs_rest_cren, pair_cren

MARGIN_TOL = 1e-10
NONVANISHING_TOL = 1e-9
EXCLUDED_ALPHA_BAND = (0.99, 1.001)

# Concurrence-of-assistance lower bounds for the fig1 cuts; display only.
COA_REFERENCE = {"A1|A2A3": 0.249, "A1|A2A3A4": 0.471}
# Reference optimal upper bounds for the fig2 cuts, both at alpha = 0.971.
FIG2_QUOTED_ALPHA = 0.971
FIG2_QUOTED = {"A1|A2A3": 0.02334, "A1|A2A3A4": 0.24211}


def coeff(x: float) -> float:
    """``x / (2**x - 1)``, continued to ``1 / ln 2`` at x = 0."""
    if abs(x) < 1e-12:
        return 1.0 / math.log(2.0)
    return x / math.expm1(x * math.log(2.0))


@dataclass(frozen=True)
class BoundReport:
    """One evaluated inequality ``lhs (relation) rhs``.

    ``margin`` is signed so that a nonnegative value means the inequality
    holds: ``lhs - rhs`` for ``>=``, ``rhs - lhs`` for ``<=`` and ``<``.
    """
    name: str
    relation: str
    lhs: float
    rhs: float
    coefficient: float
    context: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.relation not in (">=", "<=", "<"):
            raise DomainError(f"unknown relation {self.relation!r}")

    @property
    def strict(self) -> bool:
        return self.relation == "<"

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs if self.relation == ">=" else self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.margin > MARGIN_TOL if self.strict else self.margin >= -MARGIN_TOL

    def as_dict(self) -> dict:
        return {"name": self.name, "relation": self.relation, "lhs": self.lhs,
                "rhs": self.rhs, "coefficient": self.coefficient,
                "margin": self.margin, "holds": self.holds, **self.context}


@dataclass(frozen=True)
class Curve:
    name: str
    rows: tuple[tuple[float, float], ...]

    def __post_init__(self):
        params = [p for p, _ in self.rows]
        if any(b <= a for a, b in zip(params, params[1:])):
            raise DomainError(f"curve {self.name!r} parameters not strictly increasing")

    @property
    def params(self) -> np.ndarray:
        return np.array([p for p, _ in self.rows])

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.rows])


def _traced_side(params: WClassParams, j: Iterable[int]) -> tuple[int, ...]:
    j = qubit_subset(j, params.n)
    if j[0] == 1:
        raise DomainError(f"subset {j} must not contain qubit 1")
    return j


def _label(indices: Sequence[int]) -> str:
    return "{" + ",".join(str(i) for i in indices) + "}"


def cut_name(indices: Sequence[int]) -> str:
    """``A1|A2A3`` for the cut of qubit 1 against the other listed qubits."""
    return "A1|" + "".join(f"A{i}" for i in indices if i != 1)


def crenoa_lower_bound(params: WClassParams, j: Iterable[int], x: float) -> tuple[float, BoundReport]:
    """Lower bound on the CRENoA of qubit 1 against the qubits ``j`` (x >= 2)."""
    if x < 2:
        raise DomainError(f"exponent x={x} must be >= 2")
    j = _traced_side(params, j)
    c = coeff(x)
    rhs = c * sum(pair_cren(params, i) ** x for i in j)
    lhs = one_vs_rest_cren(params, (1, *j)) ** x
    report = BoundReport("thm1", ">=", lhs, rhs, c, {"subset": _label(j), "x": x})
    return rhs ** (1.0 / x), report


def crenoa_upper_check(params: WClassParams, j: Iterable[int], y: float) -> BoundReport:
    """Strict upper relation for nonpositive powers of the CRENoA."""
    if y > 0:
        raise DomainError(f"exponent y={y} must be <= 0")
    j = _traced_side(params, j)
    pairs = []
    for i in j:
        value = pair_cren(params, i)
        if value <= NONVANISHING_TOL:
            raise PreconditionError(
                f"pair CREN of qubits (1, {i}) is {value:.3g}; the bound needs it nonzero")
        pairs.append(value)
    c = coeff(y)
    rhs = c * sum(v ** y for v in pairs)
    lhs = one_vs_rest_cren(params, (1, *j)) ** y
    return BoundReport("thm2", "<", lhs, rhs, c, {"subset": _label(j), "y": y})


def cren_power_monogamy_check(params: WClassParams, x: float) -> BoundReport:
    if x < 2:
        raise DomainError(f"exponent x={x} must be >= 2")
    everyone = range(1, params.n + 1)
    lhs = one_vs_rest_cren(params, everyone) ** x
    rhs = sum(pair_cren(params, i) ** x for i in range(2, params.n + 1))
    return BoundReport("eq1", ">=", lhs, rhs, 1.0, {"x": x})


def _pair_entanglements(params: WClassParams, indices: Iterable[int], order) -> list[float]:
    return [e_alpha_pair(pair_cren(params, i) ** 2, order) for i in indices]


def _one_vs_rest_entanglement(params: WClassParams, s: Sequence[int], order) -> float:
    return e_alpha_pair(one_vs_rest_cren(params, s) ** 2, order)


def sre_lower_check(params: WClassParams, order: Order) -> BoundReport:
    """Squared Renyi-alpha monogamy of the full state across qubit 1 | rest."""
    order = as_order(order)
    everyone = tuple(range(1, params.n + 1))
    lhs = _one_vs_rest_entanglement(params, everyone, order) ** 2
    rhs = sum(e ** 2 for e in _pair_entanglements(params, everyone[1:], order))
    return BoundReport("eq3", ">=", lhs, rhs, 1.0, {"alpha": order.alpha})


def ealpha_sum_upper(params: WClassParams, order: Order) -> BoundReport:
    order = as_order(order)
    everyone = tuple(range(1, params.n + 1))
    lhs = _one_vs_rest_entanglement(params, everyone, order)
    rhs = sum(_pair_entanglements(params, everyone[1:], order))
    return BoundReport("thm3", "<=", lhs, rhs, 1.0, {"alpha": order.alpha})


def sre_upper_bound(params: WClassParams, s: Iterable[int], order: Order) -> tuple[float, BoundReport]:
    """Upper bound ``(m-1) * sum E_alpha^2`` on the squared Renyi-alpha
    entanglement of qubit 1 against the rest of ``s`` (m = |s|)."""
    order = as_order(order)
    s = qubit_subset(s, params.n)
    if s[0] != 1 or len(s) < 2:
        raise DomainError(f"subset {s} must contain qubit 1 and at least one other qubit")
    m = len(s)
    bound = (m - 1) * sum(e ** 2 for e in _pair_entanglements(params, s[1:], order))
    lhs = _one_vs_rest_entanglement(params, s, order) ** 2
    report = BoundReport("thm4", "<=", lhs, bound, float(m - 1),
                         {"subset": _label(s), "alpha": order.alpha})
    return bound, report


@dataclass(frozen=True)
class SweepQuery:
    """``kind`` is fig1, fig2 or custom.

    fig1 subsets are the traced sides j (without qubit 1); fig2 subsets
    include qubit 1. A custom sweep calls ``fn(params, subset, t)`` per point.
    """
    kind: str
    params: WClassParams
    subsets: tuple[tuple[int, ...], ...]
    grid: tuple[float, ...]
    fn: Callable[[WClassParams, tuple[int, ...], float], float] | None = None


def check_grid(grid: Sequence[float], kind: str) -> None:
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("grid must be strictly increasing")
    if kind == "fig2":
        lo, hi = EXCLUDED_ALPHA_BAND
        bad = [g for g in grid if lo < g < hi]
        if bad:
            raise DomainError(
                f"fig2 grid enters the excluded band ({lo}, {hi}) around alpha=1: {bad[:3]}")


def sweep(query: SweepQuery) -> list[Curve]:
    check_grid(query.grid, query.kind)
    if query.kind == "fig1":
        def point(p, s, t):
            return crenoa_lower_bound(p, s, t)[0]
        prefix = "crenoa_lower"
    elif query.kind == "fig2":
        def point(p, s, t):
            return sre_upper_bound(p, s, t)[0]
        prefix = "sre_upper"
    elif query.kind == "custom":
        if query.fn is None:
            raise DomainError("custom sweep needs fn")
        point, prefix = query.fn, "custom"
    else:
        raise DomainError(f"unknown sweep kind {query.kind!r}")
    curves = []
    for s in query.subsets:
        s = tuple(s)
        rows = tuple((float(t), float(point(query.params, s, t))) for t in query.grid)
        curves.append(Curve(f"{prefix}:{cut_name(s)}", rows))
    return curves


def fig2_comparison(curves: Sequence[Curve], alpha: float = FIG2_QUOTED_ALPHA) -> list[dict]:
    """Compare fig2 curves with the quoted optimal bounds.

    The quoted numbers are reported alongside this sweep's own value at
    ``alpha`` and its own argmin over the lower alpha interval; agreement is
    not enforced.
    """
    out = []
    for curve in curves:
        key = curve.name.split(":", 1)[-1]
        params, values = curve.params, curve.values
        lower = params <= EXCLUDED_ALPHA_BAND[0]
        at = np.flatnonzero(np.isclose(params, alpha, atol=1e-12))
        entry = {"curve": curve.name, "quoted_alpha": alpha,
                 "quoted_value": FIG2_QUOTED.get(key),
                 "value_at_quoted_alpha": float(values[at[0]]) if at.size else None}
        if lower.any():
            i = int(np.argmin(np.where(lower, values, np.inf)))
            entry["argmin_alpha"] = float(params[i])
            entry["min_value"] = float(values[i])
        out.append(entry)
    return out
