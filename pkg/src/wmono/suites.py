"""Seeded randomized verification suites behind ``wmono verify``.

Each suite draws its corpus from a seed, checks one family of identities or
inequalities, and returns a :class:`SuiteResult` with pass/fail counts and the
worst observed deviation or margin.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import convexroof, measures, monogamy
from .errors import PreconditionError
from .lin import PureState
from .wclass import (WClassParams, make_wclass, one_vs_rest_cren, pair_cren,
                     reduced_pair, reduced_subset, sample_random)

DEFAULT_TOLERANCES = {
    "constancy": 1e-9,
    "optimizer": 1e-6,
    "margin": 1e-10,
    "identity": 1e-10,
    "wootters": 1e-9,
    "falpha_shape": 1e-8,
}

CORPUS_SIZE = 500
SUBSETS_PER_STATE = 5
QUBIT_RANGE = (3, 6)
X_VALUES = (2.0, 2.5, 3.0, 5.0, 10.0)
Y_VALUES = (-5.0, -2.0, -1.0, -0.1, 0.0)
EQ1_POWERS = (2.5, 3.0, 4.0, 5.0, 7.5, 10.0)
ALPHAS = tuple(np.linspace(measures.ALPHA_TWO_QUBIT_MIN, measures.ALPHA_2XD_MAX, 20))


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    # worst value of each tracked quantity; deviations are maximized, margins minimized
    worst: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.passed > 0

    def record(self, ok: bool, label: str) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < 10:
                self.failures.append(label)

    def track_deviation(self, key: str, value: float) -> None:
        self.worst[key] = max(self.worst.get(key, 0.0), float(value))

    def track_margin(self, key: str, value: float) -> None:
        self.worst[key] = min(self.worst.get(key, np.inf), float(value))

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        parts = [f"{status} {self.name}: {self.passed} passed, {self.failed} failed"]
        parts += [f"worst {k} = {v:.3e}" for k, v in sorted(self.worst.items())]
        parts.append(f"{self.seconds:.1f}s")
        return "; ".join(parts)


def state_seeds(seed: int, count: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(count)]


def corpus(seed: int, count: int = CORPUS_SIZE) -> list[WClassParams]:
    rng = np.random.default_rng(seed)
    sizes = rng.integers(QUBIT_RANGE[0], QUBIT_RANGE[1] + 1, size=count)
    return [sample_random(s, int(n)) for s, n in zip(state_seeds(seed, count), sizes)]


def random_subsets(params: WClassParams, rng: np.random.Generator,
                   count: int = SUBSETS_PER_STATE) -> list[tuple[int, ...]]:
    """Random nonempty subsets of qubits 2..n (the side traced against qubit 1)."""
    others = np.arange(2, params.n + 1)
    out = []
    for _ in range(count):
        k = int(rng.integers(1, others.size + 1))
        out.append(tuple(sorted(int(i) for i in rng.choice(others, size=k, replace=False))))
    return out


def _tol(tolerances: dict | None, key: str) -> float:
    return (tolerances or {}).get(key, DEFAULT_TOLERANCES[key])


def lemma1(seed: int = 0, budget: int = 100, tolerances: dict | None = None,
           count: int = CORPUS_SIZE, decompositions: int = 20) -> SuiteResult:
    """Average negativity is the same for every decomposition of a pair state."""
    res = SuiteResult("lemma1")
    tol_c, tol_o = _tol(tolerances, "constancy"), _tol(tolerances, "optimizer")
    rng = np.random.default_rng([seed, 1])
    for k, params in enumerate(corpus(seed, count)):
        for i in range(2, params.n + 1):
            rho = reduced_pair(params, i)
            target = pair_cren(params, i)
            rank = int(np.sum(np.linalg.eigvalsh(rho.entries) > convexroof.RANK_TOL))
            devs = []
            for _ in range(decompositions):
                u = convexroof.random_mixing(rng, int(rng.integers(rank, 7)), rank)
                ens = convexroof.hjw_ensemble(rho, u)
                devs.append(abs(convexroof.average_entanglement(ens, (1,), "negativity") - target))
            lo, _ = convexroof.optimize(rho, (1,), "negativity", "min", budget, seed + k)
            hi, _ = convexroof.optimize(rho, (1,), "negativity", "max", budget, seed + k)
            dev, gap = max(devs), abs(hi - lo)
            res.track_deviation("constancy", dev)
            res.track_deviation("optimizer_gap", gap)
            res.record(dev <= tol_c and gap <= tol_o and abs(lo - target) <= tol_o,
                       f"state {k} pair (1,{i}): deviation {dev:.3e}, gap {gap:.3e}")
    return res


def identities(seed: int = 0, budget: int = 100, tolerances: dict | None = None,
               count: int = 1000) -> SuiteResult:
    """C = N on 2 x d pure states, Wootters = pair CREN, C^2 additivity."""
    res = SuiteResult("identities")
    tol_i, tol_w = _tol(tolerances, "identity"), _tol(tolerances, "wootters")
    rng = np.random.default_rng([seed, 2])
    for k in range(count):
        extra = int(rng.choice([1, 2, 3]))
        z = rng.standard_normal(2 ** (1 + extra)) + 1j * rng.standard_normal(2 ** (1 + extra))
        psi = PureState.from_amplitudes(z, normalize=True)
        dev = abs(measures.concurrence_pure(psi, (1,)) - measures.negativity(psi, (1,)))
        res.track_deviation("c_minus_n", dev)
        res.record(dev <= tol_i, f"2x{2 ** extra} state {k}: |C-N| = {dev:.3e}")
    for k, params in enumerate(corpus(seed, CORPUS_SIZE)):
        for i in range(2, params.n + 1):
            dev = abs(measures.wootters_concurrence(reduced_pair(params, i)) - pair_cren(params, i))
            res.track_deviation("wootters", dev)
            res.record(dev <= tol_w, f"state {k} pair (1,{i}): wootters deviation {dev:.3e}")
        everyone = range(1, params.n + 1)
        total = one_vs_rest_cren(params, everyone)
        dev = abs(total ** 2 - sum(pair_cren(params, i) ** 2 for i in range(2, params.n + 1)))
        full = measures.concurrence_pure(make_wclass(params), (1,))
        res.track_deviation("additivity", dev)
        res.track_deviation("pure_concurrence", abs(full - total))
        res.record(dev <= tol_i and abs(full - total) <= tol_w,
                   f"state {k}: additivity deviation {dev:.3e}")
    return res


def _inequality_suite(name: str, body: Callable[[SuiteResult, WClassParams, list, float], None],
                      seed: int, tolerances: dict | None, count: int) -> SuiteResult:
    res = SuiteResult(name)
    margin_tol = _tol(tolerances, "margin")
    rng = np.random.default_rng([seed, 3])
    for params in corpus(seed, count):
        body(res, params, random_subsets(params, rng), margin_tol)
    return res


def _check(res: SuiteResult, report: monogamy.BoundReport, margin_tol: float, label: str) -> None:
    holds = report.margin > margin_tol if report.strict else report.margin >= -margin_tol
    res.track_margin("margin", report.margin)
    res.record(holds, f"{label}: {report.as_dict()}")


def thm1(seed: int = 0, budget: int = 100, tolerances: dict | None = None,
         count: int = CORPUS_SIZE, spot_checks: int = 50) -> SuiteResult:
    def body(res, params, subsets, tol):
        for j in subsets:
            for x in X_VALUES:
                _check(res, monogamy.crenoa_lower_bound(params, j, x)[1], tol, f"j={j} x={x}")

    res = _inequality_suite("thm1", body, seed, tolerances, count)
    # the closed-form left side against a numerical CRENoA
    tol_o = _tol(tolerances, "optimizer")
    rng = np.random.default_rng([seed, 4])
    done = 0
    for k, params in enumerate(corpus(seed, count)):
        if done >= spot_checks:
            break
        j = random_subsets(params, rng, 1)[0][:2]
        s = (1, *j)
        value, _ = convexroof.optimize(reduced_subset(params, s), (1,), "negativity", "max",
                                       budget, seed + k)
        dev = abs(value - one_vs_rest_cren(params, s))
        res.track_deviation("crenoa_vs_optimizer", dev)
        res.record(dev <= tol_o, f"state {k} subset {s}: optimizer deviation {dev:.3e}")
        done += 1
    return res


def thm2(seed: int = 0, budget: int = 100, tolerances: dict | None = None,
         count: int = CORPUS_SIZE) -> SuiteResult:
    def body(res, params, subsets, tol):
        for j in subsets:
            for y in Y_VALUES:
                try:
                    report = monogamy.crenoa_upper_check(params, j, y)
                except PreconditionError:
                    continue
                _check(res, report, tol, f"j={j} y={y}")

    return _inequality_suite("thm2", body, seed, tolerances, count)


def eq1(seed: int = 0, budget: int = 100, tolerances: dict | None = None,
        count: int = CORPUS_SIZE) -> SuiteResult:
    def body(res, params, subsets, tol):
        report = monogamy.cren_power_monogamy_check(params, 2.0)
        res.track_deviation("x2_equality", abs(report.margin))
        res.record(abs(report.margin) <= tol, f"x=2 equality: {report.as_dict()}")
        for x in EQ1_POWERS:
            _check(res, monogamy.cren_power_monogamy_check(params, x), tol, f"x={x}")

    return _inequality_suite("eq1", body, seed, tolerances, count)


def eq3(seed: int = 0, budget: int = 100, tolerances: dict | None = None,
        count: int = CORPUS_SIZE) -> SuiteResult:
    def body(res, params, subsets, tol):
        for alpha in ALPHAS:
            _check(res, monogamy.sre_lower_check(params, alpha), tol, f"alpha={alpha}")

    return _inequality_suite("eq3", body, seed, tolerances, count)


def thm3(seed: int = 0, budget: int = 100, tolerances: dict | None = None,
         count: int = CORPUS_SIZE) -> SuiteResult:
    def body(res, params, subsets, tol):
        for alpha in ALPHAS:
            _check(res, monogamy.ealpha_sum_upper(params, alpha), tol, f"alpha={alpha}")

    return _inequality_suite("thm3", body, seed, tolerances, count)


def thm4(seed: int = 0, budget: int = 100, tolerances: dict | None = None,
         count: int = CORPUS_SIZE) -> SuiteResult:
    def body(res, params, subsets, tol):
        full = tuple(range(1, params.n + 1))
        for s in [full] + [(1, *j) for j in subsets]:
            for alpha in ALPHAS:
                _check(res, monogamy.sre_upper_bound(params, s, alpha)[1], tol,
                       f"s={s} alpha={alpha}")

    return _inequality_suite("thm4", body, seed, tolerances, count)


def falpha(seed: int = 0, budget: int = 100, tolerances: dict | None = None) -> SuiteResult:
    """Monotonicity, concavity, endpoints and alpha -> 1 continuity of f_alpha."""
    res = SuiteResult("falpha")
    tol = _tol(tolerances, "falpha_shape")
    grid = np.linspace(0.0, 1.0, 1001)
    h = grid[1] - grid[0]
    for alpha in ALPHAS:
        f = measures.f_alpha(grid, alpha)
        drop = -np.min(np.diff(f))
        bend = np.max(f[:-2] - 2 * f[1:-1] + f[2:])
        res.track_deviation("monotonicity_violation", max(drop, 0.0))
        res.track_deviation("concavity_violation", max(bend, 0.0))
        res.record(drop <= 1e-10, f"alpha={alpha}: monotonicity violated by {drop:.3e}")
        res.record(bend <= tol, f"alpha={alpha}: second difference {bend:.3e} (h={h})")
        ends = max(abs(measures.f_alpha(0.0, alpha)), abs(measures.f_alpha(1.0, alpha) - 1.0))
        res.track_deviation("endpoints", ends)
        res.record(ends <= 1e-12, f"alpha={alpha}: endpoint deviation {ends:.3e}")
    limit = measures.f_alpha(grid, 1.0)
    for alpha in (1 - 1e-7, 1 + 1e-7):
        dev = np.max(np.abs(measures.f_alpha(grid, alpha) - limit))
        res.track_deviation("limit_continuity", dev)
        res.record(dev <= 1e-6, f"alpha={alpha}: limit deviation {dev:.3e}")
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "lemma1": lemma1,
    "thm1": thm1,
    "thm2": thm2,
    "thm3": thm3,
    "thm4": thm4,
    "eq1": eq1,
    "eq3": eq3,
    "identities": identities,
    "falpha": falpha,
}


def run(name: str, seed: int = 0, budget: int = 100,
        tolerances: dict | None = None) -> list[SuiteResult]:
    names = list(SUITES) if name == "all" else [name]
    results = []
    for n in names:
        start = time.perf_counter()
        result = SUITES[n](seed=seed, budget=budget, tolerances=tolerances)
        result.seconds = time.perf_counter() - start
        results.append(result)
    return results
