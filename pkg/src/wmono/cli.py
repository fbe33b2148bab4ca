"""``wmono`` command line: figure data, verification suites, single bounds.

Exit codes: 0 success, 1 an inequality was found violated, 2 usage or
domain error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import monogamy, suites
from .errors import DomainError
from .measures import ALPHA_2XD_MAX, ALPHA_TWO_QUBIT_MIN
from .wclass import WClassParams, paper_state

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

FIG1_SUBSETS = ((2, 3), (2, 3, 4))
FIG2_SUBSETS = ((1, 2, 3), (1, 2, 3, 4))
FIG1_GRID = "2:0.1:10"
FIG2_GRIDS = ("0.823:0.001:0.99", "1.001:0.001:1.302")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    seed: int = 0
    budget: int = 100
    tolerances: dict = field(default_factory=dict)
    out: Path | None = None

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise UsageError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.budget < 100:
            raise UsageError(f"budget must be at least 100, got {self.budget}")
        unknown = set(self.tolerances) - set(suites.DEFAULT_TOLERANCES)
        if unknown:
            raise UsageError(f"unknown tolerance names {sorted(unknown)}; "
                             f"known: {sorted(suites.DEFAULT_TOLERANCES)}")


def fmt(value: float) -> str:
    return f"{value:.12g}"


def _complex(value, where: str) -> complex:
    if (not isinstance(value, list) or len(value) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
        raise UsageError(f"field '{where}': expected [re, im], got {json.dumps(value)}")
    return complex(value[0], value[1])


def parse_state_spec(text: str, source: str = "<spec>") -> WClassParams:
    """Parse ``{"n": int, "a": [re, im], "b": [[re, im], ...]}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise UsageError(f"{source}: expected a JSON object with fields n, a, b")
    missing = [k for k in ("n", "a", "b") if k not in doc]
    if missing:
        raise UsageError(f"{source}: missing field(s) {', '.join(missing)}")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise UsageError(f"{source}: field 'n': expected an integer >= 2, got {json.dumps(n)}")
    if not isinstance(doc["b"], list) or len(doc["b"]) != n:
        raise UsageError(f"{source}: field 'b': expected a list of {n} complex numbers")
    a = _complex(doc["a"], "a")
    b = [_complex(v, f"b[{i}]") for i, v in enumerate(doc["b"], start=1)]
    try:
        return WClassParams(a, tuple(b))
    except DomainError as exc:
        raise UsageError(f"{source}: {exc}") from None


def state_spec_text(params: WClassParams) -> str:
    doc = {"n": params.n, "a": [params.a.real, params.a.imag],
           "b": [[x.real, x.imag] for x in params.b]}
    return json.dumps(doc, indent=2) + "\n"


def load_spec(path: str | None) -> WClassParams:
    if path is None:
        return paper_state()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read spec {path}: {exc.strerror}") from None
    return parse_state_spec(text, path)


def parse_grid(text: str) -> tuple[float, ...]:
    """``lo:step:hi`` -> lo, lo+step, ... up to hi. ``lo`` is always included."""
    parts = text.split(":")
    try:
        lo, step, hi = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"grid must be lo:step:hi, got {text!r}") from None
    if not step > 0 or not all(np.isfinite([lo, step, hi])):
        raise UsageError(f"grid step must be positive and bounds finite, got {text!r}")
    count = max(int(np.floor((hi - lo) / step + 1e-9)), 0) + 1
    return tuple(float(fmt(lo + k * step)) for k in range(count))


def curves_csv(curves, extra_rows=()) -> str:
    lines = ["param,curve_name,value"]
    for curve in curves:
        lines += [f"{fmt(p)},{curve.name},{fmt(v)}" for p, v in curve.rows]
    lines += [f"{fmt(p)},{name},{fmt(v)}" for p, name, v in extra_rows]
    return "\n".join(lines) + "\n"


def figure_data(fig: str, params: WClassParams, grids: list[tuple[float, ...]]):
    """Curves and flat reference rows for one figure."""
    if fig == "fig1":
        grid = tuple(g for grid in grids for g in grid)
        curves = monogamy.sweep(monogamy.SweepQuery("fig1", params, FIG1_SUBSETS, grid))
        extra = [(grid[0], f"coa_ref:{name}", value)
                 for name, value in monogamy.COA_REFERENCE.items()]
        return curves, extra
    pieces = [monogamy.sweep(monogamy.SweepQuery("fig2", params, FIG2_SUBSETS, g))
              for g in grids]
    curves = [monogamy.Curve(parts[0].name, tuple(r for c in parts for r in c.rows))
              for parts in zip(*pieces)]
    return curves, []


def write_svg(path: Path, curves, extra, xlabel: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "wmono"
    fig, ax = plt.subplots(figsize=(6, 4))
    for curve in curves:
        ax.plot(curve.params, curve.values, label=curve.name)
    for _, name, value in extra:
        ax.axhline(value, linestyle="--", linewidth=0.8, label=name)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("bound")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def cmd_figure(args) -> int:
    params = load_spec(args.spec)
    if args.grid:
        grids = [parse_grid(args.grid)]
    else:
        grids = [parse_grid(FIG1_GRID)] if args.fig == "fig1" else [parse_grid(g) for g in FIG2_GRIDS]
    curves, extra = figure_data(args.fig, params, grids)
    text = curves_csv(curves, extra)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.svg:
        target = Path(args.out).with_suffix(".svg") if args.out else Path(f"{args.fig}.svg")
        write_svg(target, curves, extra, "x" if args.fig == "fig1" else "alpha")
    if args.fig == "fig2":
        for entry in monogamy.fig2_comparison(curves):
            print("fig2 comparison: " + json.dumps(entry), file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    config = RunConfig(seed=args.seed, budget=args.budget, tolerances=dict(args.tol or []))
    results = suites.run(args.suite, seed=config.seed, budget=config.budget,
                         tolerances=config.tolerances)
    for result in results:
        print(result.summary())
        for label in result.failures:
            print(f"  failure: {label}")
    ok = all(r.ok for r in results)
    total = sum(r.passed for r in results), sum(r.failed for r in results)
    print(f"{'PASS' if ok else 'FAIL'} total: {total[0]} passed, {total[1]} failed")
    return EXIT_OK if ok else EXIT_VIOLATION


def _subset(text: str | None) -> tuple[int, ...]:
    if not text:
        raise UsageError("--subset is required for this theorem")
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"--subset must be a comma-separated list of integers, got {text!r}") from None


def _require(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required for this theorem")
    return value


def bound_report(theorem: int, params: WClassParams, subset, x=None, y=None, alpha=None):
    """Evaluate one theorem; returns ``(bound or None, BoundReport)``."""
    if theorem == 1:
        return monogamy.crenoa_lower_bound(params, _subset(subset), _require(x, "--x"))
    if theorem == 2:
        return None, monogamy.crenoa_upper_check(params, _subset(subset), _require(y, "--y"))
    if theorem == 3:
        return None, monogamy.ealpha_sum_upper(params, _require(alpha, "--alpha"))
    s = tuple(sorted({1, *_subset(subset)}))
    return monogamy.sre_upper_bound(params, s, _require(alpha, "--alpha"))


def cmd_bound(args) -> int:
    params = load_spec(args.spec)
    bound, report = bound_report(args.theorem, params, args.subset, args.x, args.y, args.alpha)
    rows = [("theorem", str(args.theorem)), ("relation", f"lhs {report.relation} rhs"),
            ("lhs", fmt(report.lhs)), ("rhs", fmt(report.rhs)),
            ("coefficient", fmt(report.coefficient)), ("margin", fmt(report.margin))]
    if bound is not None:
        rows.append(("bound", fmt(bound)))
    rows += [(k, str(v)) for k, v in report.context.items()]
    rows.append(("verdict", "holds" if report.holds else "VIOLATED"))
    width = max(len(k) for k, _ in rows)
    for key, value in rows:
        print(f"{key:<{width}}  {value}")
    record = {"theorem": args.theorem, **report.as_dict()}
    if bound is not None:
        record["bound"] = bound
    print("RESULT " + json.dumps(record, sort_keys=True))
    return EXIT_OK if report.holds else EXIT_VIOLATION


def _tolerance(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    try:
        if not sep:
            raise ValueError
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wmono", description="Monogamy bounds for multiqubit W-class states.")
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figure", help="write figure data as CSV")
    fig.add_argument("fig", choices=["fig1", "fig2"])
    fig.add_argument("--spec", help="state-spec JSON file (default: the 5-qubit example)")
    fig.add_argument("--grid", help="lo:step:hi (default: fig1 2:0.1:10, fig2 "
                     f"{FIG2_GRIDS[0]} and {FIG2_GRIDS[1]})")
    fig.add_argument("--out", help="CSV output path (default: stdout)")
    fig.add_argument("--svg", action="store_true", help="also write a line plot as SVG")
    fig.set_defaults(func=cmd_figure)

    ver = sub.add_parser("verify", help="run a randomized verification suite")
    ver.add_argument("suite", choices=[*suites.SUITES, "all"])
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--budget", type=int, default=100, help="optimizer evaluations (>= 100)")
    ver.add_argument("--tol", type=_tolerance, action="append", metavar="NAME=VALUE",
                     help="override a named tolerance; repeatable")
    ver.set_defaults(func=cmd_verify)

    bnd = sub.add_parser("bound", help="evaluate one theorem's inequality")
    bnd.add_argument("theorem", type=int, choices=[1, 2, 3, 4])
    bnd.add_argument("--spec")
    bnd.add_argument("--subset", help="comma-separated qubit labels, e.g. 2,3")
    bnd.add_argument("--x", type=float, help="power for theorem 1 (x >= 2)")
    bnd.add_argument("--y", type=float, help="power for theorem 2 (y <= 0)")
    bnd.add_argument("--alpha", type=float, help=f"Renyi order for theorems 3 and 4, "
                     f"in [{ALPHA_TWO_QUBIT_MIN:.6f}, {ALPHA_2XD_MAX:.6f}]")
    bnd.set_defaults(func=cmd_bound)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"wmono: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
