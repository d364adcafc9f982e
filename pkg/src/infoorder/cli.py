"""Command-line front end.

Subcommands: ``compare`` two elements, ``plot`` up- and downsets on the
3-simplex, ``check`` a property suite and ``entail`` to batch-score word pairs.
Exit codes: 0 success (or all properties as expected), 1 property failure,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import density as dc
from . import entailment as ent
from .classical import OrderKind, OrderSpec, RioParams, order_property_suite
from .density_orders import (
    DensityOrderKind,
    composition_suite,
    density_compare,
    requires_density,
)
from .domain import NoJoinEvidence, dcpo_max_counterexample, way_below_probe
from .errors import InfoOrderError, ParameterOutOfRange, UnsupportedDimension
from .measurements import MeasurementKind, monotonicity_report
from .reports import EXPLORE, FAIL, PASS, AxiomResult, PropertyReport
from .simplex import Distribution, bottom, mix

log = logging.getLogger("infoorder")

CLASSICAL_ORDERS = [k.value for k in OrderKind]
DENSITY_ORDERS = [k.value for k in DensityOrderKind]
ORDERS = CLASSICAL_ORDERS + DENSITY_ORDERS
SUITES = ("axioms", "mixing", "degeneracy", "monotone", "composition", "domain", "dcpo-max")

EXIT_OK, EXIT_PROPERTY, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def fmt(value) -> str:
    """Decimal with 15 significant digits."""
    return format(float(value), ".15g")


# ---------------------------------------------------------------------------
# argument helpers


def parse_vector(text: str) -> np.ndarray:
    """Comma-separated decimals or fractions, e.g. ``1/3,1/3,1/3``."""
    try:
        return np.array([float(Fraction(t.strip())) for t in text.split(",")])
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse element {text!r}: {exc}") from exc


def parse_element(text: str, order: str):
    """Distribution for simplex orders; operator for density orders.

    ``@path`` reads a matrix file; a comma list under a density order is
    taken as a diagonal matrix.
    """
    if order in CLASSICAL_ORDERS:
        if text.startswith("@"):
            raise UsageError(f"order {order} compares distributions, not matrix files")
        return Distribution(parse_vector(text))
    M = dc.load_matrix(text[1:]) if text.startswith("@") else np.diag(parse_vector(text))
    if requires_density(order):
        return dc.make_density(M)
    return dc.make_positive(M)


def order_spec(order: str, params_path=None, tol=None, n=None) -> OrderSpec:
    if order not in CLASSICAL_ORDERS:
        raise UsageError(f"{order} is not a simplex order")
    kw = {} if tol is None else {"tol": tol}
    if order == OrderKind.RIO.value:
        if params_path is None:
            raise UsageError("--order rio needs --params")
        params = RioParams.load(params_path)
        if n is not None and params.n != n:
            raise UsageError(f"parameter file is for n={params.n}, not {n}")
        return OrderSpec.rio(params, **kw)
    return OrderSpec(order, **kw)


def _add_order(p, required=True, choices=ORDERS):
    p.add_argument("--order", choices=choices, required=required, default=None if required else "bayesian")
    p.add_argument("--params", help="JSON parameter file for --order rio")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="infoorder", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare", help="compare two elements")
    _add_order(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--tol", type=float)

    p = sub.add_parser("plot", help="up- and downset of a point on the 3-simplex")
    _add_order(p, choices=CLASSICAL_ORDERS)
    p.add_argument("--point", required=True)
    p.add_argument("--resolution", type=int, default=60)
    p.add_argument("--out", required=True)
    p.add_argument("--svg")

    p = sub.add_parser("check", help="run a property suite and write a JSON report")
    p.add_argument("--suite", choices=SUITES, required=True)
    _add_order(p, required=False)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--m", type=int, default=2, help="second factor size for --suite composition")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--measure", choices=[k.value for k in MeasurementKind])
    p.add_argument("--out", help="report file (default: stdout)")

    p = sub.add_parser("entail", help="score word pairs")
    p.add_argument("--vectors", required=True)
    p.add_argument("--pairs", required=True)
    p.add_argument("--measure", choices=ent.MEASURE_NAMES, required=True)
    _add_order(p, required=False, choices=CLASSICAL_ORDERS)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--k", type=float)
    p.add_argument("--weights", help="file with whitespace-separated Sim weights")
    p.add_argument("--context-rank", type=int, default=0)
    p.add_argument("--out")
    return parser


# ---------------------------------------------------------------------------
# compare


def cmd_compare(args) -> int:
    x, y = parse_element(args.x, args.order), parse_element(args.y, args.order)
    if args.order in CLASSICAL_ORDERS:
        spec = order_spec(args.order, args.params, args.tol, n=x.n)
        verdict = spec.compare(x, y)
    else:
        verdict = density_compare(args.order, x, y)
    print(verdict.value)
    return EXIT_OK


# ---------------------------------------------------------------------------
# plot


def barycentric_grid(resolution: int) -> np.ndarray:
    """All points ``(i, j, k) / R`` with ``i + j + k = R``, ``i`` descending then ``j``."""
    if resolution < 1:
        raise UsageError("--resolution must be positive")
    R = resolution
    return np.array([(i, j, R - i - j) for i in range(R, -1, -1) for j in range(R - i, -1, -1)]) / R


def classify_grid(spec: OrderSpec, point, grid) -> list:
    y = np.broadcast_to(np.asarray(point, dtype=float), grid.shape)
    up = spec.leq_batch(y, grid)
    down = spec.leq_batch(grid, y)
    out = []
    for u, d in zip(up, down):
        out.append("eq" if u and d else "up" if u else "down" if d else "none")
    return out


_COLORS = {"up": "#d62728", "down": "#1f77b4", "eq": "#000000", "none": "#d9d9d9"}


def ternary_svg(grid, relations, size=400) -> str:
    """Points of the grid in an equilateral triangle (top = first coordinate)."""
    pad, h = 10, size * np.sqrt(3) / 2
    corners = np.array([[size / 2, 0.0], [0.0, h], [size, h]]) + pad
    xy = grid @ corners
    r = max(1.0, size / (2.5 * np.sqrt(len(grid))))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size + 2 * pad:.0f}" height="{h + 2 * pad:.0f}">',
        '<polygon points="{}" fill="none" stroke="black"/>'.format(
            " ".join(f"{a:.2f},{b:.2f}" for a, b in corners)
        ),
    ]
    for (a, b), rel in zip(xy, relations):
        parts.append(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="{r:.2f}" fill="{_COLORS[rel]}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_plot(args) -> int:
    point = parse_vector(args.point)
    if point.size != 3:
        raise UnsupportedDimension(f"plotting needs n=3, got n={point.size}")
    point = Distribution(point)
    spec = order_spec(args.order, args.params, n=3)
    grid = barycentric_grid(args.resolution)
    relations = classify_grid(spec, point.values, grid)
    lines = ["x1,x2,x3,relation"]
    lines += [",".join(fmt(v) for v in row) + f",{rel}" for row, rel in zip(grid, relations)]
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    if args.svg:
        Path(args.svg).write_text(ternary_svg(grid, relations), encoding="utf-8")
    return EXIT_OK


# ---------------------------------------------------------------------------
# check


def _subset(report: PropertyReport, keep) -> PropertyReport:
    out = PropertyReport(report.title, meta=report.meta)
    for r in report.results:
        if keep(r.axiom):
            out.add(r)
    return out


def _domain_report(args) -> PropertyReport:
    order, n = args.order, args.n
    report = PropertyReport(f"domain probes: {order}", meta={"n": n, "chains": args.samples, "seed": args.seed})
    y = np.arange(n, 0, -1.0)
    y /= y.sum()
    if order in CLASSICAL_ORDERS:
        spec = order_spec(order, args.params, n=n)
        target, start = y, bottom(n).values
        # sector orders are domains on the monotone sector; the max-eigenvalue order on all of it
        restrict = spec.on_sector
        claimed = spec.on_sector or spec.kind is OrderKind.LPLUS
        below = lambda t: mix(start, target, t)  # noqa: E731
    else:
        spec = DensityOrderKind(order)
        target, start = dc.embed_diagonal(y), dc.bottom_density(n)
        restrict, claimed = False, spec is DensityOrderKind.PLUS
        below = lambda t: dc.DensityOperator._trusted((1 - t) * start.matrix + t * target.matrix)  # noqa: E731
    res = report.add(AxiomResult("way_below_interior", expected=PASS if claimed else EXPLORE))
    for t in (0.25, 0.5, 0.9):
        x = below(t)
        out = way_below_probe(spec, x, target, args.samples, args.seed, restrict_to_monotone=restrict)
        res.record(not out.found, out.to_dict() | {"t": t})
    if order in CLASSICAL_ORDERS and spec.on_sector and n >= 3:
        # sector-crossing chains break approximation on the full simplex
        res = report.add(AxiomResult("way_below_full_simplex", expected=FAIL))
        x = mix(start, target, 0.5)
        out = way_below_probe(spec, x, target, args.samples, args.seed)
        res.record(not out.found, out.to_dict())
    return report


def _dcpo_report(args) -> PropertyReport:
    out = dcpo_max_counterexample(n=args.n)
    report = PropertyReport("dcpo failure of the maximal restricted order", meta={"n": args.n})
    ev = out["evidence"]
    report.add(AxiomResult("no_join")).record(
        out["no_join"], ev.to_dict() if isinstance(ev, NoJoinEvidence) else {"join": ev}
    )
    report.add(AxiomResult("bounds_are_upper_bounds")).record(out["bounds_are_upper_bounds"])
    report.add(AxiomResult("bounds_decreasing")).record(out["bounds_decreasing"])
    report.add(AxiomResult("bottom2_not_upper_bound")).record(not out["bottom2_is_upper_bound"])
    report.add(AxiomResult("bottom2_below_bounds")).record(out["bottom2_below_bounds"])
    return report


def run_check(args) -> PropertyReport:
    suite, n = args.suite, args.n
    if args.samples < 1 or n < 2:
        raise UsageError("--samples must be positive and --n at least 2")
    if suite in ("axioms", "mixing", "degeneracy"):
        spec = order_spec(args.order, args.params, n=n)
        report = order_property_suite(spec, n, args.samples, args.seed)
        if suite == "mixing":
            return _subset(report, lambda a: a == "mixing")
        if suite == "degeneracy":
            return _subset(report, lambda a: a.startswith("degeneracy"))
        return report
    if suite == "monotone":
        if args.measure is None:
            raise UsageError("--suite monotone needs --measure")
        spec = order_spec(args.order, args.params, n=n)
        return monotonicity_report(args.measure, spec, n, args.samples, args.seed)
    if suite == "composition":
        return composition_suite(args.order, n, args.m, args.samples, args.seed)
    if suite == "domain":
        return _domain_report(args)
    return _dcpo_report(args)


def cmd_check(args) -> int:
    report = run_check(args)
    text = report.to_json() + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(report.summary(), file=sys.stderr)
    return EXIT_OK if report.as_expected else EXIT_PROPERTY


# ---------------------------------------------------------------------------
# entail


def _read_weights(path) -> ent.SimWeights:
    try:
        values = [float(t) for t in Path(path).read_text(encoding="utf-8").split()]
    except ValueError as exc:
        raise UsageError(f"cannot parse weights: {exc}") from exc
    return ent.SimWeights(tuple(values))


def cmd_entail(args) -> int:
    store = ent.load_vectors(args.vectors)
    pairs = ent.read_pairs(args.pairs)
    options = {"alpha": args.alpha, "k": args.k, "context_rank": args.context_rank}
    if args.measure in ("smooth", "graded", "sim"):
        spec = order_spec(args.order, args.params, n=store.dim)
        options["spec"] = spec
        if args.measure != "smooth":
            if spec.kind not in (OrderKind.BAYESIAN, OrderKind.RIO):
                raise UsageError(f"--measure {args.measure} needs --order bayesian or rio")
            options["params"] = spec.params or RioParams(store.dim)
    if args.weights:
        options["weights"] = _read_weights(args.weights)
    if args.k is not None and not 0 < args.k <= 1:
        raise ParameterOutOfRange(f"--k {args.k} outside (0, 1]")
    scored, missing = ent.score_pairs(store, pairs, args.measure, **options)
    lines = [
        f"{a}\t{b}\t{args.measure}\t{'NA' if s is None else fmt(s)}" for a, b, s in scored
    ]
    text = "".join(line + "\n" for line in lines)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if missing:
        print(f"warning: {missing} pair(s) with unknown tokens scored NA", file=sys.stderr)
    return EXIT_OK


COMMANDS = {"compare": cmd_compare, "plot": cmd_plot, "check": cmd_check, "entail": cmd_entail}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, InfoOrderError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
