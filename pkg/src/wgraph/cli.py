"""Command-line front end.

Subcommands:

* ``graph-op``   apply a graph operation and self-check it against the
                 equivalent matrix arithmetic
* ``spectrum``   eigenvalues of a graph or matrix, optionally with a
                 deficiency membership test for one point
* ``cover``      verify covering maps, lift graphs through voltage
                 assignments, check spectral inclusion along a covering
* ``orbital``    compare the orbital operators of a group-algebra element
                 at two base points
* ``demo-shift`` the one-sided shift walkthrough showing why both
                 deficiency sides are needed

Reports are ``KEY: value`` lines (or one JSON object with ``--json``) and
are byte-identical across repeated runs.  Exit codes: 0 success, 1 a
requested check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .core import add_scalar, adjoint, compose, deficiency_graph, scale
from .covering import deficiency_route_check, spectral_inclusion_check, verify_covering, voltage_cover
from .errors import WGraphError
from .fileio import (
    format_complex,
    parse_complex,
    read_action,
    read_covering,
    read_element,
    read_graph,
    read_matrix,
    read_voltages,
    write_covering,
    write_graph,
    write_matrix,
)
from .operator import FinSuppVector, materialize, matrix_norm_bound
from .orbital import (
    orbital_graph,
    positive_element_graph,
    rayleigh_transfer,
    spectra_compare_orbits,
    word_str,
)
from .spectra import membership_by_deficiency, shift_counterexample_report, spectrum

__all__ = ["main", "build_parser"]


class Report:
    """Accumulates KEY: value lines plus a mirror JSON object."""

    def __init__(self):
        self.lines: list[str] = []
        self.data: dict = {}

    def kv(self, key: str, value, json_value=None):
        self.lines.append(f"{key}: {value}")
        jkey = key.lower().replace(" ", "-")
        self.data[jkey] = value if json_value is None else json_value

    def raw(self, line: str):
        self.lines.append(line)

    def jset(self, key: str, value):
        self.data[key] = value

    def emit(self, as_json: bool):
        if as_json:
            print(json.dumps(self.data, indent=2, sort_keys=True))
        else:
            for line in self.lines:
                print(line)


def _fmt(x: float) -> str:
    return repr(float(x))


def _spectrum_str(values) -> str:
    return " ".join(format_complex(v) for v in values)


def _verdict_fields(rep: Report, prefix: str, verdict):
    rep.kv(f"{prefix}MEMBER", "yes" if verdict.member else "no", verdict.member)
    rep.kv(f"{prefix}SIDE", verdict.witness_side)
    rep.kv(f"{prefix}DIST LEFT", _fmt(verdict.dist_left), verdict.dist_left)
    rep.kv(f"{prefix}DIST RIGHT", _fmt(verdict.dist_right), verdict.dist_right)


def cmd_graph_op(args) -> int:
    graph = read_graph(args.graph)
    rep = Report()
    rep.kv("OPERATION", args.op)
    rep.kv("INPUT ORDER", graph.order)
    m = materialize(graph)
    if args.op == "scale":
        if args.factor is None:
            raise ValueError("scale needs --factor")
        lam = parse_complex(args.factor)
        result = scale(graph, lam)
        expected = lam * m
    elif args.op == "add":
        if args.factor is None:
            raise ValueError("add needs --factor")
        lam = parse_complex(args.factor)
        result = add_scalar(graph, lam)
        expected = m + lam * np.eye(graph.order)
    elif args.op == "adjoint":
        result = adjoint(graph)
        expected = m.conj().T
    elif args.op == "compose":
        if args.other is None:
            raise ValueError("compose needs --other")
        other = read_graph(args.other)
        rep.kv("OTHER ORDER", other.order)
        result = compose(graph, other)
        expected = m @ materialize(other)
    elif args.op == "deficiency":
        if args.lam is None or args.radius is None:
            raise ValueError("deficiency needs --lambda and --R")
        lam = parse_complex(args.lam)
        side = args.side
        result = deficiency_graph(graph, lam, args.radius, side=side)
        shifted = m - lam * np.eye(graph.order)
        prod = shifted @ shifted.conj().T if side == "left" else shifted.conj().T @ shifted
        expected = np.eye(graph.order) - prod / args.radius**2
        rep.kv("LAMBDA", format_complex(lam))
        rep.kv("R", _fmt(args.radius), args.radius)
        rep.kv("SIDE", side)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown operation {args.op!r}")
    rep.kv("RESULT ARCS", len(result.arcs))
    deviation = float(np.max(np.abs(materialize(result) - expected))) if result.order else 0.0
    ok = deviation <= args.tol
    rep.kv("SELF-CHECK DEVIATION", _fmt(deviation), deviation)
    rep.kv("SELF-CHECK", "ok" if ok else "FAILED", ok)
    if args.out:
        write_graph(result, args.out)
        rep.kv("WROTE", args.out)
    rep.emit(args.json)
    return 0 if ok else 1


def cmd_spectrum(args) -> int:
    if (args.graph is None) == (args.matrix is None):
        raise ValueError("give exactly one of --graph or --matrix")
    if args.graph:
        m = materialize(read_graph(args.graph))
    else:
        m = read_matrix(args.matrix)
    rep = Report()
    rep.kv("ORDER", m.shape[0])
    spec = spectrum(m)
    rep.kv("SPECTRUM", _spectrum_str(spec.values), [format_complex(v) for v in spec.values])
    code = 0
    if args.check_lambda is not None:
        lam = parse_complex(args.check_lambda)
        radius = args.radius if args.radius is not None else 2.0 * max(matrix_norm_bound(m), 1e-12)
        verdict = membership_by_deficiency(m, lam, radius, tol=args.tol)
        rep.kv("LAMBDA", format_complex(lam))
        rep.kv("R", _fmt(radius), radius)
        rep.kv("TOL", _fmt(args.tol), args.tol)
        _verdict_fields(rep, "", verdict)
    if args.out:
        write_matrix(m, args.out)
        rep.kv("WROTE", args.out)
    rep.emit(args.json)
    return code


def cmd_cover_verify(args) -> int:
    covering = read_covering(args.map)
    violations = verify_covering(covering)
    rep = Report()
    rep.kv("COVER ORDER", covering.cover.order)
    rep.kv("BASE ORDER", covering.base.order)
    rep.kv("VIOLATIONS", len(violations))
    items = []
    for v in violations:
        rep.raw(f"VIOLATION: {v.kind} at {v.where}: {v.detail}")
        items.append({"kind": v.kind, "where": v.where, "detail": v.detail})
    rep.jset("violation-list", items)
    rep.kv("VERIFIED", "ok" if not violations else "FAILED", not violations)
    rep.emit(args.json)
    return 0 if not violations else 1


def cmd_cover_lift(args) -> int:
    base = read_graph(args.graph)
    degree, volts = read_voltages(args.volt)
    if len(volts) != len(base.arcs):
        raise ValueError(
            f"voltage file lists {len(volts)} arcs but the graph has {len(base.arcs)}"
        )
    cover, covering = voltage_cover(base, degree, volts)
    rep = Report()
    rep.kv("BASE ORDER", base.order)
    rep.kv("SHEETS", degree)
    rep.kv("COVER ORDER", cover.order)
    rep.kv("COVER ARCS", len(cover.arcs))
    rep.kv("VERIFIED", "ok", True)
    if args.out:
        write_covering(covering, args.out)
        rep.kv("WROTE", args.out)
    rep.emit(args.json)
    return 0


def cmd_cover_include(args) -> int:
    covering = read_covering(args.map)
    violations = verify_covering(covering)
    rep = Report()
    rep.kv("COVER ORDER", covering.cover.order)
    rep.kv("BASE ORDER", covering.base.order)
    rep.kv("VIOLATIONS", len(violations))
    if violations:
        for v in violations:
            rep.raw(f"VIOLATION: {v.kind} at {v.where}: {v.detail}")
        rep.kv("INCLUDED", "FAILED", False)
        rep.emit(args.json)
        return 1
    inc = spectral_inclusion_check(covering, tol=args.tol)
    rep.kv("BASE SPECTRUM", _spectrum_str(inc.base_spectrum.values),
           [format_complex(v) for v in inc.base_spectrum.values])
    rep.kv("COVER SPECTRUM", _spectrum_str(inc.cover_spectrum.values),
           [format_complex(v) for v in inc.cover_spectrum.values])
    rep.kv("INTERTWINING RESIDUAL", _fmt(inc.intertwining_residual), inc.intertwining_residual)
    rep.kv("SUBSET DEVIATION", _fmt(inc.subset.max_deviation), inc.subset.max_deviation)
    route = deficiency_route_check(covering, radius=args.radius, tol=args.tol, side=args.side)
    rep.kv("ROUTE R", _fmt(route.radius), route.radius)
    rep.kv("ROUTE SIDE", route.side)
    steps = []
    for i, st in enumerate(route.steps):
        rep.raw(
            f"STEP {i}: lambda={format_complex(st.lam)} base={_fmt(st.base_witness)} "
            f"cover={_fmt(st.cover_witness)} dist={_fmt(st.spectrum_distance)} "
            f"{'ok' if st.ok else 'FAILED'}"
        )
        steps.append(
            {
                "lambda": format_complex(st.lam),
                "base-witness": st.base_witness,
                "cover-witness": st.cover_witness,
                "spectrum-distance": st.spectrum_distance,
                "ok": st.ok,
            }
        )
    rep.jset("route-steps", steps)
    ok = inc.included and route.all_ok
    rep.kv("INCLUDED", "ok" if ok else "FAILED", ok)
    rep.emit(args.json)
    return 0 if ok else 1


def cmd_orbital(args) -> int:
    spec = read_action(args.action)
    action = spec.realize(args.level)
    element = read_element(args.element)
    comp = spectra_compare_orbits(
        action, action, args.x, args.y, element,
        tol=args.tol, max_radius=args.max_radius,
    )
    rep = Report()
    rep.kv("ELEMENT", " , ".join(
        f"{word_str(w)}:{format_complex(element.terms[w])}" for w in element.support()
    ))
    rep.kv("ORBIT X", f"{comp.root_x} size={comp.orbit_size_x}",
           {"root": comp.root_x, "size": comp.orbit_size_x})
    rep.kv("ORBIT Y", f"{comp.root_y} size={comp.orbit_size_y}",
           {"root": comp.root_y, "size": comp.orbit_size_y})
    rep.kv("R", _fmt(comp.radius), comp.radius)
    rep.kv("SPECTRUM X", _spectrum_str(comp.spectrum_x.values),
           [format_complex(v) for v in comp.spectrum_x.values])
    rep.kv("SPECTRUM Y", _spectrum_str(comp.spectrum_y.values),
           [format_complex(v) for v in comp.spectrum_y.values])
    rep.kv("HAUSDORFF", _fmt(comp.hausdorff), comp.hausdorff)
    rep.kv("LOCAL-ISO RADIUS", comp.max_common_radius)
    rep.kv("LOCAL-ISO SATURATED", "yes" if comp.saturated else "no", comp.saturated)
    misses = [c for c in comp.cross_checks if not (c.in_x.member and c.in_y.member)]
    rep.kv("CROSS-CHECKS", len(comp.cross_checks))
    rep.kv("CROSS-MISSES", len(misses))
    for c in misses:
        rep.raw(
            f"MISS: lambda={format_complex(c.lam)} "
            f"x={'yes' if c.in_x.member else 'no'} y={'yes' if c.in_y.member else 'no'}"
        )
    rep.jset("cross-miss-list", [format_complex(c.lam) for c in misses])
    code = 0
    gx = orbital_graph(action, args.x, element)
    gy = orbital_graph(action, args.y, element)
    reach = max(max((len(w) for w in gx.alphabet), default=1), 1)
    verdict_idx = min(reach, len(comp.local_iso.radii) - 1)
    match = comp.local_iso.radii[verdict_idx].x_matches.get(args.x)
    if comp.max_common_radius >= reach and match is not None:
        alpha = comp.spectrum_x.values[-1]
        builder = lambda g: positive_element_graph(g, element, alpha, comp.radius)
        vx, vy = rayleigh_transfer(
            gx, gy, builder, FinSuppVector.delta(args.x), 0, (args.x, match)
        )
        dev = abs(vx - vy)
        rep.kv("TRANSFER ALPHA", format_complex(alpha))
        rep.kv("TRANSFER X", _fmt(vx), vx)
        rep.kv("TRANSFER Y", _fmt(vy), vy)
        rep.kv("TRANSFER DEVIATION", _fmt(dev), dev)
        ok = dev <= 1e-12
        rep.kv("TRANSFER", "ok" if ok else "FAILED", ok)
        if not ok:
            code = 1
    else:
        rep.kv("TRANSFER", "skipped (no match at transfer radius)", "skipped")
    rep.emit(args.json)
    return code


def cmd_demo_shift(args) -> int:
    report = shift_counterexample_report(depth=args.depth, trials=args.trials, seed=args.seed)
    if args.json:
        print(
            json.dumps(
                {
                    "depth": report.depth,
                    "trials": report.trials,
                    "radius": report.radius,
                    "isometry-exact": report.isometry_exact,
                    "corange-kills-origin": report.corange_kills_origin,
                    "range-orthogonal-to-origin": report.range_orthogonal_to_origin,
                    "right-distance": report.right_distance,
                    "left-distance": report.left_distance,
                    "one-sided-misses-membership": report.one_sided_misses_membership,
                    "passed": report.passed,
                },
                indent=2,
                sort_keys=True,
            )
        )
    else:
        for line in report.lines():
            print(line)
    return 0 if report.passed else 1


def _add_common(p: argparse.ArgumentParser, tol_default: float):
    p.add_argument("--tol", type=float, default=tol_default, help="numerical tolerance")
    p.add_argument("--json", action="store_true", help="emit one JSON object instead of text")
    p.add_argument("--jobs", type=int, default=1, help="accepted for compatibility; single-threaded")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wgraph",
        description="weighted-graph operator algebra, coverings and orbital spectra",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graph-op", help="apply a graph operation with a matrix self-check")
    p.add_argument("op", choices=["scale", "add", "adjoint", "compose", "deficiency"])
    p.add_argument("--graph", required=True, help="input graph file (.wg)")
    p.add_argument("--other", help="second graph for compose")
    p.add_argument("--factor", help="complex factor for scale/add")
    p.add_argument("--lambda", dest="lam", help="spectral point for deficiency")
    p.add_argument("--R", dest="radius", type=float, help="deficiency radius")
    p.add_argument("--side", choices=["left", "right"], default="right")
    p.add_argument("--out", help="write the result graph here")
    _add_common(p, 1e-12)
    p.set_defaults(func=cmd_graph_op)

    p = sub.add_parser("spectrum", help="eigenvalues and optional membership test")
    p.add_argument("--graph", help="graph file (.wg)")
    p.add_argument("--matrix", help="matrix file (.mat)")
    p.add_argument("--check-lambda", help="test this point for spectral membership")
    p.add_argument("--R", dest="radius", type=float, help="membership radius (default 2x norm bound)")
    p.add_argument("--out", help="write the materialized matrix here")
    _add_common(p, 1e-9)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("cover", help="covering-map tools")
    csub = p.add_subparsers(dest="subcommand", required=True)

    q = csub.add_parser("verify", help="check the covering axioms")
    q.add_argument("--map", required=True, help="covering file (.cov)")
    _add_common(q, 1e-12)
    q.set_defaults(func=cmd_cover_verify)

    q = csub.add_parser("lift", help="build a cover from a voltage assignment")
    q.add_argument("--graph", required=True, help="base graph file (.wg)")
    q.add_argument("--volt", required=True, help="voltage file (.volt)")
    q.add_argument("--out", help="write the covering here (.cov)")
    _add_common(q, 1e-12)
    q.set_defaults(func=cmd_cover_lift)

    q = csub.add_parser("include", help="spectral inclusion along a covering")
    q.add_argument("--map", required=True, help="covering file (.cov)")
    q.add_argument("--R", dest="radius", type=float, help="deficiency radius override")
    q.add_argument("--side", choices=["left", "right"], default="right")
    _add_common(q, 1e-8)
    q.set_defaults(func=cmd_cover_include)

    p = sub.add_parser("orbital", help="compare orbital operators at two base points")
    p.add_argument("--action", required=True, help="action file (.act)")
    p.add_argument("--element", required=True, help="group-algebra element file (.elt)")
    p.add_argument("--x", required=True, help="first base point")
    p.add_argument("--y", required=True, help="second base point")
    p.add_argument("--level", type=int, help="expansion level for transducer actions")
    p.add_argument("--radius", dest="max_radius", type=int, help="cap for the local-iso scan")
    _add_common(p, 1e-9)
    p.set_defaults(func=cmd_orbital)

    p = sub.add_parser("demo-shift", help="one-sided shift: why both deficiency sides matter")
    p.add_argument("--depth", type=int, default=100, help="how far out to test exact identities")
    p.add_argument("--trials", type=int, default=100, help="random vectors for the exact checks")
    p.add_argument("--seed", type=int, default=0)
    _add_common(p, 1e-12)
    p.set_defaults(func=cmd_demo_shift)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (WGraphError, ValueError, OSError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
