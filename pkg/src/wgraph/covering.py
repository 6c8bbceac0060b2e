"""Covering maps between weighted graphs and spectral transport along them.

A covering is a pair of maps (vertices of the cover onto vertices of the
base, arcs onto arcs) that preserves endpoints, reversal pairing and
weights and restricts to a bijection on the out-arcs of every vertex.
Pulling functions back along the vertex map then intertwines the two graph
operators, which forces the base spectrum into the cover spectrum for
finite graphs.  The same inclusion can be reached through the deficiency
graphs, transporting the eigenvalue-1 witness instead of eigenvectors;
:func:`deficiency_route_check` runs that route end to end.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    WeightedGraph,
    add_scalar,
    adjoint,
    compose_with_pairs,
    make_graph,
    scale,
)
from .errors import CoveringError, GraphStructureError
from .operator import materialize, norm_bound
from .spectra import DEFAULT_SUBSET_TOL, SpectralSet, SubsetResult, spectrum, subset_check

__all__ = [
    "CoveringMap",
    "Violation",
    "InclusionReport",
    "RouteStep",
    "DeficiencyRouteReport",
    "identity_covering",
    "verify_covering",
    "induced_covering",
    "induced_deficiency_covering",
    "voltage_cover",
    "pullback_matrix",
    "spectral_inclusion_check",
    "deficiency_route_check",
]


@dataclass(frozen=True)
class CoveringMap:
    """Covering of ``base`` by ``cover``.

    ``vertex_map`` sends cover vertices onto base vertices; ``arc_map[i]``
    is the base arc index that cover arc ``i`` projects to.
    """

    cover: WeightedGraph
    base: WeightedGraph
    vertex_map: dict
    arc_map: tuple[int, ...]


@dataclass(frozen=True)
class Violation:
    """One failed covering invariant (kind, location, human detail)."""

    kind: str  # endpoint | pairing | weight | local_bijectivity | surjectivity
    where: str
    detail: str


def identity_covering(graph: WeightedGraph) -> CoveringMap:
    return CoveringMap(graph, graph, {v: v for v in graph.vertices}, tuple(range(len(graph.arcs))))


def verify_covering(covering: CoveringMap) -> list[Violation]:
    """Check every covering invariant; an empty list means valid.

    All violations are reported, not just the first.  Maps that reference
    unknown vertices or arc indices are malformed inputs and raise
    GraphStructureError instead of being reported as violations.
    """
    cov, base = covering.cover, covering.base
    vm, am = covering.vertex_map, covering.arc_map
    if set(vm.keys()) != set(cov.vertices):
        raise GraphStructureError("vertex map domain does not equal the cover vertex set")
    base_vs = set(base.vertices)
    for v, w in vm.items():
        if w not in base_vs:
            raise GraphStructureError(f"vertex map sends {v!r} to unknown vertex {w!r}")
    if len(am) != len(cov.arcs):
        raise GraphStructureError(f"arc map length {len(am)} does not match arc count {len(cov.arcs)}")
    for i, j in enumerate(am):
        if not 0 <= j < len(base.arcs):
            raise GraphStructureError(f"arc map sends arc {i} to unknown arc index {j}")

    violations: list[Violation] = []
    for i, a in enumerate(cov.arcs):
        img = base.arcs[am[i]]
        if vm[a.source] != img.source or vm[a.target] != img.target:
            violations.append(
                Violation("endpoint", f"arc {i}", f"projects to arc {am[i]} with incompatible endpoints")
            )
        if am[cov.pairing[i]] != base.pairing[am[i]]:
            violations.append(
                Violation("pairing", f"arc {i}", "reversal does not commute with the arc map")
            )
        if complex(a.weight) != complex(img.weight):
            violations.append(
                Violation("weight", f"arc {i}", f"weight {a.weight} projects to {img.weight}")
            )
    for v in cov.vertices:
        images = sorted(am[i] for i in cov.out_arcs(v))
        expected = sorted(base.out_arcs(vm[v]))
        if images != expected:
            violations.append(
                Violation(
                    "local_bijectivity",
                    f"vertex {v}",
                    "out-arcs do not map bijectively onto the base out-arcs",
                )
            )
    missing = sorted(set(base.vertices) - set(vm.values()))
    if missing:
        violations.append(Violation("surjectivity", f"vertices {missing}", "base vertices not covered"))
    return violations


def _checked(covering: CoveringMap, context: str) -> CoveringMap:
    violations = verify_covering(covering)
    if violations:
        detail = "; ".join(f"{v.kind} at {v.where}" for v in violations[:5])
        raise CoveringError(f"{context}: {len(violations)} violation(s): {detail}")
    return covering


def induced_covering(covering: CoveringMap, op: str, *, factor=None, other: CoveringMap | None = None) -> CoveringMap:
    """Transport a covering through a graph operation.

    ``op`` is one of "scale" / "add_scalar" (both need ``factor``),
    "adjoint", or "compose" (needs ``other``, a second covering with the
    same vertex map on the same vertex sets).  Scaling and conjugation
    reuse the arc map; adding a scalar extends it loop-to-loop; composition
    sends the composed arc (a, b) to (image of a, image of b).  The result
    is re-verified before being returned.
    """
    vm = dict(covering.vertex_map)
    if op == "scale":
        out = CoveringMap(scale(covering.cover, factor), scale(covering.base, factor), vm, covering.arc_map)
    elif op == "add_scalar":
        cov2 = add_scalar(covering.cover, factor)
        base2 = add_scalar(covering.base, factor)
        base_pos = {v: i for i, v in enumerate(covering.base.vertices)}
        offset = len(covering.base.arcs)
        arc_map = list(covering.arc_map)
        for v in covering.cover.vertices:
            arc_map.append(offset + base_pos[vm[v]])
        out = CoveringMap(cov2, base2, vm, tuple(arc_map))
    elif op == "adjoint":
        out = CoveringMap(adjoint(covering.cover), adjoint(covering.base), vm, covering.arc_map)
    elif op == "compose":
        if other is None:
            raise ValueError("compose needs a second covering")
        if covering.vertex_map != other.vertex_map:
            raise CoveringError("compose needs coverings with identical vertex maps")
        cov2, cover_pairs = compose_with_pairs(covering.cover, other.cover)
        base2, base_pairs = compose_with_pairs(covering.base, other.base)
        base_pos = {p: k for k, p in enumerate(base_pairs) if p is not None}
        arc_map = []
        for p in cover_pairs:
            if p is None:
                raise CoveringError(
                    "composed cover needed zero-completion arcs; compose factors must share an arc skeleton"
                )
            i, j = p
            key = (covering.arc_map[i], other.arc_map[j])
            if key not in base_pos:
                raise CoveringError(f"no base arc for the composed factor pair {key}")
            arc_map.append(base_pos[key])
        out = CoveringMap(cov2, base2, vm, tuple(arc_map))
    else:
        raise ValueError(f"unknown operation {op!r}")
    return _checked(out, f"induced covering for {op}")


def induced_deficiency_covering(covering: CoveringMap, lam, radius: float, side: str = "right") -> CoveringMap:
    """Covering between the deficiency graphs of cover and base at ``lam``.

    Built by chaining induced coverings through the same operations that
    assemble :func:`wgraph.core.deficiency_graph`, so the two graphs equal
    the direct constructions arc for arc.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    shifted = induced_covering(covering, "add_scalar", factor=-complex(lam))
    star = induced_covering(shifted, "adjoint")
    if side == "right":
        prod = induced_covering(star, "compose", other=shifted)
    else:
        prod = induced_covering(shifted, "compose", other=star)
    scaled = induced_covering(prod, "scale", factor=-1.0 / (radius * radius))
    return induced_covering(scaled, "add_scalar", factor=1.0)


def _inverse_perm(perm: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, j in enumerate(perm):
        inv[j] = i
    return tuple(inv)


def voltage_cover(base: WeightedGraph, degree: int, voltages) -> tuple[WeightedGraph, CoveringMap]:
    """Lift a base graph to a degree-d cover via arc voltages.

    ``voltages[k]`` is a permutation of the sheets ``0..d-1`` (tuple of
    images) attached to arc ``k``; the voltage of a reversal must be the
    inverse permutation, so a self-paired arc needs an involutive voltage.
    Arc ``k = (v -> w)`` lifts to the d arcs ``(v, i) -> (w, volt[k][i])``
    with the same weight; vertex ``(v, i)`` is named ``"v@<i+1>"``.
    Returns the cover and the (already verified) covering map.
    """
    d = int(degree)
    if d < 1:
        raise ValueError("degree must be at least 1")
    volts = [tuple(int(x) for x in p) for p in voltages]
    if len(volts) != len(base.arcs):
        raise ValueError(f"need one voltage per arc: got {len(volts)} for {len(base.arcs)} arcs")
    for k, p in enumerate(volts):
        if sorted(p) != list(range(d)):
            raise ValueError(f"voltage of arc {k} is not a permutation of 0..{d - 1}")
    for k, p in enumerate(volts):
        if p != _inverse_perm(volts[base.pairing[k]]):
            raise ValueError(f"voltage of arc {k} is not inverse to the voltage of its reversal")

    names = {(v, i): f"{v}@{i + 1}" for v in base.vertices for i in range(d)}
    if len(set(names.values())) != len(names):
        raise ValueError("lifted vertex names collide; rename the base vertices")
    arcs = []
    arc_map = []
    pairing = []
    for k, a in enumerate(base.arcs):
        for i in range(d):
            arcs.append((names[(a.source, i)], names[(a.target, volts[k][i])], a.weight))
            arc_map.append(k)
            pairing.append(base.pairing[k] * d + volts[k][i])
    cover = make_graph(names.values(), arcs, pairing)
    vertex_map = {names[(v, i)]: v for (v, i) in names}
    covering = CoveringMap(cover, base, vertex_map, tuple(arc_map))
    return cover, _checked(covering, "voltage cover")


def pullback_matrix(covering: CoveringMap) -> np.ndarray:
    """Matrix of f -> f o vertex_map from base functions to cover functions."""
    cov, base = covering.cover, covering.base
    base_pos = {v: i for i, v in enumerate(base.vertices)}
    p = np.zeros((len(cov.vertices), len(base.vertices)))
    for i, v in enumerate(cov.vertices):
        p[i, base_pos[covering.vertex_map[v]]] = 1.0
    return p


@dataclass(frozen=True)
class InclusionReport:
    base_spectrum: SpectralSet
    cover_spectrum: SpectralSet
    subset: SubsetResult
    intertwining_residual: float

    @property
    def included(self) -> bool:
        return self.subset.included


def spectral_inclusion_check(covering: CoveringMap, tol: float = DEFAULT_SUBSET_TOL) -> InclusionReport:
    """Verify the base spectrum sits inside the cover spectrum.

    Checks subset_check(spec(base), spec(cover), tol) and additionally the
    intertwining H_cover P = P H_base for the pullback P, which forces the
    inclusion for finite covers (a base eigenvector pulls back to a nonzero
    cover eigenvector since the vertex map is onto).
    """
    _checked(covering, "spectral inclusion")
    h1 = materialize(covering.cover)
    h2 = materialize(covering.base)
    p = pullback_matrix(covering)
    residual = float(np.abs(h1 @ p - p @ h2).max())
    cover_spec = spectrum(h1)
    base_spec = spectrum(h2)
    return InclusionReport(base_spec, cover_spec, subset_check(base_spec, cover_spec, tol), residual)


@dataclass(frozen=True)
class RouteStep:
    lam: complex
    base_witness: float      # distance of 1 to the base deficiency spectrum
    cover_witness: float     # distance of 1 to the cover deficiency spectrum
    spectrum_distance: float  # distance of lam to the cover spectrum
    ok: bool


@dataclass(frozen=True)
class DeficiencyRouteReport:
    radius: float
    tol: float
    side: str
    steps: tuple[RouteStep, ...]

    @property
    def all_ok(self) -> bool:
        return all(s.ok for s in self.steps)


def deficiency_route_check(
    covering: CoveringMap,
    lambdas=None,
    radius: float | None = None,
    tol: float = DEFAULT_SUBSET_TOL,
    side: str = "right",
) -> DeficiencyRouteReport:
    """Spectral inclusion along the deficiency graphs, witness by witness.

    For each lam (default: every base eigenvalue) this builds the two
    deficiency graphs, the induced covering between them, and checks that
    the eigenvalue-1 witness appears on both sides and that lam indeed
    lands in the cover spectrum.  A second, independent route to the same
    inclusion that :func:`spectral_inclusion_check` reaches via pullbacks.
    """
    _checked(covering, "deficiency route")
    if radius is None:
        radius = 2.0 * max(norm_bound(covering.cover), norm_bound(covering.base))
    if lambdas is None:
        lambdas = spectrum(materialize(covering.base)).values
    cover_vals = spectrum(materialize(covering.cover)).as_array()
    steps = []
    for lam in lambdas:
        lam = complex(lam)
        chain = induced_deficiency_covering(covering, lam, radius, side)
        base_vals = np.linalg.eigvalsh(materialize(chain.base))
        cover_def_vals = np.linalg.eigvalsh(materialize(chain.cover))
        base_w = float(np.min(np.abs(base_vals - 1.0)))
        cover_w = float(np.min(np.abs(cover_def_vals - 1.0)))
        sdist = float(np.min(np.abs(cover_vals - lam)))
        steps.append(RouteStep(lam, base_w, cover_w, sdist, base_w <= tol and cover_w <= tol and sdist <= tol))
    return DeficiencyRouteReport(float(radius), tol, side, tuple(steps))
