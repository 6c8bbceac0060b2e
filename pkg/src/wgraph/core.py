"""Weighted multigraphs and their operation algebra.

A graph keeps an ordered vertex set and a list of directed arcs, each
carrying a complex weight.  Arcs come in reversal pairs recorded by an
involution on arc indices: an undirected edge is the orbit {a, pairing(a)},
and a loop may be its own reverse.  Each operation below acts on the
associated vertex-space operator (see :func:`wgraph.operator.materialize`)
exactly the way its name suggests: ``scale`` multiplies it by a scalar,
``add_scalar`` adds a multiple of the identity, ``adjoint`` conjugate
transposes it, and ``compose`` multiplies two of them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .errors import GraphStructureError

__all__ = [
    "Arc",
    "WeightedGraph",
    "make_graph",
    "identity_graph",
    "scale",
    "add_scalar",
    "adjoint",
    "compose",
    "compose_with_pairs",
    "deficiency_graph",
    "normalize",
]


@dataclass(frozen=True)
class Arc:
    """Directed arc with a complex weight."""

    source: str
    target: str
    weight: complex


@dataclass(frozen=True)
class WeightedGraph:
    """Immutable weighted multigraph with an arc-reversal pairing.

    ``vertices`` is the canonical (lexicographic) vertex order used for
    materialization and serialization.  ``pairing[i]`` is the index of the
    reversal of arc ``i``; it satisfies ``pairing[pairing[i]] == i`` and the
    reversal swaps the endpoints (so a self-paired arc is a loop).
    """

    vertices: tuple[str, ...]
    arcs: tuple[Arc, ...]
    pairing: tuple[int, ...]

    @cached_property
    def _vertex_pos(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def _out(self) -> dict:
        out = {v: [] for v in self.vertices}
        for i, a in enumerate(self.arcs):
            out[a.source].append(i)
        return {v: tuple(ix) for v, ix in out.items()}

    def vertex_index(self, vertex: str) -> int:
        try:
            return self._vertex_pos[vertex]
        except KeyError:
            raise GraphStructureError(f"unknown vertex {vertex!r}") from None

    def out_arcs(self, vertex: str) -> tuple[int, ...]:
        """Indices of the arcs whose source is ``vertex``."""
        if vertex not in self._out:
            raise GraphStructureError(f"unknown vertex {vertex!r}")
        return self._out[vertex]

    @property
    def order(self) -> int:
        return len(self.vertices)

    def max_out_degree(self) -> int:
        """Largest number of arcs leaving a single vertex (boundedness witness)."""
        return max((len(ix) for ix in self._out.values()), default=0)

    def max_abs_weight(self) -> float:
        return max((abs(a.weight) for a in self.arcs), default=0.0)


def make_graph(vertices: Iterable[str], arcs, pairing) -> WeightedGraph:
    """Validate and build a weighted graph.

    ``arcs`` may hold :class:`Arc` values or ``(source, target, weight)``
    triples.  ``pairing`` must be an involution on arc indices whose image
    arc has swapped endpoints; a loop may be paired with itself (one arc of
    multiplicity one) or with a second, distinct loop arc.
    """
    verts = [str(v) for v in vertices]
    if not verts:
        raise GraphStructureError("a graph needs at least one vertex")
    for v in verts:
        if not v or any(ch.isspace() for ch in v):
            raise GraphStructureError(f"vertex id {v!r} is empty or contains whitespace")
    if len(set(verts)) != len(verts):
        dup = sorted(v for v in set(verts) if verts.count(v) > 1)
        raise GraphStructureError(f"duplicate vertex ids: {dup}")
    vt = tuple(sorted(verts))
    vset = set(vt)

    norm_arcs: list[Arc] = []
    for k, a in enumerate(arcs):
        if isinstance(a, Arc):
            arc = Arc(a.source, a.target, complex(a.weight))
        else:
            s, t, w = a
            arc = Arc(str(s), str(t), complex(w))
        if arc.source not in vset:
            raise GraphStructureError(f"arc {k}: unknown source vertex {arc.source!r}")
        if arc.target not in vset:
            raise GraphStructureError(f"arc {k}: unknown target vertex {arc.target!r}")
        norm_arcs.append(arc)

    pr = tuple(int(p) for p in pairing)
    if len(pr) != len(norm_arcs):
        raise GraphStructureError(
            f"pairing length {len(pr)} does not match arc count {len(norm_arcs)}"
        )
    for i, j in enumerate(pr):
        if not 0 <= j < len(norm_arcs):
            raise GraphStructureError(f"pairing[{i}] = {j} is out of range")
        if pr[j] != i:
            raise GraphStructureError(f"pairing is not an involution at arc {i}")
        if norm_arcs[j].source != norm_arcs[i].target or norm_arcs[j].target != norm_arcs[i].source:
            raise GraphStructureError(f"pairing[{i}] = {j} does not reverse the arc endpoints")
    return WeightedGraph(vt, tuple(norm_arcs), pr)


def identity_graph(vertices: Iterable[str]) -> WeightedGraph:
    """Graph of the identity operator: one unit self-paired loop per vertex."""
    vt = sorted(str(v) for v in vertices)
    return make_graph(vt, [(v, v, 1.0) for v in vt], range(len(vt)))


def scale(graph: WeightedGraph, factor) -> WeightedGraph:
    """Multiply every arc weight by ``factor``; arcs and pairing are unchanged."""
    lam = complex(factor)
    arcs = tuple(Arc(a.source, a.target, lam * a.weight) for a in graph.arcs)
    return WeightedGraph(graph.vertices, arcs, graph.pairing)


def add_scalar(graph: WeightedGraph, shift) -> WeightedGraph:
    """Append a self-paired loop of weight ``shift`` at every vertex.

    The loops are appended after the existing arcs in canonical vertex
    order, so the operator gains ``shift`` times the identity.
    """
    lam = complex(shift)
    arcs = list(graph.arcs)
    pairing = list(graph.pairing)
    for v in graph.vertices:
        pairing.append(len(arcs))
        arcs.append(Arc(v, v, lam))
    return WeightedGraph(graph.vertices, tuple(arcs), tuple(pairing))


def adjoint(graph: WeightedGraph) -> WeightedGraph:
    """Conjugate each weight and move it across the reversal pairing.

    The new weight of arc ``a`` is the conjugate of the old weight of
    ``pairing(a)``; this conjugate-transposes the associated operator and
    is involutive.
    """
    arcs = tuple(
        Arc(a.source, a.target, complex(graph.arcs[j].weight).conjugate())
        for a, j in zip(graph.arcs, graph.pairing)
    )
    return WeightedGraph(graph.vertices, arcs, graph.pairing)


def _same_skeleton(graph: WeightedGraph, other: WeightedGraph) -> bool:
    return (
        len(graph.arcs) == len(other.arcs)
        and graph.pairing == other.pairing
        and all(
            a.source == b.source and a.target == b.target
            for a, b in zip(graph.arcs, other.arcs)
        )
    )


def _complete_pairing(arcs: list[Arc]) -> list[int]:
    """Build an involutive reversal pairing for an arbitrary arc list.

    Opposite arcs are matched in index order per endpoint pair and loops
    are self-paired; directions without a counterpart get fresh weight-0
    reverse arcs appended to ``arcs`` (the operator is unaffected).
    """
    pairing = [-1] * len(arcs)
    buckets: dict[tuple[str, str], list[int]] = {}
    for k, a in enumerate(arcs):
        buckets.setdefault((a.source, a.target), []).append(k)
    for (s, t), idx in sorted(buckets.items()):
        if s == t:
            for k in idx:
                pairing[k] = k
        elif (s, t) < (t, s):
            rev = buckets.get((t, s), [])
            for k, r in zip(idx, rev):
                pairing[k] = r
                pairing[r] = k
            for k in idx[len(rev):]:
                pairing[k] = len(arcs)
                pairing.append(k)
                arcs.append(Arc(t, s, 0j))
            for r in rev[len(idx):]:
                pairing[r] = len(arcs)
                pairing.append(r)
                arcs.append(Arc(s, t, 0j))
    return pairing


def compose_with_pairs(graph: WeightedGraph, other: WeightedGraph):
    """Compose two graphs on one vertex set, keeping the factor bookkeeping.

    The arcs of the result are the composable pairs ``(a, b)`` with ``a``
    from ``graph``, ``b`` from ``other`` and ``target(a) == source(b)``,
    weighted by the product of the factor weights, so the result's operator
    is the product of the factor operators.  When the factors share an arc
    skeleton (endpoints and pairing agree index by index) the reversal of
    ``(a, b)`` is ``(pairing(b), pairing(a))``, the reversed length-2 path.
    Otherwise reversals are completed deterministically, adding weight-0
    arcs where a direction has no counterpart.

    Returns ``(composed, pairs)`` where ``pairs[k]`` is the factor index
    pair ``(i, j)`` of arc ``k``, or ``None`` for a zero-completion arc.
    """
    if graph.vertices != other.vertices:
        raise GraphStructureError("compose requires identical vertex sets")
    by_source: dict[str, list[int]] = {}
    for j, b in enumerate(other.arcs):
        by_source.setdefault(b.source, []).append(j)

    arcs: list[Arc] = []
    pairs: list[tuple[int, int] | None] = []
    pos: dict[tuple[int, int], int] = {}
    for i, a in enumerate(graph.arcs):
        for j in by_source.get(a.target, ()):
            b = other.arcs[j]
            pos[(i, j)] = len(arcs)
            arcs.append(Arc(a.source, b.target, a.weight * b.weight))
            pairs.append((i, j))

    if _same_skeleton(graph, other):
        pairing = [0] * len(arcs)
        for (i, j), k in pos.items():
            pairing[k] = pos[(other.pairing[j], graph.pairing[i])]
    else:
        pairing = _complete_pairing(arcs)
        pairs.extend([None] * (len(arcs) - len(pairs)))
    composed = WeightedGraph(graph.vertices, tuple(arcs), tuple(pairing))
    return composed, tuple(pairs)


def compose(graph: WeightedGraph, other: WeightedGraph) -> WeightedGraph:
    """Composition graph; its operator is ``H_graph @ H_other``."""
    return compose_with_pairs(graph, other)[0]


def deficiency_graph(graph: WeightedGraph, lam, radius: float, side: str = "right") -> WeightedGraph:
    """Graph of the membership-test operator at ``lam``.

    For ``side="right"`` the result materializes to
    ``I - (H - lam)*(H - lam) / radius**2``; ``side="left"`` swaps the
    product order.  Assembled purely from ``add_scalar``, ``adjoint``,
    ``compose`` and ``scale``, so the matrix identity holds exactly.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    shifted = add_scalar(graph, -complex(lam))
    star = adjoint(shifted)
    if side == "right":
        prod = compose(star, shifted)
    else:
        prod = compose(shifted, star)
    return add_scalar(scale(prod, -1.0 / (radius * radius)), 1.0)


def normalize(graph: WeightedGraph) -> WeightedGraph:
    """Merge parallel arcs with equal endpoints by summing their weights.

    An operator-level no-op that collapses the multigraph to at most one
    arc per ordered vertex pair (reverse directions are kept or created so
    the pairing stays total; loops become a single self-paired arc).
    """
    totals: dict[tuple[str, str], complex] = {}
    for a in graph.arcs:
        key = (a.source, a.target)
        totals[key] = totals.get(key, 0j) + a.weight
    keys = set(totals) | {(t, s) for (s, t) in totals}
    ordered = sorted(keys)
    pos = {key: k for k, key in enumerate(ordered)}
    arcs = tuple(Arc(s, t, totals.get((s, t), 0j)) for s, t in ordered)
    pairing = tuple(pos[(t, s)] for (s, t) in ordered)
    return WeightedGraph(graph.vertices, arcs, pairing)
