"""Graphs as operators: dense materialization and sparse application."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import WeightedGraph
from .errors import DimensionCapError

__all__ = [
    "MAX_DENSE_DIM",
    "FinSuppVector",
    "StreamedGraph",
    "materialize",
    "apply",
    "norm_bound",
    "matrix_norm_bound",
    "shift_graph",
]

MAX_DENSE_DIM = 2048


def _key_order(k):
    # support may mix int and str keys across call sites; keep sorting total
    return (k.__class__.__name__, k)


class FinSuppVector:
    """Finitely supported vector: a sparse index -> coefficient map.

    Keys are vertex ids or natural numbers (streamed operators).  Zero
    coefficients are never stored, so ``==`` is exact equality of support
    and coefficients, which the shift identities rely on.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries=None):
        data: dict = {}
        if entries is not None:
            items = entries.items() if hasattr(entries, "items") else entries
            for k, v in items:
                w = complex(v)
                if w != 0:
                    data[k] = data.get(k, 0j) + w
        self._entries = {k: v for k, v in data.items() if v != 0}

    @classmethod
    def delta(cls, index) -> "FinSuppVector":
        return cls({index: 1.0})

    def support(self) -> list:
        return sorted(self._entries, key=_key_order)

    def items(self):
        return [(k, self._entries[k]) for k in self.support()]

    def __getitem__(self, key) -> complex:
        return self._entries.get(key, 0j)

    def __len__(self) -> int:
        return len(self._entries)

    def is_zero(self) -> bool:
        return not self._entries

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinSuppVector):
            return NotImplemented
        return self._entries == other._entries

    def __add__(self, other: "FinSuppVector") -> "FinSuppVector":
        out = dict(self._entries)
        for k, v in other._entries.items():
            out[k] = out.get(k, 0j) + v
        return FinSuppVector(out)

    def __sub__(self, other: "FinSuppVector") -> "FinSuppVector":
        return self + (-1.0) * other

    def __rmul__(self, factor) -> "FinSuppVector":
        lam = complex(factor)
        return FinSuppVector({k: lam * v for k, v in self._entries.items()})

    def inner(self, other: "FinSuppVector") -> complex:
        """Inner product, linear in ``self`` and conjugate-linear in ``other``."""
        keys = self._entries.keys() & other._entries.keys()
        return sum((self._entries[k] * other._entries[k].conjugate() for k in sorted(keys, key=_key_order)), 0j)

    def norm(self) -> float:
        return math.sqrt(sum(abs(v) ** 2 for v in self._entries.values()))

    def __repr__(self) -> str:
        body = ", ".join(f"{k!r}: {v}" for k, v in self.items())
        return f"FinSuppVector({{{body}}})"


@dataclass(frozen=True)
class StreamedGraph:
    """Operator given by a local out-arc rule on an unbounded vertex set.

    ``rule(v)`` lists the out-arcs of ``v`` as ``(target, weight)`` pairs
    and defines the operator row by row: ``(H f)(v) = sum w * f(target)``.
    ``sources(v)``, when given, lists every vertex with an out-arc into
    ``v``; sparse application needs it (an out-rule alone cannot enumerate
    in-neighbors).  The declared weight-sum bounds, when given, make
    :func:`norm_bound` available.
    """

    rule: Callable[[object], list]
    sources: Callable[[object], list] | None = None
    out_weight_sum: float | None = None
    in_weight_sum: float | None = None
    name: str = "streamed"


def materialize(graph: WeightedGraph) -> np.ndarray:
    """Dense matrix of the graph operator in canonical vertex order.

    Entry ``[u, w]`` is the total weight of the arcs u -> w, so
    ``(H f)(u) = sum_w M[u, w] f(w)``.
    """
    n = len(graph.vertices)
    if n > MAX_DENSE_DIM:
        raise DimensionCapError(f"graph has {n} vertices; the dense cap is {MAX_DENSE_DIM}")
    pos = {v: i for i, v in enumerate(graph.vertices)}
    m = np.zeros((n, n), dtype=complex)
    for a in graph.arcs:
        m[pos[a.source], pos[a.target]] += a.weight
    return m


def apply(op, vec: FinSuppVector) -> FinSuppVector:
    """Apply a graph or streamed operator to a finitely supported vector.

    Exact sparse evaluation: the result support lies in the in-neighborhood
    of the input support and no rounding beyond complex arithmetic occurs.
    """
    if isinstance(op, WeightedGraph):
        out: dict = {}
        for a in op.arcs:
            fv = vec[a.target]
            if fv != 0:
                out[a.source] = out.get(a.source, 0j) + a.weight * fv
        return FinSuppVector(out)
    if isinstance(op, StreamedGraph):
        if op.sources is None:
            raise ValueError(
                "streamed operator declares no source oracle; sparse application is unavailable"
            )
        candidates: set = set()
        for t in vec.support():
            candidates.update(op.sources(t))
        out = {}
        for v in sorted(candidates, key=_key_order):
            total = 0j
            for t, w in op.rule(v):
                total += complex(w) * vec[t]
            if total != 0:
                out[v] = total
        return FinSuppVector(out)
    raise TypeError(f"cannot apply object of type {type(op).__name__}")


def norm_bound(op) -> float:
    """Upper bound on the operator norm.

    For finite graphs this is the Schur bound
    ``sqrt(max_v sum_out |w| * max_v sum_in |w|)``, which dominates the
    spectral radius.  Streamed operators must declare both weight-sum
    bounds; guessing is refused.
    """
    if isinstance(op, WeightedGraph):
        outs = {v: 0.0 for v in op.vertices}
        ins = {v: 0.0 for v in op.vertices}
        for a in op.arcs:
            w = abs(a.weight)
            outs[a.source] += w
            ins[a.target] += w
        return math.sqrt(max(outs.values()) * max(ins.values()))
    if isinstance(op, StreamedGraph):
        if op.out_weight_sum is None or op.in_weight_sum is None:
            raise ValueError("streamed operator declares no weight-sum bounds; norm_bound is unavailable")
        return math.sqrt(float(op.out_weight_sum) * float(op.in_weight_sum))
    raise TypeError(f"no norm bound for object of type {type(op).__name__}")


def matrix_norm_bound(matrix: np.ndarray) -> float:
    """Schur bound ``sqrt(max row abs-sum * max col abs-sum)`` for a matrix."""
    m = np.asarray(matrix)
    if m.size == 0:
        return 0.0
    absm = np.abs(m)
    return float(np.sqrt(absm.sum(axis=1).max() * absm.sum(axis=0).max()))


def shift_graph(direction: str = "forward") -> StreamedGraph:
    """One-sided shift on square-summable sequences over the naturals.

    ``"forward"`` is the isometry with ``(S f)(n) = f(n - 1)`` and
    ``(S f)(0) = 0``, so ``S delta_k = delta_{k+1}``; ``"adjoint"`` is its
    adjoint, ``(S* f)(n) = f(n + 1)``, with ``S* delta_0 = 0``.
    """

    def _check(n):
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise ValueError(f"shift vertex must be a natural number, got {n!r}")
        return n

    if direction == "forward":

        def rule(n):
            return [(n - 1, 1.0)] if _check(n) >= 1 else []

        def sources(n):
            _check(n)
            return [n + 1]

        return StreamedGraph(rule, sources, 1.0, 1.0, "shift")
    if direction == "adjoint":

        def rule(n):
            _check(n)
            return [(n + 1, 1.0)]

        def sources(n):
            return [n - 1] if _check(n) >= 1 else []

        return StreamedGraph(rule, sources, 1.0, 1.0, "shift-adjoint")
    raise ValueError("direction must be 'forward' or 'adjoint'")
