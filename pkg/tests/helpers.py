"""Shared generators and oracles for the test suite."""

from __future__ import annotations

import numpy as np

from wgraph import (
    GroupAction,
    GroupAlgebraElement,
    WeightedGraph,
    make_graph,
    voltage_cover,
)

ODOMETER_TRANSITIONS = {
    "a": {"0": ("1", "e"), "1": ("0", "a")},
    "e": {"0": ("0", "e"), "1": ("1", "e")},
}


def odometer_action(level: int) -> GroupAction:
    """Binary add-one-with-carry transducer expanded to level-``level`` words."""
    return GroupAction.from_mealy(ODOMETER_TRANSITIONS, ["0", "1"], level)


def adjacency_element() -> GroupAlgebraElement:
    return GroupAlgebraElement({("a",): 1.0, ("a'",): 1.0})


def circulant_spectrum(n: int) -> np.ndarray:
    """Eigenvalues of the n-cycle adjacency matrix, sorted ascending."""
    return np.sort(2.0 * np.cos(2.0 * np.pi * np.arange(n) / n))


def unit_disk(rng: np.random.Generator, size=None) -> np.ndarray:
    r = np.sqrt(rng.uniform(0, 1, size=size))
    theta = rng.uniform(0, 2 * np.pi, size=size)
    return r * np.exp(1j * theta)


def random_graph(
    rng: np.random.Generator,
    max_n: int = 20,
    max_pairs: int | None = None,
    n: int | None = None,
) -> WeightedGraph:
    """Random weighted multigraph with a valid reversal pairing.

    Mixes mutually-paired arc pairs between distinct vertices, self-paired
    loops, and mutually-paired loop pairs; weights in the closed unit disk.
    Passing ``n`` fixes the vertex set, so two draws share it (composition
    needs that).
    """
    if n is None:
        n = int(rng.integers(1, max_n + 1))
    vertices = [f"v{i:02d}" for i in range(n)]
    if max_pairs is None:
        max_pairs = 2 * n
    arcs: list[tuple[str, str, complex]] = []
    pairing: list[int] = []
    for _ in range(int(rng.integers(0, max_pairs + 1))):
        s, t = rng.integers(0, n, size=2)
        u, v = vertices[s], vertices[t]
        if u == v and rng.random() < 0.5:
            arcs.append((u, u, complex(unit_disk(rng))))
            pairing.append(len(arcs) - 1)
        else:
            k = len(arcs)
            arcs.append((u, v, complex(unit_disk(rng))))
            arcs.append((v, u, complex(unit_disk(rng))))
            pairing.extend([k + 1, k])
    return make_graph(vertices, arcs, pairing)


def random_matrix(rng: np.random.Generator, max_n: int = 30) -> np.ndarray:
    n = int(rng.integers(1, max_n + 1))
    return unit_disk(rng, size=(n, n))


def random_involution(rng: np.random.Generator, d: int) -> tuple[int, ...]:
    perm = list(range(d))
    order = list(rng.permutation(d))
    while len(order) >= 2:
        i = order.pop()
        j = order.pop()
        if rng.random() < 0.7:
            perm[i], perm[j] = j, i
    return tuple(perm)


def random_voltage_cover(rng: np.random.Generator, max_n: int = 12, max_degree: int = 4):
    """Seeded voltage cover over a random base; returns (base, cover, covering)."""
    base = random_graph(rng, max_n=max_n, max_pairs=max_n)
    if not base.arcs:
        v = base.vertices[0]
        base = make_graph(base.vertices, [(v, v, complex(unit_disk(rng)))], [0])
    d = int(rng.integers(1, max_degree + 1))
    volts: list[tuple[int, ...] | None] = [None] * len(base.arcs)
    for k, p in enumerate(base.pairing):
        if volts[k] is not None:
            continue
        if p == k:
            volts[k] = random_involution(rng, d)
        else:
            perm = tuple(int(i) for i in rng.permutation(d))
            inv = [0] * d
            for i, j in enumerate(perm):
                inv[j] = i
            volts[k] = perm
            volts[p] = tuple(inv)
    cover, covering = voltage_cover(base, d, volts)
    return base, cover, covering


def random_finite_action(rng: np.random.Generator, max_points: int = 12, max_gens: int = 3) -> GroupAction:
    n = int(rng.integers(2, max_points + 1))
    points = tuple(f"p{i:02d}" for i in range(n))
    names = ["a", "b", "c"][: int(rng.integers(1, max_gens + 1))]
    perms = {name: tuple(int(i) for i in rng.permutation(n)) for name in names}
    return GroupAction(points, perms)


def random_element(rng: np.random.Generator, names, max_terms: int = 4, max_len: int = 2) -> GroupAlgebraElement:
    terms = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        length = int(rng.integers(1, max_len + 1))
        word = tuple(
            names[rng.integers(0, len(names))] + ("'" if rng.random() < 0.5 else "")
            for _ in range(length)
        )
        terms[word] = terms.get(word, 0j) + complex(unit_disk(rng))
    elem = GroupAlgebraElement(terms)
    if not elem:
        elem = GroupAlgebraElement({(names[0],): 1.0})
    return elem
