"""Orbital graphs of group actions and local spectral transfer.

A finite action is a set of named permutations of a point set; actions may
also be expanded from an invertible letter-transducer table level by
level.  A group-algebra element m (complex combination of generator
words) turns each orbit into a labeled weighted graph whose operator is
sum_g m(g) rho(g) restricted to the orbit, with rho(g) delta_z =
delta_{g z}.  Balls in these graphs carry enough structure to transport
Rayleigh quotients between orbits that look alike locally, which is what
connects the spectra of different orbits of the same element.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .core import WeightedGraph, deficiency_graph, make_graph
from .errors import ActionError, DimensionCapError
from .operator import FinSuppVector, MAX_DENSE_DIM, apply, materialize
from .spectra import (
    DEFAULT_MEMBERSHIP_TOL,
    MembershipVerdict,
    SpectralSet,
    hausdorff_distance,
    membership_by_deficiency,
    spectrum,
)

__all__ = [
    "IDENTITY_TOKEN",
    "GroupAction",
    "GroupAlgebraElement",
    "LabeledOrbitalGraph",
    "LocalIsoResult",
    "RadiusVerdict",
    "OrbitComparison",
    "MembershipCross",
    "parse_word",
    "word_str",
    "invert_word",
    "orbit",
    "orbital_graph",
    "default_radius_bound",
    "ball",
    "local_iso_check",
    "positive_element_graph",
    "rayleigh_transfer",
    "spectra_compare_orbits",
]

IDENTITY_TOKEN = "e"


def _check_token(token: str) -> str:
    base = token[:-1] if token.endswith("'") else token
    if not base or "'" in base or any(ch.isspace() for ch in base):
        raise ActionError(f"bad generator token {token!r}")
    if base == IDENTITY_TOKEN:
        raise ActionError(f"{IDENTITY_TOKEN!r} is reserved for the identity word")
    return token


def parse_word(text: str) -> tuple[str, ...]:
    """Parse "a a' b" into a word; the single token "e" is the empty word."""
    toks = text.split()
    if toks == [IDENTITY_TOKEN]:
        return ()
    return tuple(_check_token(t) for t in toks)


def word_str(word: tuple[str, ...]) -> str:
    return " ".join(word) if word else IDENTITY_TOKEN


def _flip(token: str) -> str:
    return token[:-1] if token.endswith("'") else token + "'"


def invert_word(word: tuple[str, ...]) -> tuple[str, ...]:
    return tuple(_flip(t) for t in reversed(word))


def _word_key(word: tuple[str, ...]):
    return (len(word), word)


@dataclass(frozen=True)
class GroupAction:
    """Finite action given by named generator permutations.

    ``points`` is an ordered point set; ``perms[name][i]`` is the position
    of the image of ``points[i]`` under the generator.  Words act with the
    rightmost token first, so a word behaves like the product of its
    generators.  The name "e" is reserved for the identity word.
    """

    points: tuple[str, ...]
    perms: dict

    def __post_init__(self):
        if not self.points:
            raise ActionError("an action needs at least one point")
        for p in self.points:
            if not p or any(ch.isspace() for ch in p):
                raise ActionError(f"point id {p!r} is empty or contains whitespace")
        if len(set(self.points)) != len(self.points):
            raise ActionError("duplicate point ids")
        n = len(self.points)
        for name, perm in self.perms.items():
            _check_token(name)
            if name.endswith("'"):
                raise ActionError(f"generator name {name!r} may not end with an apostrophe")
            if sorted(perm) != list(range(n)):
                raise ActionError(f"generator {name!r} is not a permutation of the point set")

    @cached_property
    def _pos(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}

    @cached_property
    def _inverses(self) -> dict:
        out = {}
        for name, perm in self.perms.items():
            inv = [0] * len(perm)
            for i, j in enumerate(perm):
                inv[j] = i
            out[name] = tuple(inv)
        return out

    def point_index(self, point: str) -> int:
        try:
            return self._pos[point]
        except KeyError:
            raise ActionError(f"unknown point {point!r}") from None

    def generator_names(self) -> tuple[str, ...]:
        return tuple(sorted(self.perms))

    def _token_perm(self, token: str) -> tuple[int, ...]:
        base, inverse = (token[:-1], True) if token.endswith("'") else (token, False)
        if base not in self.perms:
            raise ActionError(f"unknown generator {base!r}")
        return self._inverses[base] if inverse else self.perms[base]

    def act_index(self, word: tuple[str, ...], index: int) -> int:
        for token in reversed(word):
            index = self._token_perm(token)[index]
        return index

    def act_point(self, word: tuple[str, ...], point: str) -> str:
        return self.points[self.act_index(word, self.point_index(point))]

    @classmethod
    def from_permutations(cls, points, perms) -> "GroupAction":
        pts = tuple(str(p) for p in points)
        table = {str(name): tuple(int(i) for i in perm) for name, perm in perms.items()}
        return cls(pts, table)

    @classmethod
    def from_mealy(cls, transitions, alphabet, level: int) -> "GroupAction":
        """Expand an invertible letter transducer to its level-n word action.

        ``transitions[state][letter] = (output_letter, next_state)``; the
        output letters of every state must permute the alphabet (that is
        what makes each state act bijectively).  Points are the length-n
        words over the alphabet in lexicographic order; each state becomes
        a generator, except that a state named "e" stays internal (usable
        in transitions, never as a word token).
        """
        letters = tuple(str(x) for x in alphabet)
        if not letters or len(set(letters)) != len(letters):
            raise ActionError("alphabet must be nonempty without repeats")
        if any(len(ch) != 1 for ch in letters):
            raise ActionError("alphabet letters must be single characters")
        if level < 1:
            raise ActionError("level must be at least 1")
        if len(letters) ** level > MAX_DENSE_DIM:
            raise DimensionCapError(
                f"level {level} over {len(letters)} letters exceeds the {MAX_DENSE_DIM}-point cap"
            )
        states = set(transitions)
        for state, row in transitions.items():
            if set(row.keys()) != set(letters):
                raise ActionError(f"state {state!r} must have one transition per letter")
            outs = sorted(str(out) for out, _ in row.values())
            if outs != sorted(letters):
                raise ActionError(f"state {state!r} does not permute the alphabet; not invertible")
            for out, nxt in row.values():
                if nxt not in states:
                    raise ActionError(f"state {state!r} references unknown state {nxt!r}")

        points = tuple("".join(p) for p in itertools.product(letters, repeat=level))
        pos = {p: i for i, p in enumerate(points)}
        perms = {}
        for state in sorted(states):
            if state == IDENTITY_TOKEN:
                continue
            images = []
            for w in points:
                out_word = []
                cur = state
                for ch in w:
                    out, cur = transitions[cur][ch]
                    out_word.append(str(out))
                images.append(pos["".join(out_word)])
            perms[state] = tuple(images)
        return cls(points, perms)


@dataclass(frozen=True)
class GroupAlgebraElement:
    """Finite complex combination of generator words."""

    terms: dict

    def __post_init__(self):
        clean = {}
        for word, coeff in self.terms.items():
            w = tuple(_check_token(t) for t in word)
            c = complex(coeff)
            if c != 0:
                clean[w] = clean.get(w, 0j) + c
        object.__setattr__(self, "terms", {w: c for w, c in clean.items() if c != 0})

    @classmethod
    def from_pairs(cls, pairs) -> "GroupAlgebraElement":
        terms: dict = {}
        for word, coeff in pairs:
            w = tuple(word)
            terms[w] = terms.get(w, 0j) + complex(coeff)
        return cls(terms)

    def support(self) -> tuple[tuple[str, ...], ...]:
        return tuple(sorted(self.terms, key=_word_key))

    def coefficient(self, word) -> complex:
        return self.terms.get(tuple(word), 0j)

    def max_word_length(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def __bool__(self) -> bool:
        return bool(self.terms)


def default_radius_bound(element: GroupAlgebraElement) -> float:
    """Safe deficiency radius: twice the total coefficient weight.

    The orbital operator of ``element`` has norm at most
    ``sum_g |m(g)|`` on any orbit, so twice that sum dominates twice the
    norm regardless of the orbit chosen.
    """
    if not element:
        raise ActionError("the zero element has no radius bound")
    return 2.0 * sum(abs(element.terms[w]) for w in element.support())


def orbit(action: GroupAction, start: str, words) -> tuple[str, ...]:
    """Closure of ``start`` under the words and their inverses, in BFS order."""
    wl = sorted({tuple(w) for w in words}, key=_word_key)
    if not wl:
        raise ActionError("orbit needs at least one word")
    steps: list[tuple[str, ...]] = []
    for w in wl:
        steps.append(w)
        inv = invert_word(w)
        if inv != w:
            steps.append(inv)
    i0 = action.point_index(start)
    seen = {i0}
    order = [i0]
    queue = deque([i0])
    while queue:
        i = queue.popleft()
        for w in steps:
            j = action.act_index(w, i)
            if j not in seen:
                seen.add(j)
                order.append(j)
                queue.append(j)
    return tuple(action.points[i] for i in order)


@dataclass(frozen=True)
class LabeledOrbitalGraph:
    """Orbit graph of a group-algebra element with word labels on arcs.

    ``labels[k]`` is the support word realized by arc ``k``; weight-0
    reversal-completion arcs carry no label and take no part in distances
    or label isomorphism.  ``alphabet`` is the canonical support word list.
    """

    graph: WeightedGraph
    labels: dict
    root: str
    alphabet: tuple

    @cached_property
    def _neighbors(self) -> dict:
        adj = {v: set() for v in self.graph.vertices}
        for k in self.labels:
            a = self.graph.arcs[k]
            if a.source != a.target:
                adj[a.source].add(a.target)
                adj[a.target].add(a.source)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    def distances(self, start: str) -> dict:
        """Combinatorial distances from ``start`` along labeled edges.

        Direction and weights are ignored; loops never shorten anything.
        """
        self.graph.vertex_index(start)
        dist = {start: 0}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in self._neighbors[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return dist

    def diameter(self) -> int:
        best = 0
        for v in self.graph.vertices:
            d = self.distances(v)
            best = max(best, max(d.values()))
        return best


def orbital_graph(action: GroupAction, start: str, element: GroupAlgebraElement) -> LabeledOrbitalGraph:
    """Labeled graph of one orbit under a group-algebra element.

    For each support word g and orbit point z there is one arc
    ``g z -> z`` with weight m(g), so the graph operator is
    ``sum_g m(g) P_g`` for the orbit permutation matrices P_g
    (``P_g delta_z = delta_{g z}``); this is the restriction of the
    permutation representation of the element to the block spanned by the
    orbit.  Arcs of mutually inverse support words are each other's
    reversals; a support word without its inverse gets weight-0 reverse
    arcs so the pairing stays total.
    """
    if not element:
        raise ActionError("cannot build the orbital graph of the zero element")
    supp = element.support()
    pts = orbit(action, start, supp)
    arcs: list[tuple[str, str, complex]] = []
    labels: dict[int, tuple[str, ...]] = {}
    index: dict[tuple[tuple[str, ...], str], int] = {}
    for g in supp:
        coeff = element.coefficient(g)
        for z in pts:
            source = action.act_point(g, z)
            index[(g, z)] = len(arcs)
            labels[len(arcs)] = g
            arcs.append((source, z, coeff))
    pairing: list[int] = [-1] * len(arcs)
    supp_set = set(supp)
    for (g, z), k in list(index.items()):
        h = invert_word(g)
        if h in supp_set:
            pairing[k] = index[(h, arcs[k][0])]
    for (g, z), k in list(index.items()):
        if pairing[k] == -1:
            source, target, _ = arcs[k]
            pairing[k] = len(arcs)
            pairing.append(k)
            arcs.append((target, source, 0j))
    graph = make_graph(pts, arcs, pairing)
    return LabeledOrbitalGraph(graph, labels, start, supp)


def ball(orbital: LabeledOrbitalGraph, center: str, radius: int) -> LabeledOrbitalGraph:
    """Induced labeled subgraph on the radius-``radius`` ball around ``center``."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    dist = orbital.distances(center)
    keep = {v for v, d in dist.items() if d <= radius}
    remap: dict[int, int] = {}
    arcs = []
    labels = {}
    for k, a in enumerate(orbital.graph.arcs):
        if a.source in keep and a.target in keep:
            remap[k] = len(arcs)
            arcs.append(a)
            if k in orbital.labels:
                labels[len(arcs) - 1] = orbital.labels[k]
    # a reversal swaps endpoints, so it survives exactly when the arc does
    pairing = [remap[orbital.graph.pairing[k]] for k in remap]
    graph = make_graph(sorted(keep), arcs, pairing)
    return LabeledOrbitalGraph(graph, labels, center, orbital.alphabet)


def _ball_data(orbital: LabeledOrbitalGraph, center: str, radius: int, cache: dict | None = None):
    key = (id(orbital), center, radius)
    if cache is not None and key in cache:
        return cache[key]
    dist = orbital.distances(center)
    verts = frozenset(v for v, d in dist.items() if d <= radius)
    out: dict[str, dict] = {v: {} for v in verts}
    inn: dict[str, dict] = {v: {} for v in verts}
    for k, word in orbital.labels.items():
        a = orbital.graph.arcs[k]
        if a.source in verts and a.target in verts:
            out[a.source][word] = a.target
            inn[a.target][word] = a.source
    data = (verts, out, inn)
    if cache is not None:
        cache[key] = data
    return data


def _rooted_ball_iso(
    gx: LabeledOrbitalGraph,
    vx: str,
    gy: LabeledOrbitalGraph,
    vy: str,
    radius: int,
    cache: dict | None = None,
):
    """Unique root-preserving label isomorphism of two balls, or None.

    Labels are deterministic (at most one in- and one out-arc per word and
    vertex), so a synchronized traversal from the roots either constructs
    the isomorphism or finds a certificate of failure: a word present on
    one side only, or inconsistent vertex coincidences.
    """
    xverts, xout, xinn = _ball_data(gx, vx, radius, cache)
    yverts, yout, yinn = _ball_data(gy, vy, radius, cache)
    if len(xverts) != len(yverts):
        return None
    fwd = {vx: vy}
    bwd = {vy: vx}
    queue = deque([vx])
    while queue:
        u = queue.popleft()
        u2 = fwd[u]
        for word in gx.alphabet:
            for mx, my in ((xout, yout), (xinn, yinn)):
                t = mx[u].get(word)
                t2 = my[u2].get(word)
                if (t is None) != (t2 is None):
                    return None
                if t is None:
                    continue
                if t in fwd:
                    if fwd[t] != t2:
                        return None
                elif t2 in bwd:
                    return None
                else:
                    fwd[t] = t2
                    bwd[t2] = t
                    queue.append(t)
    if len(fwd) != len(xverts):
        return None
    return fwd


@dataclass(frozen=True)
class RadiusVerdict:
    radius: int
    ok: bool
    x_matches: dict  # x vertex -> matched y vertex or None
    y_matches: dict


@dataclass(frozen=True)
class LocalIsoResult:
    radii: tuple[RadiusVerdict, ...]

    @property
    def max_ok_radius(self) -> int:
        """Largest radius that passed (-1 if even radius 0 failed)."""
        best = -1
        for v in self.radii:
            if v.ok:
                best = v.radius
            else:
                break
        return best

    def verdict(self, radius: int) -> RadiusVerdict:
        return self.radii[radius]


def local_iso_check(gx: LabeledOrbitalGraph, gy: LabeledOrbitalGraph, max_radius: int) -> LocalIsoResult:
    """Per-radius two-way rooted ball matching between two labeled graphs.

    For each radius l <= max_radius, every radius-l ball of one graph must
    be rooted-label-isomorphic to some ball of the other, and vice versa.
    Matching is monotone in the radius (an isomorphism at l restricts to
    one at l-1), so candidate matches only shrink; once a radius fails,
    all larger radii are reported failed without re-testing.
    """
    if gx.alphabet != gy.alphabet:
        raise ActionError("label alphabets differ; the graphs come from different elements")
    if max_radius < 0:
        raise ValueError("max_radius must be nonnegative")
    cache: dict = {}
    xcand = {v: list(gy.graph.vertices) for v in gx.graph.vertices}
    ycand = {v: list(gx.graph.vertices) for v in gy.graph.vertices}
    verdicts: list[RadiusVerdict] = []
    failed = False
    for radius in range(max_radius + 1):
        if failed:
            verdicts.append(RadiusVerdict(radius, False, {}, {}))
            continue
        x_matches = {}
        for v, cands in xcand.items():
            good = [w for w in cands if _rooted_ball_iso(gx, v, gy, w, radius, cache) is not None]
            xcand[v] = good
            x_matches[v] = good[0] if good else None
        y_matches = {}
        for v, cands in ycand.items():
            good = [w for w in cands if _rooted_ball_iso(gy, v, gx, w, radius, cache) is not None]
            ycand[v] = good
            y_matches[v] = good[0] if good else None
        ok = all(m is not None for m in x_matches.values()) and all(
            m is not None for m in y_matches.values()
        )
        verdicts.append(RadiusVerdict(radius, ok, x_matches, y_matches))
        failed = not ok
    return LocalIsoResult(tuple(verdicts))


def positive_element_graph(
    orbital: LabeledOrbitalGraph,
    element: GroupAlgebraElement,
    center_value,
    radius: float,
) -> WeightedGraph:
    """Deficiency graph of the orbital operator at ``center_value``.

    Materializes to ``I - (H - c)(H - c)*/radius^2``: Hermitian, positive
    semidefinite and of norm at most 1 once ``radius`` dominates
    :func:`default_radius_bound` and ``|c| <= radius/2``, and it has
    eigenvalue 1 exactly when ``c`` lies in the orbital spectrum.
    """
    if element.support() != tuple(orbital.alphabet):
        raise ActionError("element support does not match the graph labels")
    bound = default_radius_bound(element)
    slack = 1e-9 * max(1.0, float(radius))
    if radius < bound - slack:
        raise ValueError(f"radius {radius} is below the safe bound {bound}")
    if abs(complex(center_value)) > radius / 2.0 + slack:
        raise ValueError(f"|center value| exceeds radius/2 = {radius / 2.0}")
    return deficiency_graph(orbital.graph, center_value, radius, side="left")


def rayleigh_transfer(
    gx: LabeledOrbitalGraph,
    gy: LabeledOrbitalGraph,
    s_builder,
    vec: FinSuppVector,
    support_radius: int,
    match: tuple[str, str],
    reach: int | None = None,
) -> tuple[float, float]:
    """Transport a ball-supported vector and compare quadratic forms.

    ``match = (vx, vy)`` is a root pair found by :func:`local_iso_check`;
    ``vec`` must be supported in the radius-``support_radius`` ball around
    ``vx``.  ``s_builder`` maps a labeled orbital graph to the operator
    graph whose quadratic form is compared (for example a
    :func:`positive_element_graph` closure).  ``reach`` is the extra
    radius the built operator can see past the support (default: the
    longest label word); the balls of radius ``support_radius + reach``
    around the roots must be isomorphic — for operators assembled from
    products of two element factors the interior path midpoints stay
    within that reach, so the two quadratic forms agree exactly.

    Returns ``(value_x, value_y)`` with ``value = <H vec, vec>`` as reals.
    """
    vx, vy = match
    if reach is None:
        reach = max((len(w) for w in gx.alphabet), default=1)
        reach = max(reach, 1)
    radius = support_radius + int(reach)
    iso = _rooted_ball_iso(gx, vx, gy, vy, radius)
    if iso is None:
        raise ActionError(
            f"balls of radius {radius} around {vx!r} and {vy!r} are not isomorphic; "
            "match radius insufficient"
        )
    dist = gx.distances(vx)
    escaped = [k for k in vec.support() if dist.get(k, radius + 1) > support_radius]
    if escaped:
        raise ActionError(
            f"vector support escapes the radius-{support_radius} ball around {vx!r}: {escaped[:3]}"
        )
    sx = s_builder(gx)
    sy = s_builder(gy)
    value_x = apply(sx, vec).inner(vec)
    mapped = FinSuppVector({iso[k]: c for k, c in vec.items()})
    value_y = apply(sy, mapped).inner(mapped)
    return float(value_x.real), float(value_y.real)


@dataclass(frozen=True)
class MembershipCross:
    lam: complex
    in_x: MembershipVerdict
    in_y: MembershipVerdict


@dataclass(frozen=True)
class OrbitComparison:
    root_x: str
    root_y: str
    orbit_size_x: int
    orbit_size_y: int
    radius: float
    spectrum_x: SpectralSet
    spectrum_y: SpectralSet
    hausdorff: float
    local_iso: LocalIsoResult
    max_common_radius: int
    saturated: bool
    cross_checks: tuple[MembershipCross, ...]


def spectra_compare_orbits(
    action_x: GroupAction,
    action_y: GroupAction,
    x: str,
    y: str,
    element: GroupAlgebraElement,
    tol: float = DEFAULT_MEMBERSHIP_TOL,
    max_radius: int | None = None,
) -> OrbitComparison:
    """Compare the orbital operators of one element at two base points.

    Reports both spectra, their Hausdorff distance, the largest radius at
    which the two graphs are locally indistinguishable (capped one past
    the larger diameter unless ``max_radius`` overrides; ``saturated``
    means the cap itself passed), and per-eigenvalue membership
    cross-checks of the x-spectrum against both operators at the
    element's default radius bound.
    """
    gx = orbital_graph(action_x, x, element)
    gy = orbital_graph(action_y, y, element)
    mx = materialize(gx.graph)
    my = materialize(gy.graph)
    sx = spectrum(mx)
    sy = spectrum(my)
    cap = max_radius if max_radius is not None else max(gx.diameter(), gy.diameter()) + 1
    iso = local_iso_check(gx, gy, cap)
    radius = default_radius_bound(element)
    cross = tuple(
        MembershipCross(
            lam,
            membership_by_deficiency(mx, lam, radius, tol),
            membership_by_deficiency(my, lam, radius, tol),
        )
        for lam in sx.values
    )
    return OrbitComparison(
        root_x=x,
        root_y=y,
        orbit_size_x=len(gx.graph.vertices),
        orbit_size_y=len(gy.graph.vertices),
        radius=radius,
        spectrum_x=sx,
        spectrum_y=sy,
        hausdorff=hausdorff_distance(sx, sy),
        local_iso=iso,
        max_common_radius=iso.max_ok_radius,
        saturated=iso.max_ok_radius == cap,
        cross_checks=cross,
    )
