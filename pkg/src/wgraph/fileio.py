"""Plain-text file formats for graphs, coverings, actions and elements.

Every format starts with a ``<kind> <version>`` header line; blank lines
and ``#`` comments are allowed anywhere.  Complex numbers are written as
``a+bi`` with ``repr`` floats so values round-trip bit-exactly; arc and
matrix indices are 0-based, permutations are written in 1-based one-line
notation.  All malformed content raises :class:`ParseError` with the
offending line number.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import WeightedGraph, make_graph
from .covering import CoveringMap
from .errors import ActionError, GraphStructureError, ParseError
from .orbital import GroupAction, GroupAlgebraElement, parse_word, word_str

__all__ = [
    "format_complex",
    "parse_complex",
    "read_graph",
    "write_graph",
    "read_matrix",
    "write_matrix",
    "read_covering",
    "write_covering",
    "read_voltages",
    "write_voltages",
    "ActionSpec",
    "read_action",
    "write_action",
    "read_element",
    "write_element",
]


def format_complex(value) -> str:
    z = complex(value)
    if z.imag == 0:
        return repr(z.real)
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


def parse_complex(text: str) -> complex:
    """Parse ``1.5``, ``-2i``, ``0.5+0.25i`` and friends."""
    s = text.strip().replace("i", "j")
    try:
        z = complex(s)
    except ValueError:
        raise ValueError(f"bad complex number {text!r}") from None
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ValueError(f"non-finite complex number {text!r}")
    return z


class _Cursor:
    """Line reader that skips blanks/comments and tracks line numbers."""

    def __init__(self, path: str, text: str):
        self.path = path
        self._lines = text.splitlines()
        self._pos = 0

    def fail(self, lineno: int, message: str):
        raise ParseError(self.path, lineno, message)

    def next_line(self, what: str) -> tuple[int, str]:
        while self._pos < len(self._lines):
            self._pos += 1
            line = self._lines[self._pos - 1].strip()
            if line and not line.startswith("#"):
                return self._pos, line
        raise ParseError(self.path, len(self._lines) + 1, f"unexpected end of file, wanted {what}")

    def at_end(self) -> bool:
        pos = self._pos
        while pos < len(self._lines):
            line = self._lines[pos].strip()
            if line and not line.startswith("#"):
                return False
            pos += 1
        return True

    def expect_end(self):
        if not self.at_end():
            lineno, line = self.next_line("end of file")
            self.fail(lineno, f"trailing content {line!r}")

    def header(self, kind: str):
        lineno, line = self.next_line(f"{kind!r} header")
        parts = line.split()
        if len(parts) != 2 or parts[0] != kind:
            self.fail(lineno, f"expected header {kind!r} <version>, got {line!r}")
        if parts[1] != "1":
            self.fail(lineno, f"unsupported {kind} format version {parts[1]!r}")

    def count(self, keyword: str, minimum: int = 0) -> int:
        lineno, line = self.next_line(f"{keyword!r} count")
        parts = line.split()
        if len(parts) != 2 or parts[0] != keyword:
            self.fail(lineno, f"expected {keyword!r} <count>, got {line!r}")
        try:
            n = int(parts[1])
        except ValueError:
            self.fail(lineno, f"bad count {parts[1]!r}")
        if n < minimum:
            self.fail(lineno, f"{keyword} count must be at least {minimum}")
        return n

    def complex_field(self, lineno: int, token: str) -> complex:
        try:
            return parse_complex(token)
        except ValueError as e:
            self.fail(lineno, str(e))

    def int_field(self, lineno: int, token: str, what: str) -> int:
        try:
            return int(token)
        except ValueError:
            self.fail(lineno, f"bad {what} {token!r}")


def _open(path: str) -> _Cursor:
    with open(path, "r", encoding="utf-8") as fh:
        return _Cursor(str(path), fh.read())


def _read_graph_block(cur: _Cursor) -> WeightedGraph:
    n = cur.count("vertices", minimum=1)
    vertices = []
    for _ in range(n):
        lineno, line = cur.next_line("vertex id")
        if len(line.split()) != 1:
            cur.fail(lineno, f"vertex id must be a single token, got {line!r}")
        vertices.append(line)
    m = cur.count("arcs")
    start = cur._pos
    arcs = []
    pairing = []
    for _ in range(m):
        lineno, line = cur.next_line("arc line")
        parts = line.split()
        if len(parts) != 4:
            cur.fail(lineno, f"arc line needs 'source target weight pair', got {line!r}")
        src, tgt, wtok, ptok = parts
        arcs.append((src, tgt, cur.complex_field(lineno, wtok)))
        pairing.append(cur.int_field(lineno, ptok, "pairing index"))
    try:
        return make_graph(vertices, arcs, pairing)
    except (GraphStructureError, ValueError) as e:
        cur.fail(start, str(e))


def _graph_block_lines(graph: WeightedGraph) -> list[str]:
    lines = [f"vertices {len(graph.vertices)}"]
    lines.extend(graph.vertices)
    lines.append(f"arcs {len(graph.arcs)}")
    for k, a in enumerate(graph.arcs):
        lines.append(f"{a.source} {a.target} {format_complex(a.weight)} {graph.pairing[k]}")
    return lines


def read_graph(path: str) -> WeightedGraph:
    cur = _open(path)
    cur.header("wgraph")
    graph = _read_graph_block(cur)
    cur.expect_end()
    return graph


def write_graph(graph: WeightedGraph, path: str):
    lines = ["wgraph 1"] + _graph_block_lines(graph)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_matrix(path: str) -> np.ndarray:
    cur = _open(path)
    cur.header("matrix")
    n = cur.count("dim", minimum=1)
    out = np.zeros((n, n), dtype=complex)
    for i in range(n):
        lineno, line = cur.next_line("matrix row")
        parts = line.split()
        if len(parts) != n:
            cur.fail(lineno, f"row {i} has {len(parts)} entries, expected {n}")
        for j, tok in enumerate(parts):
            out[i, j] = cur.complex_field(lineno, tok)
    cur.expect_end()
    return out


def write_matrix(matrix: np.ndarray, path: str):
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix must be square, got shape {m.shape}")
    lines = ["matrix 1", f"dim {m.shape[0]}"]
    for row in m:
        lines.append(" ".join(format_complex(z) for z in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_covering(path: str) -> CoveringMap:
    cur = _open(path)
    cur.header("covering")
    lineno, line = cur.next_line("'cover' section")
    if line != "cover":
        cur.fail(lineno, f"expected 'cover', got {line!r}")
    cover = _read_graph_block(cur)
    lineno, line = cur.next_line("'base' section")
    if line != "base":
        cur.fail(lineno, f"expected 'base', got {line!r}")
    base = _read_graph_block(cur)
    n = cur.count("vertex-map")
    vertex_map = {}
    for _ in range(n):
        lineno, line = cur.next_line("vertex-map entry")
        parts = line.split()
        if len(parts) != 2:
            cur.fail(lineno, f"vertex-map entry needs 'cover base', got {line!r}")
        if parts[0] in vertex_map:
            cur.fail(lineno, f"duplicate vertex-map entry for {parts[0]!r}")
        vertex_map[parts[0]] = parts[1]
    m = cur.count("arc-map")
    arc_map = []
    for _ in range(m):
        lineno, line = cur.next_line("arc-map entry")
        parts = line.split()
        if len(parts) != 2:
            cur.fail(lineno, f"arc-map entry needs 'cover_arc base_arc', got {line!r}")
        k = cur.int_field(lineno, parts[0], "cover arc index")
        if k != len(arc_map):
            cur.fail(lineno, f"arc-map entries must list cover arcs 0,1,... in order; got {k}")
        arc_map.append(cur.int_field(lineno, parts[1], "base arc index"))
    cur.expect_end()
    return CoveringMap(cover, base, vertex_map, tuple(arc_map))


def write_covering(covering: CoveringMap, path: str):
    lines = ["covering 1", "cover"]
    lines.extend(_graph_block_lines(covering.cover))
    lines.append("base")
    lines.extend(_graph_block_lines(covering.base))
    lines.append(f"vertex-map {len(covering.vertex_map)}")
    for v in covering.cover.vertices:
        lines.append(f"{v} {covering.vertex_map[v]}")
    lines.append(f"arc-map {len(covering.arc_map)}")
    for k, b in enumerate(covering.arc_map):
        lines.append(f"{k} {b}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_voltages(path: str) -> tuple[int, tuple[tuple[int, ...], ...]]:
    """Read a voltage assignment: per base arc one permutation of 1..degree.

    Returns ``(degree, voltages)`` with 0-based image tuples, i.e.
    ``voltages[k][i]`` is the sheet (0-based) that sheet ``i`` of arc ``k``
    crosses to.
    """
    cur = _open(path)
    cur.header("voltage")
    degree = cur.count("degree", minimum=1)
    m = cur.count("arcs", minimum=1)
    volts = []
    for k in range(m):
        lineno, line = cur.next_line("voltage permutation")
        parts = line.split()
        if len(parts) != degree:
            cur.fail(lineno, f"arc {k}: expected {degree} images, got {len(parts)}")
        perm = tuple(cur.int_field(lineno, t, "sheet image") - 1 for t in parts)
        if sorted(perm) != list(range(degree)):
            cur.fail(lineno, f"arc {k}: not a permutation of 1..{degree}")
        volts.append(perm)
    cur.expect_end()
    return degree, tuple(volts)


def write_voltages(degree: int, voltages, path: str):
    lines = ["voltage 1", f"degree {degree}", f"arcs {len(voltages)}"]
    for perm in voltages:
        lines.append(" ".join(str(i + 1) for i in perm))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


@dataclass(frozen=True)
class ActionSpec:
    """Parsed action file: an explicit permutation action or a transducer.

    ``kind`` is ``"perm"`` or ``"mealy"``.  :meth:`realize` produces the
    :class:`GroupAction`; transducer specs need the expansion ``level``.
    """

    kind: str
    action: GroupAction | None = None
    transitions: dict | None = None
    alphabet: tuple | None = None

    def realize(self, level: int | None = None) -> GroupAction:
        if self.kind == "perm":
            return self.action
        if level is None:
            raise ActionError("a transducer action needs an expansion level")
        return GroupAction.from_mealy(self.transitions, self.alphabet, level)


def read_action(path: str) -> ActionSpec:
    cur = _open(path)
    cur.header("action")
    lineno, line = cur.next_line("'kind' line")
    parts = line.split()
    if len(parts) != 2 or parts[0] != "kind" or parts[1] not in ("perm", "mealy"):
        cur.fail(lineno, f"expected 'kind perm' or 'kind mealy', got {line!r}")
    kind = parts[1]
    if kind == "perm":
        n = cur.count("points", minimum=1)
        points = []
        for _ in range(n):
            lineno, line = cur.next_line("point id")
            if len(line.split()) != 1:
                cur.fail(lineno, f"point id must be a single token, got {line!r}")
            points.append(line)
        g = cur.count("generators", minimum=1)
        perms = {}
        for _ in range(g):
            lineno, line = cur.next_line("generator line")
            parts = line.split()
            if len(parts) != n + 1:
                cur.fail(lineno, f"generator line needs a name and {n} images, got {line!r}")
            name = parts[0]
            if name in perms:
                cur.fail(lineno, f"duplicate generator {name!r}")
            images = tuple(cur.int_field(lineno, t, "point image") - 1 for t in parts[1:])
            if sorted(images) != list(range(n)):
                cur.fail(lineno, f"generator {name!r} is not a permutation of 1..{n}")
            perms[name] = images
        cur.expect_end()
        try:
            return ActionSpec("perm", action=GroupAction(tuple(points), perms))
        except ActionError as e:
            raise ParseError(str(path), lineno, str(e)) from None
    lineno, line = cur.next_line("'alphabet' line")
    parts = line.split()
    if len(parts) < 2 or parts[0] != "alphabet":
        cur.fail(lineno, f"expected 'alphabet <letters...>', got {line!r}")
    alphabet = tuple(parts[1:])
    if any(len(ch) != 1 for ch in alphabet) or len(set(alphabet)) != len(alphabet):
        cur.fail(lineno, "alphabet letters must be distinct single characters")
    s = cur.count("states", minimum=1)
    transitions: dict = {}
    for _ in range(s):
        lineno, line = cur.next_line("'state' line")
        parts = line.split()
        if len(parts) != 2 or parts[0] != "state":
            cur.fail(lineno, f"expected 'state <name>', got {line!r}")
        name = parts[1]
        if name in transitions:
            cur.fail(lineno, f"duplicate state {name!r}")
        row = {}
        for _ in alphabet:
            lineno, line = cur.next_line("transition line")
            parts = line.split()
            if len(parts) != 3:
                cur.fail(lineno, f"transition line needs 'input output next', got {line!r}")
            inp, out, nxt = parts
            if inp not in alphabet or out not in alphabet:
                cur.fail(lineno, f"transition letters must come from the alphabet, got {line!r}")
            if inp in row:
                cur.fail(lineno, f"duplicate transition for input {inp!r}")
            row[inp] = (out, nxt)
        transitions[name] = row
    cur.expect_end()
    for name, row in transitions.items():
        for out, nxt in row.values():
            if nxt not in transitions:
                raise ParseError(str(path), 1, f"state {name!r} references unknown state {nxt!r}")
    return ActionSpec("mealy", transitions=transitions, alphabet=alphabet)


def write_action(spec: ActionSpec, path: str):
    lines = ["action 1", f"kind {spec.kind}"]
    if spec.kind == "perm":
        act = spec.action
        lines.append(f"points {len(act.points)}")
        lines.extend(act.points)
        names = act.generator_names()
        lines.append(f"generators {len(names)}")
        for name in names:
            lines.append(name + " " + " ".join(str(i + 1) for i in act.perms[name]))
    else:
        lines.append("alphabet " + " ".join(spec.alphabet))
        lines.append(f"states {len(spec.transitions)}")
        for name in sorted(spec.transitions):
            lines.append(f"state {name}")
            for ch in spec.alphabet:
                out, nxt = spec.transitions[name][ch]
                lines.append(f"{ch} {out} {nxt}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_element(path: str) -> GroupAlgebraElement:
    cur = _open(path)
    cur.header("element")
    n = cur.count("terms", minimum=1)
    pairs = []
    for _ in range(n):
        lineno, line = cur.next_line("term line")
        parts = line.split()
        if len(parts) < 2:
            cur.fail(lineno, f"term line needs a word and a coefficient, got {line!r}")
        try:
            word = parse_word(" ".join(parts[:-1]))
        except ActionError as e:
            cur.fail(lineno, str(e))
        pairs.append((word, cur.complex_field(lineno, parts[-1])))
    cur.expect_end()
    elem = GroupAlgebraElement.from_pairs(pairs)
    if not elem:
        raise ParseError(str(path), 1, "element is zero after combining terms")
    return elem


def write_element(element: GroupAlgebraElement, path: str):
    words = element.support()
    lines = ["element 1", f"terms {len(words)}"]
    for w in words:
        lines.append(f"{word_str(w)} {format_complex(element.terms[w])}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
