"""Associahedra: bracketings of a word, rotations between them, and their
square and pentagon faces, each checked to commute in the graph model."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from .confluence import Divergence, Origin, classify, join
from .graphmodel import evaluate, graphs_equal, is_identity
from .rewrite import ASSOC, Path, apply, path_arrow, redexes, right_comb
from .syntax import Bin, Conn, Formula, Letter, show

__all__ = [
    "Face", "Complex", "MAX_LETTERS", "bracketings", "associahedron",
    "check_faces_commute", "face_sides_identity", "connected", "complex_to_json",
    "complex_to_dot", "catalan", "sink", "normal_form_vertex",
]

MAX_LETTERS = 10


@dataclass(frozen=True)
class Face:
    """A 2-face: ``cycle`` lists edge indices around it, starting at the
    peak down the left side; ``left``/``right`` are its two directed sides
    from the peak to the opposite vertex."""

    kind: str  # "square" | "pentagon"
    peak: int
    bottom: int
    cycle: tuple
    left: Path
    right: Path


@dataclass
class Complex:
    vertices: list
    edges: list = field(default_factory=list)  # (i, j, step): vertex i rotates to vertex j
    faces: list = field(default_factory=list)

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertices")
        self.index = {v: i for i, v in enumerate(self.vertices)}

    def euler(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)

    def degree(self, i: int) -> int:
        return sum((a == i) + (b == i) for a, b, _ in self.edges)


def catalan(k: int) -> int:
    """Catalan number by the convolution recurrence."""
    c = [1]
    for n in range(k):
        c.append(sum(c[i] * c[n - i] for i in range(n + 1)))
    return c[k]


@lru_cache(maxsize=None)
def _shapes(letters: tuple, conn: Conn) -> tuple:
    if len(letters) == 1:
        return (Letter(letters[0]),)
    out = []
    for k in range(1, len(letters)):
        for left in _shapes(letters[:k], conn):
            for right in _shapes(letters[k:], conn):
                out.append(Bin(conn, left, right))
    return tuple(out)


def bracketings(letters, conn: Conn = Conn.AND) -> list[Formula]:
    """All binary bracketings of ``letters``; the right comb comes first."""
    return list(_shapes(tuple(letters), conn))


def _default_letters(n: int) -> list[str]:
    return [chr(ord("a") + i) for i in range(n)] if n <= 19 else [f"x{i}" for i in range(1, n + 1)]


def associahedron(n: int, letters=None, max_letters: int = MAX_LETTERS) -> Complex:
    if n < 2:
        raise ValueError("need at least two letters")
    if n > max_letters:
        raise ValueError(f"n = {n} exceeds the maximum of {max_letters}")
    letters = list(letters) if letters is not None else _default_letters(n)
    if len(letters) != n:
        raise ValueError(f"expected {n} letters, got {len(letters)}")
    cx = Complex(bracketings(letters))
    edge_at = {}
    for i, v in enumerate(cx.vertices):
        for s in redexes(v, ASSOC):
            j = cx.index[apply(v, s)]
            edge_at[(i, j)] = len(cx.edges)
            cx.edges.append((i, j, s))
    for i, v in enumerate(cx.vertices):
        steps = redexes(v, ASSOC)
        for a in range(len(steps)):
            for b in range(a + 1, len(steps)):
                cx.faces.append(_face(cx, edge_at, i, steps[a], steps[b]))
    return cx


def _face(cx: Complex, edge_at: dict, i: int, s1, s2) -> Face:
    peak = cx.vertices[i]
    d = Divergence(peak, s1, s2, classify(s1, s2))
    tile = join(d, ASSOC, bound=3)
    left, right = tile.sides()
    cyc = _edges_of(cx, edge_at, left) + tuple(reversed(_edges_of(cx, edge_at, right)))
    kind = "pentagon" if d.origin is Origin.CRITICAL else "square"
    expected = 5 if kind == "pentagon" else 4
    if len(cyc) != expected:
        raise AssertionError(f"{kind} at {show(peak)} has {len(cyc)} edges")
    return Face(kind, i, cx.index[left.end], cyc, left, right)


def _edges_of(cx, edge_at, p: Path) -> tuple:
    out = []
    t = p.start
    for s in p.steps:
        u = apply(t, s)
        out.append(edge_at[(cx.index[t], cx.index[u])])
        t = u
    return tuple(out)


def check_faces_commute(cx: Complex) -> bool:
    return all(graphs_equal(evaluate(path_arrow(f.left)), evaluate(path_arrow(f.right)))
               for f in cx.faces)


def face_sides_identity(cx: Complex) -> bool:
    """Stronger form for associativity complexes: every side is the identity linking."""
    return all(is_identity(evaluate(path_arrow(p))) for f in cx.faces for p in (f.left, f.right))


def connected(cx: Complex) -> bool:
    if not cx.vertices:
        return True
    adj = {i: [] for i in range(len(cx.vertices))}
    for a, b, _ in cx.edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    queue = deque([0])
    while queue:
        for w in adj[queue.popleft()]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(cx.vertices)


def sink(cx: Complex) -> int:
    """Index of the unique vertex without outgoing rotations."""
    outgoing = {a for a, _, _ in cx.edges}
    sinks = [i for i in range(len(cx.vertices)) if i not in outgoing]
    if len(sinks) != 1:
        raise ValueError(f"{len(sinks)} sinks")
    return sinks[0]


def complex_to_json(cx: Complex) -> dict:
    return {
        "vertex_count": len(cx.vertices),
        "edge_count": len(cx.edges),
        "face_count": len(cx.faces),
        "faces_by_kind": {k: sum(f.kind == k for f in cx.faces) for k in ("pentagon", "square")},
        "euler_characteristic": cx.euler(),
        "vertices": [show(v) for v in cx.vertices],
        "edges": [[a, b, str(s)] for a, b, s in cx.edges],
        "faces": [{"kind": f.kind, "peak": f.peak, "bottom": f.bottom, "cycle": list(f.cycle)}
                  for f in cx.faces],
    }


def complex_to_dot(cx: Complex, name: str = "K") -> str:
    lines = [f"digraph {name} {{"]
    for i, v in enumerate(cx.vertices):
        lines.append(f'  v{i} [label="{show(v)}"];'.replace("\\", "\\\\"))
    for a, b, s in cx.edges:
        lines.append(f'  v{a} -> v{b} [label="{s}"];')
    for k, f in enumerate(cx.faces):
        lines.append(f"  // face {k} {f.kind}: edges {' '.join(map(str, f.cycle))}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def normal_form_vertex(cx: Complex) -> Formula:
    return right_comb([leaf for leaf in _letters_of(cx.vertices[0])])


def _letters_of(v: Formula) -> list[str]:
    if isinstance(v, Bin):
        return _letters_of(v.left) + _letters_of(v.right)
    return [v.name]
