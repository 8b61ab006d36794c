"""Occurrence-linking graphs and the functor from arrow terms into them.

A :class:`LinkGraph` links letter occurrences of a source and a target
formula. Links may join a source leaf to a target leaf, two target leaves
(caps, as in ``eta``) or two source leaves (cups, as in ``eps``).
Composition traces alternating paths through the middle formula.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .syntax import (
    ArrowTerm, Bin, Comp, Conn, Formula, Gen, Tensor, TypeMismatch,
    infer_type, leaves, letter_count, show,
)

__all__ = [
    "LeafRef", "LinkGraph", "generator_graph", "compose", "tensor",
    "evaluate", "graphs_equal", "identity_graph", "is_identity",
    "is_rel", "as_relation", "from_relation", "links_from_text",
    "format_links", "graph_to_json", "graph_to_dot",
]

SOURCE, TARGET = "s", "t"


class LeafRef(NamedTuple):
    side: str
    index: int

    def __str__(self):
        return f"{self.side}{self.index}"


Link = tuple[LeafRef, LeafRef]


def _link(x: LeafRef, y: LeafRef) -> Link:
    return (x, y) if x <= y else (y, x)


@dataclass(frozen=True)
class LinkGraph:
    source: Formula
    target: Formula
    links: frozenset

    def __post_init__(self):
        src = leaves(self.source)
        tgt = leaves(self.target)
        normalized = set()
        for x, y in self.links:
            x, y = LeafRef(*x), LeafRef(*y)
            if x == y:
                raise ValueError(f"self-link {x}")
            names = []
            for leaf in (x, y):
                side = src if leaf.side == SOURCE else tgt if leaf.side == TARGET else None
                if side is None or not 1 <= leaf.index <= len(side):
                    raise ValueError(f"leaf {leaf} out of range")
                names.append(side[leaf.index - 1][1])
            if names[0] != names[1]:
                raise ValueError(f"link {x}-{y} joins {names[0]} with {names[1]}")
            normalized.add(_link(x, y))
        object.__setattr__(self, "links", frozenset(normalized))

    def sorted_links(self) -> list[Link]:
        return sorted(self.links)

    def __str__(self):
        return f"{show(self.source)} |- {show(self.target)} : {{{format_links(self)}}}"


def links_from_text(text: str) -> set[Link]:
    """``"s1-t3, t1-t2"`` -> set of links."""
    out = set()
    for a, i, b, j in re.findall(r"([st])(\d+)\s*[-–]\s*([st])(\d+)", text):
        out.add(_link(LeafRef(a, int(i)), LeafRef(b, int(j))))
    return out


def format_links(g: LinkGraph) -> str:
    return ", ".join(f"{x}-{y}" for x, y in g.sorted_links())


def identity_graph(a: Formula) -> LinkGraph:
    n = letter_count(a)
    return LinkGraph(a, a, frozenset(
        (LeafRef(SOURCE, i), LeafRef(TARGET, i)) for i in range(1, n + 1)))


def is_identity(g: LinkGraph) -> bool:
    n = letter_count(g.source)
    if n != letter_count(g.target):
        return False
    return g.links == {(LeafRef(SOURCE, i), LeafRef(TARGET, i)) for i in range(1, n + 1)}


_ORDER_PRESERVING = {
    "id", "alpha", "alpha_inv", "alpha_or", "alpha_or_inv",
    "lambda", "lambda_inv", "rho", "rho_inv", "d",
}


def generator_graph(g: ArrowTerm) -> LinkGraph:
    if not isinstance(g, Gen):
        raise TypeError(f"not a generator: {g}")
    source, target = infer_type(g)
    s = lambda i: LeafRef(SOURCE, i)  # noqa: E731
    t = lambda i: LeafRef(TARGET, i)  # noqa: E731
    if g.kind in _ORDER_PRESERVING:
        n = letter_count(source)
        pairs = [(s(i), t(i)) for i in range(1, n + 1)]
    else:
        a = letter_count(g.params[0])
        b = letter_count(g.params[1]) if len(g.params) > 1 else 0
        if g.kind == "sigma":
            pairs = [(s(i), t(b + i)) for i in range(1, a + 1)]
            pairs += [(s(a + j), t(j)) for j in range(1, b + 1)]
        elif g.kind == "w":
            pairs = [(s(i), t(i)) for i in range(1, a + 1)]
            pairs += [(s(i), t(a + i)) for i in range(1, a + 1)]
        elif g.kind == "k1":
            pairs = [(s(i), t(i)) for i in range(1, a + 1)]
        elif g.kind == "k2":
            pairs = [(s(a + j), t(j)) for j in range(1, b + 1)]
        elif g.kind == "eta":
            pairs = [(t(i), t(a + i)) for i in range(1, a + 1)]
            pairs += [(s(j), t(2 * a + j)) for j in range(1, b + 1)]
        elif g.kind == "eps":
            pairs = [(s(i), s(a + i)) for i in range(1, a + 1)]
            pairs += [(s(2 * a + j), t(j)) for j in range(1, b + 1)]
        else:  # pragma: no cover - GENERATORS and this table are kept in sync
            raise ValueError(f"no graph for generator {g.kind}")
    return LinkGraph(source, target, frozenset(pairs))


def compose(f: LinkGraph, g: LinkGraph) -> LinkGraph:
    """Graph of "first f, then g".

    Outer vertices are the leaves of ``f.source`` and ``g.target``; a link
    joins two outer vertices whenever a walk between them alternates
    f-links and g-links and passes only through leaves of the middle
    formula. Closed walks inside the middle are dropped.
    """
    if f.target != g.source:
        raise TypeMismatch(
            f"middle formulas differ: {show(f.target)} vs {show(g.source)}",
            expected=f.target, found=g.source)
    # vertices: ("s", i) outer source, ("m", j) middle, ("t", k) outer target
    adj: dict[tuple, list[tuple]] = {}

    def add(u, v, colour):
        adj.setdefault(u, []).append((v, colour))
        adj.setdefault(v, []).append((u, colour))

    for x, y in f.links:
        add(("s" if x.side == SOURCE else "m", x.index),
            ("s" if y.side == SOURCE else "m", y.index), 0)
    for x, y in g.links:
        add(("m" if x.side == SOURCE else "t", x.index),
            ("m" if y.side == SOURCE else "t", y.index), 1)

    found = set()
    for start in adj:
        if start[0] == "m":
            continue
        seen = set()
        stack = [(v, c) for v, c in adj[start]]
        while stack:
            v, c = stack.pop()
            if v[0] != "m":
                if v != start:
                    found.add(_link(LeafRef(start[0], start[1]), LeafRef(v[0], v[1])))
                continue
            if (v, c) in seen:
                continue
            seen.add((v, c))
            stack.extend((w, c2) for w, c2 in adj[v] if c2 != c)
    return LinkGraph(f.source, g.target, frozenset(found))


def tensor(f: LinkGraph, g: LinkGraph, conn: Conn = Conn.AND) -> LinkGraph:
    ds, dt = letter_count(f.source), letter_count(f.target)

    def shift(x: LeafRef) -> LeafRef:
        return LeafRef(x.side, x.index + (ds if x.side == SOURCE else dt))

    links = set(f.links) | {(shift(x), shift(y)) for x, y in g.links}
    return LinkGraph(Bin(conn, f.source, g.source), Bin(conn, f.target, g.target),
                     frozenset(links))


def evaluate(f: ArrowTerm) -> LinkGraph:
    """The graph of an arrow term, by structural recursion."""
    if isinstance(f, Gen):
        return generator_graph(f)
    if isinstance(f, Comp):
        return compose(evaluate(f.f), evaluate(f.g))
    if isinstance(f, Tensor):
        return tensor(evaluate(f.f), evaluate(f.g), f.conn)
    raise TypeError(f"not an arrow term: {f!r}")


def graphs_equal(f: LinkGraph, g: LinkGraph) -> bool:
    return f.source == g.source and f.target == g.target and f.links == g.links


# ------------------------------------------------------------ Rel restriction


def is_rel(g: LinkGraph) -> bool:
    """True when every link runs between a source and a target leaf."""
    return all(x.side != y.side for x, y in g.links)


def as_relation(g: LinkGraph) -> set[tuple[int, int]]:
    if not is_rel(g):
        raise ValueError("graph has cups or caps")
    return {(x.index, y.index) for x, y in g.links}


def from_relation(source: Formula, target: Formula,
                  pairs: Iterable[tuple[int, int]]) -> LinkGraph:
    return LinkGraph(source, target, frozenset(
        (LeafRef(SOURCE, i), LeafRef(TARGET, j)) for i, j in pairs))


# ------------------------------------------------------------------ exports


def graph_to_json(g: LinkGraph) -> dict:
    return {
        "source": show(g.source),
        "target": show(g.target),
        "links": [[{"side": x.side, "index": x.index}, {"side": y.side, "index": y.index}]
                  for x, y in g.sorted_links()],
    }


def graph_to_dot(g: LinkGraph, name: str = "G") -> str:
    lines = [f"graph {name} {{", "  node [shape=plaintext];"]
    for side, formula in ((SOURCE, g.source), (TARGET, g.target)):
        row = " ".join(f'{side}{i} [label="{side}{i}: {letter}"];' for i, letter in leaves(formula))
        lines.append(f"  {{ rank=same; {row} }}" if row else f"  // {side}: no leaves")
    for x, y in g.sorted_links():
        lines.append(f"  {x} -- {y};")
    lines.append("}")
    return "\n".join(lines) + "\n"
