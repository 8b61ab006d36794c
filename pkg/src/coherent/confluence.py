"""Local confluence with model-checked tiles.

A divergence is a one-step forking ``u <- peak -> v``; a tile closes it by
two reduction paths meeting at a common formula. Besides joinability we
check that the two sides of every tile have the same graph, i.e. that the
tile is a commuting diagram of arrows and not merely of objects.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Optional

from .graphmodel import evaluate, graph_to_json, graphs_equal
from .rewrite import (
    Path, RewriteError, RewriteSystem, Step, apply, match,
    path_arrow, path_to_json, redexes, subterm,
)
from .syntax import Bin, Formula, Letter, TypeMismatch, Var, show

__all__ = [
    "Origin", "Divergence", "Tile", "Verdict", "NewmanResult",
    "unify", "critical_pairs", "divergences", "classify", "join", "tile_commutes",
    "newman_check", "longest_reduction", "confluence_report", "DEFAULT_JOIN_BOUND",
]

DEFAULT_JOIN_BOUND = 10


class Origin(str, Enum):
    CRITICAL = "critical-overlap"
    DISJOINT = "disjoint"
    # one redex sits inside a metavariable of the other; only produced by
    # divergences(), never by critical_pairs()
    VARIABLE = "variable-overlap"


@dataclass(frozen=True)
class Divergence:
    peak: Formula
    left_step: Step
    right_step: Step
    origin: Origin = Origin.CRITICAL

    def __post_init__(self):
        if self.left_step == self.right_step:
            raise ValueError("a divergence needs two distinct steps")
        for st in (self.left_step, self.right_step):
            if match(st.rule.oriented(st.direction)[0], subterm(self.peak, st.position)) is None:
                raise RewriteError(f"{st} does not apply at {show(self.peak)}")

    @property
    def left(self) -> Formula:
        return apply(self.peak, self.left_step)

    @property
    def right(self) -> Formula:
        return apply(self.peak, self.right_step)

    def __str__(self):
        return f"{show(self.left)} <-[{self.left_step}]- {show(self.peak)} -[{self.right_step}]-> {show(self.right)}"


@dataclass(frozen=True)
class Tile:
    divergence: Divergence
    left_path: Path
    right_path: Path

    @property
    def end(self) -> Formula:
        return self.left_path.end

    def sides(self) -> tuple[Path, Path]:
        """Both full sides of the tile, starting at the peak."""
        d = self.divergence
        if self.left_path.start != d.left or self.right_path.start != d.right:
            raise TypeMismatch("tile paths do not start at the forked formulas")
        if self.left_path.end != self.right_path.end:
            raise TypeMismatch("tile sides end at different formulas",
                               expected=self.left_path.end, found=self.right_path.end)
        return (Path(d.peak, (d.left_step,) + self.left_path.steps),
                Path(d.peak, (d.right_step,) + self.right_path.steps))


# ------------------------------------------------------------ unification


def _walk(t: Formula, sigma: dict) -> Formula:
    while isinstance(t, Var) and t.name in sigma:
        t = sigma[t.name]
    return t


def _occurs(name: str, t: Formula, sigma: dict) -> bool:
    t = _walk(t, sigma)
    if isinstance(t, Var):
        return t.name == name
    if isinstance(t, Bin):
        return _occurs(name, t.left, sigma) or _occurs(name, t.right, sigma)
    return False


def unify(p: Formula, q: Formula, sigma: Optional[dict] = None) -> Optional[dict]:
    """Most general unifier of two patterns (triangular form), or None."""
    sigma = {} if sigma is None else dict(sigma)
    stack = [(p, q)]
    while stack:
        a, b = stack.pop()
        a, b = _walk(a, sigma), _walk(b, sigma)
        if a == b:
            continue
        if isinstance(a, Var) or isinstance(b, Var):
            if not isinstance(a, Var):
                a, b = b, a
            if _occurs(a.name, b, sigma):
                return None
            sigma[a.name] = b
        elif isinstance(a, Bin) and isinstance(b, Bin) and a.conn is b.conn:
            stack.append((a.right, b.right))
            stack.append((a.left, b.left))
        else:
            return None
    return sigma


def _resolve(t: Formula, sigma: dict) -> Formula:
    t = _walk(t, sigma)
    if isinstance(t, Bin):
        return Bin(t.conn, _resolve(t.left, sigma), _resolve(t.right, sigma))
    return t


def _rename(t: Formula, suffix: str) -> Formula:
    if isinstance(t, Var):
        return Var(t.name + suffix)
    if isinstance(t, Bin):
        return Bin(t.conn, _rename(t.left, suffix), _rename(t.right, suffix))
    return t


def _ground(t: Formula) -> Formula:
    """Replace metavariables by fresh letters a, b, c, ... in order of appearance."""
    names: dict[str, Letter] = {}

    def go(x):
        if isinstance(x, Var):
            if x.name not in names:
                names[x.name] = Letter(_letter_name(len(names)))
            return names[x.name]
        if isinstance(x, Bin):
            return Bin(x.conn, go(x.left), go(x.right))
        return x

    return go(t)


def _letter_name(i: int) -> str:
    alphabet = "abcdefghijklmnopqrsuvwxyz"  # no "t", to keep away from T
    return alphabet[i] if i < len(alphabet) else f"x{i}"


def _pattern_positions(p: Formula, prefix=()) -> list:
    if isinstance(p, Var):
        return []
    out = [prefix]
    if isinstance(p, Bin):
        out += _pattern_positions(p.left, prefix + ("L",))
        out += _pattern_positions(p.right, prefix + ("R",))
    return out


# ------------------------------------------------------------ divergences


def critical_pairs(sys: RewriteSystem, disjoint: bool = False) -> list[Divergence]:
    """Overlaps of one oriented rule inside a non-variable position of another.

    Peaks are ground: metavariables become distinct fresh letters. With
    ``disjoint=True`` a canonical disjoint-position divergence is added for
    every pair of oriented rules and every connective the rules use.
    """
    out: list[Divergence] = []
    seen = set()
    orient = sys.orientations()
    for r1, d1 in orient:
        l1 = r1.oriented(d1)[0]
        for r2, d2 in orient:
            l2 = _rename(r2.oriented(d2)[0], "'")
            for pos in _pattern_positions(l1):
                if pos == () and (r1, d1) == (r2, d2):
                    continue
                sigma = unify(subterm(l1, pos), l2)
                if sigma is None:
                    continue
                peak = _ground(_resolve(l1, sigma))
                _add(out, seen, peak, Step(r1, (), d1), Step(r2, pos, d2), Origin.CRITICAL)
    if disjoint:
        conns = sorted({c for r in sys.rules for c in _conns(r.lhs)}, key=lambda c: c.name)
        for i, (r1, d1) in enumerate(orient):
            for r2, d2 in orient[i:]:
                for conn in conns:
                    l1 = _rename(r1.oriented(d1)[0], "1")
                    l2 = _rename(r2.oriented(d2)[0], "2")
                    peak = _ground(Bin(conn, l1, l2))
                    _add(out, seen, peak, Step(r1, ("L",), d1), Step(r2, ("R",), d2), Origin.DISJOINT)
    return out


def _conns(p: Formula) -> set:
    if isinstance(p, Bin):
        return {p.conn} | _conns(p.left) | _conns(p.right)
    return set()


def _add(out, seen, peak, s1, s2, origin):
    key = (peak, frozenset([s1, s2]))
    if key in seen or s1 == s2:
        return
    # both steps must still match the ground peak
    for s in (s1, s2):
        if match(s.rule.oriented(s.direction)[0], subterm(peak, s.position)) is None:
            return
    seen.add(key)
    out.append(Divergence(peak, s1, s2, origin))


def classify(a: Step, b: Step) -> Origin:
    pa, pb = a.position, b.position
    if pa[:len(pb)] != pb and pb[:len(pa)] != pa:
        return Origin.DISJOINT
    outer, inner = (a, b) if len(pa) <= len(pb) else (b, a)
    rel = inner.position[len(outer.position):]
    lhs = outer.rule.oriented(outer.direction)[0]
    return Origin.CRITICAL if rel in _pattern_positions(lhs) else Origin.VARIABLE


def divergences(t: Formula, sys: RewriteSystem) -> list[Divergence]:
    """Every one-step forking at ``t``, in redex order."""
    steps = redexes(t, sys)
    return [Divergence(t, a, b, classify(a, b)) for a, b in combinations(steps, 2)]


# ------------------------------------------------------------------ tiles


class _Ball:
    """Breadth-first ball around a formula, grown one radius at a time."""

    def __init__(self, start: Formula):
        self.start = start
        self.info = {start: (0, None, 0)}  # formula -> (distance, (parent, step), order)
        self.frontier = [start]

    def grow(self, sys: RewriteSystem) -> None:
        nxt = []
        for t in self.frontier:
            dist = self.info[t][0]
            for s in redexes(t, sys):
                u = apply(t, s)
                if u not in self.info:
                    self.info[u] = (dist + 1, (t, s), len(self.info))
                    nxt.append(u)
        self.frontier = nxt

    def path_to(self, u: Formula) -> Path:
        steps = []
        while self.info[u][1] is not None:
            u, s = self.info[u][1]
            steps.append(s)
        return Path(self.start, tuple(reversed(steps)))


def join(d: Divergence, sys: RewriteSystem, bound: int = DEFAULT_JOIN_BOUND) -> Optional[Tile]:
    """Close a divergence by a common descendant.

    Both sides are explored breadth-first, one radius at a time, up to
    ``bound``; at the first radius where they meet, the meeting point with
    the least total tile length is taken.
    """
    lb, rb = _Ball(d.left), _Ball(d.right)
    for radius in range(bound + 1):
        if radius:
            if not lb.frontier and not rb.frontier:
                break
            lb.grow(sys)
            rb.grow(sys)
        small, big = (lb, rb) if len(lb.info) <= len(rb.info) else (rb, lb)
        common = [u for u in small.info if u in big.info]
        if common:
            best = min(common, key=lambda u: (lb.info[u][0] + rb.info[u][0],
                                              lb.info[u][0], lb.info[u][2], rb.info[u][2]))
            return Tile(d, lb.path_to(best), rb.path_to(best))
    return None


def tile_commutes(t: Tile) -> bool:
    left, right = t.sides()
    return graphs_equal(evaluate(path_arrow(left)), evaluate(path_arrow(right)))


# ----------------------------------------------------------------- Newman


class Verdict(str, Enum):
    UNIQUE_NF = "UniqueNF"
    BOUND_EXCEEDED = "BoundExceeded"
    NOT_LOCALLY_CONFLUENT = "NotLocallyConfluent"


@dataclass(frozen=True)
class NewmanResult:
    verdict: Verdict
    nf: Optional[Formula] = None
    witness: Optional[Divergence] = None
    longest: Optional[int] = None
    states: int = 0


def longest_reduction(t: Formula, sys: RewriteSystem, bound: int) -> Optional[int]:
    """Length of the longest reduction sequence from ``t``, or None if some
    sequence is longer than ``bound`` (this includes cycles)."""
    memo: dict[Formula, int] = {}
    on_stack = set()

    def go(u, depth):
        if u in memo:
            return memo[u] if depth + memo[u] <= bound else None
        if u in on_stack or depth > bound:
            return None
        on_stack.add(u)
        best = 0
        for s in redexes(u, sys):
            r = go(apply(u, s), depth + 1)
            if r is None:
                on_stack.discard(u)
                return None
            best = max(best, r + 1)
        on_stack.discard(u)
        memo[u] = best
        return best if depth + best <= bound else None

    return go(t, 0)


def newman_check(sys: RewriteSystem, t: Formula, bound: int,
                 join_bound: Optional[int] = None) -> NewmanResult:
    """Bounded termination plus local confluence from ``t``, hence a unique
    normal form (Newman's lemma); the normal form is returned."""
    longest = longest_reduction(t, sys, bound)
    if longest is None:
        return NewmanResult(Verdict.BOUND_EXCEEDED)
    jb = bound if join_bound is None else join_bound
    seen = {t}
    queue = deque([t])
    normal = []
    while queue:
        u = queue.popleft()
        steps = redexes(u, sys)
        if not steps:
            normal.append(u)
        for d in divergences(u, sys):
            if join(d, sys, jb) is None:
                return NewmanResult(Verdict.NOT_LOCALLY_CONFLUENT, witness=d,
                                    longest=longest, states=len(seen))
        for s in steps:
            v = apply(u, s)
            if v not in seen:
                seen.add(v)
                queue.append(v)
    if len(normal) != 1:
        raise RuntimeError(f"terminating, locally confluent, yet {len(normal)} normal forms")
    return NewmanResult(Verdict.UNIQUE_NF, normal[0], longest=longest, states=len(seen))


# ----------------------------------------------------------------- report


def confluence_report(sys: RewriteSystem, bound: int = DEFAULT_JOIN_BOUND,
                      disjoint: bool = False) -> list[dict]:
    rows = []
    for d in critical_pairs(sys, disjoint=disjoint):
        tile = join(d, sys, bound)
        row = {
            "peak": show(d.peak),
            "origin": d.origin.value,
            "left_step": _step_json(d.left_step),
            "right_step": _step_json(d.right_step),
            "joined": tile is not None,
            "commutes": bool(tile is not None and tile_commutes(tile)),
            "tile": None,
        }
        if tile is not None:
            row["tile"] = [path_to_json(tile.left_path), path_to_json(tile.right_path)]
            left, _ = tile.sides()
            row["graph"] = graph_to_json(evaluate(path_arrow(left)))
        rows.append(row)
    return rows


def _step_json(s: Step) -> dict:
    return {"rule": s.rule.name, "position": "".join(s.position), "direction": s.direction.value}
