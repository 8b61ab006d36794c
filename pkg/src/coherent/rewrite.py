"""Rewriting of object terms.

Rules rewrite formulas (the types of arrows), never arrows themselves. Each
rule knows which generator arrow witnesses it, so a reduction path can be
compiled back into an arrow term with :func:`path_arrow`.
"""

from __future__ import annotations

import os
from collections import Counter, deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, NamedTuple, Optional

from .syntax import (
    AlphaInv, AlphaOr, AlphaOrInv, Alpha, And, ArrowTerm, Bin, Comp, Conn, D,
    Formula, Id, Lambda, LambdaInv, Letter, Or, Rho, RhoInv, T, Tensor, Unit,
    Var, infer_type, leaves, show,
)

__all__ = [
    "Direction", "RewriteRule", "RewriteSystem", "Step", "Path",
    "RewriteError", "BudgetExceeded",
    "MONOIDAL_NF", "DISSOC", "ASSOC", "SYSTEMS",
    "match", "substitute", "subterm", "replace", "positions",
    "redexes", "apply", "normalize", "reachable", "reachable_set",
    "path_arrow", "replay", "format_position", "parse_position",
    "path_to_json", "right_comb", "shape_preserving", "max_states",
    "step_arrow", "STRATEGIES", "ASSOC_R", "UNIT_L", "UNIT_R", "DISSOC_D",
    "termination_measure",
]

Position = tuple  # of "L" / "R"


class Direction(str, Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


class RewriteError(ValueError):
    pass


class BudgetExceeded(RewriteError):
    pass


DEFAULT_MAX_STATES = 10**6
DEFAULT_MAX_STEPS = 10**4


def max_states(default: int = DEFAULT_MAX_STATES) -> int:
    value = os.environ.get("COHERENCE_MAX_STATES")
    return int(value) if value else default


@dataclass(frozen=True, eq=False)
class RewriteRule:
    """A schematic rewrite ``lhs => rhs`` over metavariables.

    ``build`` maps a substitution of the metavariables to the generator
    arrow of type ``σ(lhs) -> σ(rhs)``; ``build_inverse`` (if any) to one of
    type ``σ(rhs) -> σ(lhs)``.
    """

    name: str
    lhs: Formula
    rhs: Formula
    build: Callable[[dict], ArrowTerm]
    build_inverse: Optional[Callable[[dict], ArrowTerm]] = None

    def __post_init__(self):
        lv = _vars(self.lhs)
        if len(lv) != len(set(lv)):
            raise ValueError(f"rule {self.name}: left-hand side is not linear")
        if not set(_vars(self.rhs)) <= set(lv):
            raise ValueError(f"rule {self.name}: right-hand side has unbound variables")

    def oriented(self, direction: Direction) -> tuple[Formula, Formula]:
        if direction is Direction.FORWARD:
            return self.lhs, self.rhs
        return self.rhs, self.lhs

    def arrow(self, direction: Direction, sigma: dict) -> ArrowTerm:
        if direction is Direction.FORWARD:
            return self.build(sigma)
        if self.build_inverse is None:
            raise RewriteError(f"rule {self.name} is not invertible")
        return self.build_inverse(sigma)

    def __repr__(self):
        return f"RewriteRule({self.name}: {show(self.lhs)} => {show(self.rhs)})"


@dataclass(frozen=True)
class RewriteSystem:
    name: str
    rules: tuple
    invertible: frozenset = frozenset()

    def __post_init__(self):
        names = [r.name for r in self.rules]
        if len(names) != len(set(names)):
            raise ValueError(f"duplicate rule names in {self.name}")
        if not self.invertible <= set(names):
            raise ValueError("invertible names must name rules of the system")
        for r in self.rules:
            if r.name in self.invertible:
                if r.build_inverse is None or not set(_vars(r.lhs)) <= set(_vars(r.rhs)):
                    raise ValueError(f"rule {r.name} cannot be used backwards")

    def rule(self, name: str) -> RewriteRule:
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError(name)

    def orientations(self) -> list[tuple[RewriteRule, Direction]]:
        out = []
        for r in sorted(self.rules, key=lambda r: r.name):
            out.append((r, Direction.FORWARD))
            if r.name in self.invertible:
                out.append((r, Direction.INVERSE))
        return out


class Step(NamedTuple):
    rule: RewriteRule
    position: Position
    direction: Direction = Direction.FORWARD

    def key(self):
        return (self.position, self.rule.name, self.direction is Direction.INVERSE)

    def __str__(self):
        arrow = "" if self.direction is Direction.FORWARD else "^-1"
        return f"{self.rule.name}{arrow}@{format_position(self.position) or 'ε'}"


@dataclass(frozen=True)
class Path:
    start: Formula
    steps: tuple = ()
    end: Formula = field(default=None)

    def __post_init__(self):
        for s in self.steps:
            if s.direction is Direction.INVERSE and s.rule.build_inverse is None:
                raise RewriteError(f"rule {s.rule.name} has no inverse")
        end = replay(self.start, self.steps)
        if self.end is not None and self.end != end:
            raise RewriteError("path end does not match its steps")
        object.__setattr__(self, "end", end)

    def __len__(self):
        return len(self.steps)

    def then(self, other: "Path") -> "Path":
        if other.start != self.end:
            raise RewriteError("paths do not meet")
        return Path(self.start, self.steps + other.steps)


# ------------------------------------------------------------- term access


def _vars(p: Formula) -> list[str]:
    if isinstance(p, Var):
        return [p.name]
    if isinstance(p, Bin):
        return _vars(p.left) + _vars(p.right)
    return []


def match(pattern: Formula, term: Formula, sigma: Optional[dict] = None) -> Optional[dict]:
    """Match ``pattern`` against ``term``; metavariables of the term are rigid."""
    sigma = {} if sigma is None else sigma
    if isinstance(pattern, Var):
        bound = sigma.get(pattern.name)
        if bound is None:
            sigma[pattern.name] = term
            return sigma
        return sigma if bound == term else None
    if isinstance(pattern, Bin):
        if not (isinstance(term, Bin) and term.conn is pattern.conn):
            return None
        if match(pattern.left, term.left, sigma) is None:
            return None
        return match(pattern.right, term.right, sigma)
    return sigma if pattern == term else None


def substitute(pattern: Formula, sigma: dict) -> Formula:
    if isinstance(pattern, Var):
        return sigma.get(pattern.name, pattern)
    if isinstance(pattern, Bin):
        return Bin(pattern.conn, substitute(pattern.left, sigma), substitute(pattern.right, sigma))
    return pattern


def subterm(t: Formula, pos: Position) -> Formula:
    for d in pos:
        if not isinstance(t, Bin):
            raise RewriteError(f"position {format_position(pos)} is not in the term")
        t = t.left if d == "L" else t.right
    return t


def replace(t: Formula, pos: Position, new: Formula) -> Formula:
    if not pos:
        return new
    if not isinstance(t, Bin):
        raise RewriteError("position is not in the term")
    if pos[0] == "L":
        return Bin(t.conn, replace(t.left, pos[1:], new), t.right)
    return Bin(t.conn, t.left, replace(t.right, pos[1:], new))


def positions(t: Formula, _prefix: Position = ()) -> list[Position]:
    """Rewritable positions in preorder. Nothing under ``->`` is rewritable,
    since arrows cannot be formed in that context."""
    out = [_prefix]
    if isinstance(t, Bin) and t.conn is not Conn.IMP:
        out += positions(t.left, _prefix + ("L",))
        out += positions(t.right, _prefix + ("R",))
    return out


def format_position(pos: Position) -> str:
    return "".join(pos)


def parse_position(text: str) -> Position:
    if text in ("", "ε", "e"):
        return ()
    if set(text) - {"L", "R"}:
        raise ValueError(f"bad position {text!r}")
    return tuple(text)


# ------------------------------------------------------------------ steps


def redexes(t: Formula, sys: RewriteSystem) -> list[Step]:
    out = []
    orient = sys.orientations()
    for pos in positions(t):
        sub = subterm(t, pos)
        for rule, direction in orient:
            if match(rule.oriented(direction)[0], sub) is not None:
                out.append(Step(rule, pos, direction))
    out.sort(key=Step.key)
    return out


def apply(t: Formula, step: Step) -> Formula:
    rule, pos, direction = step
    lhs, rhs = rule.oriented(direction)
    sigma = match(lhs, subterm(t, pos))
    if sigma is None:
        raise RewriteError(f"{step} does not match {show(t)}")
    return replace(t, pos, substitute(rhs, sigma))


def replay(start: Formula, steps: Iterable[Step]) -> Formula:
    t = start
    for s in steps:
        t = apply(t, s)
    return t


def _innermost_leftmost(steps: list[Step]) -> Step:
    def has_redex_below(s):
        p = s.position
        return any(len(o.position) > len(p) and o.position[:len(p)] == p for o in steps)
    return min((s for s in steps if not has_redex_below(s)), key=Step.key)


def _outermost_leftmost(steps: list[Step]) -> Step:
    return min(steps, key=Step.key)


STRATEGIES = {"innermost": _innermost_leftmost, "outermost": _outermost_leftmost}


def normalize(t: Formula, sys: RewriteSystem, max_steps: int = DEFAULT_MAX_STEPS,
              strategy: str = "innermost") -> tuple[Formula, Path]:
    """Reduce with forward steps only until no redex is left.

    The default strategy contracts the leftmost-innermost redex;
    ``"outermost"`` picks the first redex in position order instead.
    """
    pick = STRATEGIES[strategy]
    steps = []
    cur = t
    while True:
        candidates = [s for s in redexes(cur, sys) if s.direction is Direction.FORWARD]
        if not candidates:
            return cur, Path(t, tuple(steps), cur)
        if len(steps) >= max_steps:
            raise BudgetExceeded(f"no normal form within {max_steps} steps")
        s = pick(candidates)
        steps.append(s)
        cur = apply(cur, s)


def reachable(c: Formula, b: Formula, sys: RewriteSystem,
              budget: Optional[int] = None) -> Optional[Path]:
    """Shortest path from ``c`` to ``b`` (lexicographically least among
    the shortest), or None once the reachable space is exhausted."""
    budget = max_states() if budget is None else budget
    if c == b:
        return Path(c, (), c)
    parent: dict[Formula, tuple] = {c: None}
    queue = deque([c])
    while queue:
        t = queue.popleft()
        for s in redexes(t, sys):
            u = apply(t, s)
            if u in parent:
                continue
            parent[u] = (t, s)
            if u == b:
                return Path(c, _unwind(parent, u), b)
            if len(parent) > budget:
                raise BudgetExceeded(f"more than {budget} states reachable from {show(c)}")
            queue.append(u)
    return None


def _unwind(parent: dict, u: Formula) -> tuple:
    steps = []
    while parent[u] is not None:
        u, s = parent[u]
        steps.append(s)
    return tuple(reversed(steps))


def reachable_set(c: Formula, sys: RewriteSystem, budget: Optional[int] = None) -> set:
    budget = max_states() if budget is None else budget
    seen = {c}
    queue = deque([c])
    while queue:
        t = queue.popleft()
        for s in redexes(t, sys):
            u = apply(t, s)
            if u not in seen:
                seen.add(u)
                if len(seen) > budget:
                    raise BudgetExceeded(f"more than {budget} states reachable from {show(c)}")
                queue.append(u)
    return seen


def _connectives(p: Formula) -> Counter:
    if isinstance(p, Bin):
        return Counter([p.conn]) + _connectives(p.left) + _connectives(p.right)
    return Counter()


def shape_preserving(sys: RewriteSystem) -> bool:
    """Every rule keeps the metavariable order, the units and the connective
    multiset, so the reachable space from any term is finite."""
    for r in sys.rules:
        if _vars(r.lhs) != _vars(r.rhs) or _connectives(r.lhs) != _connectives(r.rhs):
            return False
        if sum(isinstance(x, Unit) for x in _atoms(r.lhs)) != sum(isinstance(x, Unit) for x in _atoms(r.rhs)):
            return False
    return True


def _atoms(p: Formula) -> list:
    if isinstance(p, Bin):
        return _atoms(p.left) + _atoms(p.right)
    return [p]


# ------------------------------------------------------------ path arrows


def _embed(t: Formula, pos: Position, arrow: ArrowTerm) -> ArrowTerm:
    if not pos:
        return arrow
    if not isinstance(t, Bin) or t.conn is Conn.IMP:
        raise RewriteError("cannot form an arrow under ->")
    if pos[0] == "L":
        return Tensor(t.conn, _embed(t.left, pos[1:], arrow), Id(t.right))
    return Tensor(t.conn, Id(t.left), _embed(t.right, pos[1:], arrow))


def step_arrow(t: Formula, step: Step) -> ArrowTerm:
    rule, pos, direction = step
    lhs, _ = rule.oriented(direction)
    sigma = match(lhs, subterm(t, pos))
    if sigma is None:
        raise RewriteError(f"{step} does not match {show(t)}")
    return _embed(t, pos, rule.arrow(direction, sigma))


def path_arrow(p: Path) -> ArrowTerm:
    """Compose the step arrows of a path; the empty path gives the identity."""
    acc = None
    t = p.start
    for s in p.steps:
        a = step_arrow(t, s)
        acc = a if acc is None else Comp(a, acc)
        t = apply(t, s)
    return Id(p.start) if acc is None else acc


def path_to_json(p: Path) -> dict:
    return {
        "start": show(p.start),
        "steps": [{"rule": s.rule.name, "position": format_position(s.position),
                   "direction": s.direction.value} for s in p.steps],
        "end": show(p.end),
    }


def right_comb(letters: list, conn: Conn = Conn.AND) -> Formula:
    """Right-associated comb over ``letters`` (names or formulas); ``T`` if empty."""
    items = [Letter(x) if isinstance(x, str) else x for x in letters]
    if not items:
        return T
    acc = items[-1]
    for x in reversed(items[:-1]):
        acc = Bin(conn, x, acc)
    return acc


def _size(t: Formula) -> int:
    return _size(t.left) + _size(t.right) if isinstance(t, Bin) else 1


def termination_measure(t: Formula) -> int:
    """Sum over /\\-nodes of the leaf count (units included) of the left child.

    Every forward step of the monoidal system lowers it: assocR by the
    size of the middle operand, unitL and unitR by at least one. It is
    therefore an upper bound on the length of any reduction from ``t``.
    """
    if not isinstance(t, Bin):
        return 0
    here = _size(t.left) if t.conn is Conn.AND else 0
    return here + termination_measure(t.left) + termination_measure(t.right)


# ---------------------------------------------------------- built-in systems

_A, _B, _C = Var("A"), Var("B"), Var("C")


def _abc(make):
    return lambda s: make(s["A"], s["B"], s["C"])


ASSOC_R = RewriteRule("assocR", And(And(_A, _B), _C), And(_A, And(_B, _C)),
                      _abc(Alpha), _abc(AlphaInv))
UNIT_L = RewriteRule("unitL", And(T, _A), _A,
                     lambda s: Lambda(s["A"]), lambda s: LambdaInv(s["A"]))
UNIT_R = RewriteRule("unitR", And(_A, T), _A,
                     lambda s: Rho(s["A"]), lambda s: RhoInv(s["A"]))
ASSOC_AND_R = RewriteRule("assocAndR", And(And(_A, _B), _C), And(_A, And(_B, _C)),
                          _abc(Alpha), _abc(AlphaInv))
ASSOC_OR_R = RewriteRule("assocOrR", Or(Or(_A, _B), _C), Or(_A, Or(_B, _C)),
                         _abc(AlphaOr), _abc(AlphaOrInv))
DISSOC_D = RewriteRule("d", And(_A, Or(_B, _C)), Or(And(_A, _B), _C), _abc(D))

MONOIDAL_NF = RewriteSystem("monoidal-nf", (ASSOC_R, UNIT_L, UNIT_R))
DISSOC = RewriteSystem("dissoc", (ASSOC_AND_R, ASSOC_OR_R, DISSOC_D),
                       frozenset({"assocAndR", "assocOrR"}))
ASSOC = RewriteSystem("assoc", (ASSOC_R,))

SYSTEMS = {s.name: s for s in (MONOIDAL_NF, DISSOC, ASSOC)}


def check_rule_typing(rule: RewriteRule, sigma: dict) -> bool:
    """The built arrow has type σ(lhs) -> σ(rhs) (and backwards, if invertible)."""
    ok = infer_type(rule.build(sigma)) == (substitute(rule.lhs, sigma), substitute(rule.rhs, sigma))
    if rule.build_inverse is not None:
        ok &= infer_type(rule.build_inverse(sigma)) == (
            substitute(rule.rhs, sigma), substitute(rule.lhs, sigma))
    return ok


def same_leaves(a: Formula, b: Formula) -> bool:
    return leaves(a) == leaves(b)
