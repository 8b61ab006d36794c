"""Deciding equality of arrow terms in freely generated theories.

For preorder theories (monoidal, associativity with dissociativity) two
parallel arrows are always equal. In the symmetric case the graph decides.
For the full generator set the graph can only refute equality: two terms
with different graphs cannot be equal in any theory the functor respects,
but equal graphs prove nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .graphmodel import LinkGraph, evaluate, graph_to_json, graphs_equal
from .syntax import (
    ArrowTerm, Comp, Conn, Formula, GENERATORS, Id, K1, Tensor, W,
    generators_of, infer_type, show,
)

__all__ = [
    "Theory", "THEORIES", "MONOIDAL", "SYMMETRIC", "ASSOC_DISSOC", "GRAPH_MODEL_ONLY",
    "Verdict", "Decision", "FragmentError",
    "in_fragment", "decide_equal", "naturality_square", "NaturalitySquare",
]

_MONOIDAL = frozenset({"id", "alpha", "alpha_inv", "lambda", "lambda_inv", "rho", "rho_inv"})


@dataclass(frozen=True)
class Theory:
    name: str
    generators: frozenset
    tensors: frozenset
    preorder: bool = False


MONOIDAL = Theory("monoidal", _MONOIDAL, frozenset({Conn.AND}), preorder=True)
SYMMETRIC = Theory("symmetric", _MONOIDAL | {"sigma"}, frozenset({Conn.AND}))
ASSOC_DISSOC = Theory("assoc-dissoc",
                      frozenset({"id", "alpha", "alpha_inv", "alpha_or", "alpha_or_inv", "d"}),
                      frozenset({Conn.AND, Conn.OR}), preorder=True)
GRAPH_MODEL_ONLY = Theory("model", frozenset(GENERATORS), frozenset({Conn.AND, Conn.OR}))

THEORIES = {t.name: t for t in (MONOIDAL, SYMMETRIC, ASSOC_DISSOC, GRAPH_MODEL_ONLY)}


class Verdict(str, Enum):
    EQUAL = "Equal"
    NOT_EQUAL = "NotEqual"
    MODEL_DISTINCT = "ModelDistinct"
    MODEL_EQUAL_ONLY = "ModelEqualOnly"


class FragmentError(ValueError):
    pass


def _tensors_of(f: ArrowTerm):
    if isinstance(f, Tensor):
        yield f.conn
        yield from _tensors_of(f.f)
        yield from _tensors_of(f.g)
    elif isinstance(f, Comp):
        yield from _tensors_of(f.g)
        yield from _tensors_of(f.f)


def in_fragment(f: ArrowTerm, th: Theory) -> bool:
    return (all(g.kind in th.generators for g in generators_of(f))
            and all(c in th.tensors for c in _tensors_of(f)))


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    type_f: tuple
    type_g: tuple
    graph_f: LinkGraph
    graph_g: LinkGraph

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "type_f": {"source": show(self.type_f[0]), "target": show(self.type_f[1])},
            "type_g": {"source": show(self.type_g[0]), "target": show(self.type_g[1])},
            "graph_f": graph_to_json(self.graph_f),
            "graph_g": graph_to_json(self.graph_g),
        }


def decide_equal(f: ArrowTerm, g: ArrowTerm, th: Theory) -> Decision:
    for name, x in (("first", f), ("second", g)):
        if not in_fragment(x, th):
            bad = sorted({k.kind for k in generators_of(x)} - th.generators)
            raise FragmentError(f"{name} arrow leaves the {th.name} fragment"
                                + (f" (uses {', '.join(bad)})" if bad else " (tensor connective)"))
    tf, tg = infer_type(f), infer_type(g)
    gf, gg = evaluate(f), evaluate(g)
    if th.preorder:
        verdict = Verdict.EQUAL if tf == tg else Verdict.NOT_EQUAL
    elif th is GRAPH_MODEL_ONLY or not th.generators <= SYMMETRIC.generators:
        verdict = Verdict.MODEL_EQUAL_ONLY if graphs_equal(gf, gg) else Verdict.MODEL_DISTINCT
    else:
        verdict = Verdict.EQUAL if tf == tg and graphs_equal(gf, gg) else Verdict.NOT_EQUAL
    return Decision(verdict, tf, tg, gf, gg)


@dataclass(frozen=True)
class NaturalitySquare:
    lhs: ArrowTerm
    rhs: ArrowTerm
    commutes_in_model: bool


def naturality_square(kind: str, h: ArrowTerm, context: Optional[Formula] = None,
                      slot: int = 2) -> NaturalitySquare:
    """Both composites of the naturality square of ``w`` or ``k1`` at ``h``.

    ``w``:  ``w[B] . h``  vs  ``(h /\\ h) . w[A]``  for ``h: A -> B``.
    ``k1`` with a context ``C`` in the second slot (the default):
    ``k1[C, B] . (id[C] /\\ h)``  vs  ``k1[C, A]``; in the first slot:
    ``h . k1[A, C]``  vs  ``k1[B, C] . (h /\\ id[C])``.
    """
    a, b = infer_type(h)
    if kind == "w":
        lhs = Comp(W(b), h)
        rhs = Comp(Tensor(Conn.AND, h, h), W(a))
    elif kind == "k1":
        if context is None:
            raise ValueError("k1 naturality needs a context formula")
        if slot == 2:
            lhs = Comp(K1(context, b), Tensor(Conn.AND, Id(context), h))
            rhs = K1(context, a)
        elif slot == 1:
            lhs = Comp(h, K1(a, context))
            rhs = Comp(K1(b, context), Tensor(Conn.AND, h, Id(context)))
        else:
            raise ValueError("slot must be 1 or 2")
    else:
        raise ValueError(f"no naturality square for {kind!r}")
    if infer_type(lhs) != infer_type(rhs):  # pragma: no cover - holds by construction
        raise AssertionError("square sides are not parallel")
    return NaturalitySquare(lhs, rhs, graphs_equal(evaluate(lhs), evaluate(rhs)))
