"""Deciding equality of arrows in free monoidal-style categories, by a
graph model and by rewriting of their types with model-checked tiles."""

from .syntax import (
    And, Bin, Comp, Conn, Gen, Imp, Letter, Or, T, Tensor, Unit, Var,
    infer_type, leaves, parse_arrow, parse_formula, show,
)
from .graphmodel import LinkGraph, compose, evaluate, graphs_equal, tensor
from .coherence import THEORIES, Verdict, decide_equal, naturality_square

__all__ = [
    "And", "Bin", "Comp", "Conn", "Gen", "Imp", "Letter", "Or", "T", "Tensor", "Unit", "Var",
    "infer_type", "leaves", "parse_arrow", "parse_formula", "show",
    "LinkGraph", "compose", "evaluate", "graphs_equal", "tensor",
    "THEORIES", "Verdict", "decide_equal", "naturality_square",
]

__version__ = "0.1.0"
