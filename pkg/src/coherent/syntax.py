"""Formulas, arrow terms, their ASCII syntax and typing.

Formulas are built from letters, the unit ``T`` and the binary connectives
``/\\`` (and), ``\\/`` (or) and ``->`` (implication). Arrow terms are
generator applications such as ``eta[p, q]`` closed under composition
``g . f`` (``f`` applies first) and tensoring ``f /\\ g``, ``f \\/ g``.

>>> print(parse_formula("p -> p /\\ q"))
p -> (p /\\ q)
>>> f = parse_arrow("w[p -> (p /\\ q)] . eta[p, q]")
>>> src, tgt = infer_type(f)
>>> print(src, "|-", tgt)
q |- (p -> (p /\\ q)) /\\ (p -> (p /\\ q))
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator, Union

__all__ = [
    "Conn", "Letter", "Unit", "Bin", "Var", "Formula",
    "Gen", "Comp", "Tensor", "ArrowTerm", "GENERATORS",
    "Id", "Alpha", "AlphaInv", "AlphaOr", "AlphaOrInv", "Lambda", "LambdaInv",
    "Rho", "RhoInv", "Sigma", "W", "K1", "K2", "Eta", "Eps", "D",
    "And", "Or", "Imp", "T",
    "ParseError", "TypeMismatch",
    "parse_formula", "parse_arrow", "infer_type", "leaves", "letter_count",
    "show", "generators_of",
]


class Conn(Enum):
    AND = "/\\"
    OR = "\\/"
    IMP = "->"

    def __repr__(self):
        return f"Conn.{self.name}"


@dataclass(frozen=True, slots=True)
class Letter:
    name: str

    def __post_init__(self):
        if not _IDENT.fullmatch(self.name) or self.name == "T":
            raise ValueError(f"bad letter name {self.name!r}")

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Unit:
    def __str__(self):
        return "T"


@dataclass(frozen=True, slots=True)
class Bin:
    conn: Conn
    left: "Formula"
    right: "Formula"
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self):
        # formulas are dictionary keys all over the rewriting code
        object.__setattr__(self, "_hash", hash((self.conn, self.left, self.right)))

    def __hash__(self):
        return self._hash

    def __str__(self):
        return show(self)


@dataclass(frozen=True, slots=True)
class Var:
    """Metavariable; only appears in rewrite-rule patterns and critical peaks."""

    name: str

    def __str__(self):
        return "?" + self.name


Formula = Union[Letter, Unit, Bin, Var]

T = Unit()


def And(a: Formula, b: Formula) -> Bin:
    return Bin(Conn.AND, a, b)


def Or(a: Formula, b: Formula) -> Bin:
    return Bin(Conn.OR, a, b)


def Imp(a: Formula, b: Formula) -> Bin:
    return Bin(Conn.IMP, a, b)


def show(a: Formula) -> str:
    """Print a formula; every non-atomic operand is parenthesized."""
    if isinstance(a, Bin):
        return f"{_operand(a.left)} {a.conn.value} {_operand(a.right)}"
    return str(a)


def _operand(a: Formula) -> str:
    return f"({show(a)})" if isinstance(a, Bin) else str(a)


def leaves(a: Formula) -> list[tuple[int, str]]:
    """Left-to-right letter occurrences, numbered from 1. Units are skipped.

    Metavariables count as a single occurrence named after the variable.
    """
    out: list[str] = []
    _collect(a, out)
    return [(i, name) for i, name in enumerate(out, 1)]


def _collect(a: Formula, out: list[str]) -> None:
    if isinstance(a, Bin):
        _collect(a.left, out)
        _collect(a.right, out)
    elif isinstance(a, Letter):
        out.append(a.name)
    elif isinstance(a, Var):
        out.append("?" + a.name)


def letter_count(a: Formula) -> int:
    if isinstance(a, Bin):
        return letter_count(a.left) + letter_count(a.right)
    return 0 if isinstance(a, Unit) else 1


# ---------------------------------------------------------------- arrows


class TypeMismatch(ValueError):
    """Raised when a composite is ill typed or a generator is misapplied."""

    def __init__(self, message: str, path: str = "", expected=None, found=None):
        self.path = path
        self.expected = expected
        self.found = found
        super().__init__(f"{message} (at subterm {path or 'root'})")


@dataclass(frozen=True, slots=True)
class Gen:
    kind: str
    params: tuple

    def __post_init__(self):
        spec = GENERATORS.get(self.kind)
        if spec is None:
            raise ValueError(f"unknown generator {self.kind!r}")
        if len(self.params) != spec[0]:
            raise ValueError(
                f"generator {self.kind} takes {spec[0]} formula(s), got {len(self.params)}"
            )

    def __str__(self):
        return f"{self.kind}[{', '.join(show(p) for p in self.params)}]"


@dataclass(frozen=True, slots=True)
class Comp:
    """``g . f``: first ``f``, then ``g``."""

    g: "ArrowTerm"
    f: "ArrowTerm"

    def __str__(self):
        return show_arrow(self)


@dataclass(frozen=True, slots=True)
class Tensor:
    conn: Conn
    f: "ArrowTerm"
    g: "ArrowTerm"

    def __post_init__(self):
        if self.conn is Conn.IMP:
            raise ValueError("arrows cannot be tensored under ->")

    def __str__(self):
        return show_arrow(self)


ArrowTerm = Union[Gen, Comp, Tensor]


# name -> (arity, typing function from formula parameters to (source, target))
GENERATORS: dict[str, tuple[int, Callable[..., tuple[Formula, Formula]]]] = {
    "id": (1, lambda a: (a, a)),
    "alpha": (3, lambda a, b, c: (And(And(a, b), c), And(a, And(b, c)))),
    "alpha_inv": (3, lambda a, b, c: (And(a, And(b, c)), And(And(a, b), c))),
    "alpha_or": (3, lambda a, b, c: (Or(Or(a, b), c), Or(a, Or(b, c)))),
    "alpha_or_inv": (3, lambda a, b, c: (Or(a, Or(b, c)), Or(Or(a, b), c))),
    "lambda": (1, lambda a: (And(T, a), a)),
    "lambda_inv": (1, lambda a: (a, And(T, a))),
    "rho": (1, lambda a: (And(a, T), a)),
    "rho_inv": (1, lambda a: (a, And(a, T))),
    "sigma": (2, lambda a, b: (And(a, b), And(b, a))),
    "w": (1, lambda a: (a, And(a, a))),
    "k1": (2, lambda a, b: (And(a, b), a)),
    "k2": (2, lambda a, b: (And(a, b), b)),
    "eta": (2, lambda a, b: (b, Imp(a, And(a, b)))),
    "eps": (2, lambda a, b: (And(a, Imp(a, b)), b)),
    "d": (3, lambda a, b, c: (And(a, Or(b, c)), Or(And(a, b), c))),
}


def _gen(kind):
    def make(*params):
        return Gen(kind, tuple(params))
    make.__name__ = kind
    return make


Id = _gen("id")
Alpha = _gen("alpha")
AlphaInv = _gen("alpha_inv")
AlphaOr = _gen("alpha_or")
AlphaOrInv = _gen("alpha_or_inv")
Lambda = _gen("lambda")
LambdaInv = _gen("lambda_inv")
Rho = _gen("rho")
RhoInv = _gen("rho_inv")
Sigma = _gen("sigma")
W = _gen("w")
K1 = _gen("k1")
K2 = _gen("k2")
Eta = _gen("eta")
Eps = _gen("eps")
D = _gen("d")


def infer_type(f: ArrowTerm, path: str = "") -> tuple[Formula, Formula]:
    """Return ``(source, target)`` of an arrow term.

    ``path`` locates subterms in error messages: ``g``/``f`` for the two
    sides of a composite, ``1``/``2`` for tensor factors.
    """
    if isinstance(f, Gen):
        return GENERATORS[f.kind][1](*f.params)
    if isinstance(f, Tensor):
        s1, t1 = infer_type(f.f, path + "1")
        s2, t2 = infer_type(f.g, path + "2")
        return Bin(f.conn, s1, s2), Bin(f.conn, t1, t2)
    if isinstance(f, Comp):
        s1, t1 = infer_type(f.f, path + "f")
        s2, t2 = infer_type(f.g, path + "g")
        if t1 != s2:
            raise TypeMismatch(
                f"cannot compose: target {show(t1)} of the first arrow "
                f"differs from source {show(s2)} of the second",
                path, expected=t1, found=s2,
            )
        return s1, t2
    raise TypeError(f"not an arrow term: {f!r}")


def generators_of(f: ArrowTerm) -> Iterator[Gen]:
    if isinstance(f, Gen):
        yield f
    elif isinstance(f, Comp):
        yield from generators_of(f.g)
        yield from generators_of(f.f)
    else:
        yield from generators_of(f.f)
        yield from generators_of(f.g)


def show_arrow(f: ArrowTerm) -> str:
    if isinstance(f, Gen):
        return str(f)
    if isinstance(f, Comp):
        left = show_arrow(f.g)
        if not isinstance(f.g, Gen):
            left = f"({left})"
        right = show_arrow(f.f)
        if isinstance(f.f, Tensor):
            right = f"({right})"
        return f"{left} . {right}"
    parts = []
    for x in (f.f, f.g):
        s = show_arrow(x)
        parts.append(f"({s})" if not isinstance(x, Gen) else s)
    return f" {f.conn.value} ".join(parts)


# ---------------------------------------------------------------- parsing

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(r"\s*(?:(/\\|\\/|->|[()\[\],.])|([A-Za-z_][A-Za-z0-9_]*))")


class ParseError(ValueError):
    def __init__(self, offset: int, expected: set[str], found: str):
        self.offset = offset
        self.expected = frozenset(expected)
        self.found = found
        super().__init__(
            f"syntax error at offset {offset}: expected one of "
            f"{', '.join(sorted(self.expected))}; found {found!r}"
        )


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(pos, {"token"}, text[pos])
        start = m.start(1) if m.group(1) else m.start(2)
        if m.group(1):
            toks.append((m.group(1), m.group(1), start))
        else:
            toks.append(("ident", m.group(2), start))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def kind(self):
        return self.toks[self.i][0]

    def fail(self, expected):
        kind, value, off = self.toks[self.i]
        raise ParseError(off, expected, value or "end of input")

    def eat(self, kind):
        if self.kind != kind:
            self.fail({kind})
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def done(self):
        if self.kind != "eof":
            self.fail({"end of input"})

    # formula := imp ; imp := or ("->" imp)?
    def formula(self) -> Formula:
        left = self.disj()
        if self.kind == "->":
            self.i += 1
            return Imp(left, self.formula())
        return left

    def disj(self) -> Formula:
        a = self.conj()
        while self.kind == "\\/":
            self.i += 1
            a = Or(a, self.conj())
        return a

    def conj(self) -> Formula:
        a = self.atom()
        while self.kind == "/\\":
            self.i += 1
            a = And(a, self.atom())
        return a

    def atom(self) -> Formula:
        if self.kind == "ident":
            name = self.eat("ident")[1]
            return T if name == "T" else Letter(name)
        if self.kind == "(":
            self.i += 1
            a = self.formula()
            self.eat(")")
            return a
        self.fail({"letter", "T", "("})

    # arrow := comp ; comp := tens ("." comp)? ; tens := prim (("/\"|"\/") prim)?
    def arrow(self) -> ArrowTerm:
        g = self.tens()
        if self.kind == ".":
            self.i += 1
            return Comp(g, self.arrow())
        return g

    def tens(self) -> ArrowTerm:
        f = self.prim()
        if self.kind in ("/\\", "\\/"):
            conn = Conn(self.eat(self.kind)[0])
            return Tensor(conn, f, self.prim())
        return f

    def prim(self) -> ArrowTerm:
        if self.kind == "(":
            self.i += 1
            f = self.arrow()
            self.eat(")")
            return f
        if self.kind != "ident":
            self.fail({"generator name", "("})
        _, name, off = self.eat("ident")
        if name not in GENERATORS:
            raise ParseError(off, set(GENERATORS), name)
        self.eat("[")
        params = [self.formula()]
        while self.kind == ",":
            self.i += 1
            params.append(self.formula())
        self.eat("]")
        arity = GENERATORS[name][0]
        if len(params) != arity:
            raise ParseError(off, {f"{arity} parameter(s) for {name}"}, f"{len(params)}")
        return Gen(name, tuple(params))


def parse_formula(text: str) -> Formula:
    """Parse a formula. Chains like ``a /\\ b /\\ c`` group to the left."""
    p = _Parser(text)
    a = p.formula()
    p.done()
    return a


def parse_arrow(text: str) -> ArrowTerm:
    p = _Parser(text)
    f = p.arrow()
    p.done()
    return f
