"""Random generators and independent oracles shared by the test modules."""

import math
import random
from itertools import combinations

from coherent.graphmodel import LeafRef, LinkGraph
from coherent.syntax import (
    Alpha, AlphaInv, AlphaOr, AlphaOrInv, Bin, Comp, Conn, D, Eps, Eta, Id,
    K1, K2, Lambda, LambdaInv, Letter, Rho, RhoInv, Sigma, T, Tensor, Unit, W,
    infer_type, leaves, letter_count,
)

CONNS = (Conn.AND, Conn.OR, Conn.IMP)


def random_formula(rng: random.Random, n_leaves: int, conns=CONNS, letters="pqr",
                   unit_prob: float = 0.0):
    if n_leaves == 1:
        if unit_prob and rng.random() < unit_prob:
            return T
        return Letter(rng.choice(letters))
    k = rng.randint(1, n_leaves - 1)
    return Bin(rng.choice(conns),
               random_formula(rng, k, conns, letters, unit_prob),
               random_formula(rng, n_leaves - k, conns, letters, unit_prob))


def distinct_letters(n: int) -> list:
    return [Letter(chr(ord("a") + i)) for i in range(n)]


def all_shapes(atoms: list, conns=(Conn.AND,)):
    """Every binary tree over the given leaf list, with every connective choice."""
    if len(atoms) == 1:
        yield atoms[0]
        return
    for k in range(1, len(atoms)):
        for left in all_shapes(atoms[:k], conns):
            for right in all_shapes(atoms[k:], conns):
                for c in conns:
                    yield Bin(c, left, right)


# ------------------------------------------------------------------- arrows


def _candidates(a, gens):
    """Generators (as thunks) whose source is exactly ``a``."""
    out = []
    add = lambda kind, make: kind in gens and out.append(make)  # noqa: E731
    add("id", lambda rng: Id(a))
    add("w", lambda rng: W(a))
    add("lambda_inv", lambda rng: LambdaInv(a))
    add("rho_inv", lambda rng: RhoInv(a))
    add("eta", lambda rng: Eta(random_formula(rng, 1), a))
    if isinstance(a, Bin) and a.conn is Conn.AND:
        x, y = a.left, a.right
        add("sigma", lambda rng: Sigma(x, y))
        add("k1", lambda rng: K1(x, y))
        add("k2", lambda rng: K2(x, y))
        if isinstance(x, Bin) and x.conn is Conn.AND:
            add("alpha", lambda rng: Alpha(x.left, x.right, y))
        if isinstance(y, Bin) and y.conn is Conn.AND:
            add("alpha_inv", lambda rng: AlphaInv(x, y.left, y.right))
        if isinstance(y, Bin) and y.conn is Conn.OR:
            add("d", lambda rng: D(x, y.left, y.right))
        if isinstance(y, Bin) and y.conn is Conn.IMP and y.left == x:
            add("eps", lambda rng: Eps(x, y.right))
        if isinstance(x, Unit):
            add("lambda", lambda rng: Lambda(y))
        if isinstance(y, Unit):
            add("rho", lambda rng: Rho(x))
    if isinstance(a, Bin) and a.conn is Conn.OR:
        x, y = a.left, a.right
        if isinstance(x, Bin) and x.conn is Conn.OR:
            add("alpha_or", lambda rng: AlphaOr(x.left, x.right, y))
        if isinstance(y, Bin) and y.conn is Conn.OR:
            add("alpha_or_inv", lambda rng: AlphaOrInv(x, y.left, y.right))
    return out


ALL_GENS = frozenset({"id", "alpha", "alpha_inv", "alpha_or", "alpha_or_inv", "lambda",
                      "lambda_inv", "rho", "rho_inv", "sigma", "w", "k1", "k2", "eta",
                      "eps", "d"})


def random_arrow(rng: random.Random, source, depth: int = 3, gens=ALL_GENS,
                 tensors=(Conn.AND, Conn.OR), max_leaves: int = 12):
    """A well-typed arrow term with the given source.

    Only generators in ``gens`` and tensors in ``tensors`` are used; growth
    of the target is capped by ``max_leaves`` so fan-out stays small.
    """
    roll = rng.random()
    if depth > 0 and roll < 0.35:
        f = random_arrow(rng, source, depth - 1, gens, tensors, max_leaves)
        g = random_arrow(rng, infer_type(f)[1], depth - 1, gens, tensors, max_leaves)
        return Comp(g, f)
    if (depth > 0 and roll < 0.65 and isinstance(source, Bin)
            and source.conn in tensors):
        return Tensor(source.conn,
                      random_arrow(rng, source.left, depth - 1, gens, tensors, max_leaves),
                      random_arrow(rng, source.right, depth - 1, gens, tensors, max_leaves))
    if letter_count(source) * 2 + 1 > max_leaves:
        gens = gens - {"w", "eta", "lambda_inv", "rho_inv"} | {"id"}
    return rng.choice(_candidates(source, gens))(rng)


# ------------------------------------------------------------------- graphs


def _leaf_names(a):
    return [name for _, name in leaves(a)]


def random_rel_graph(rng: random.Random, source, target, p: float = 0.5) -> LinkGraph:
    s, t = _leaf_names(source), _leaf_names(target)
    links = {(LeafRef("s", i + 1), LeafRef("t", j + 1))
             for i, x in enumerate(s) for j, y in enumerate(t) if x == y and rng.random() < p}
    return LinkGraph(source, target, frozenset(links))


def random_matching_graph(rng: random.Random, source, target, p: float = 0.8) -> LinkGraph:
    """A partial matching of letter-compatible leaves of source and target,
    across or within sides (caps and cups allowed)."""
    verts = [(LeafRef("s", i + 1), x) for i, x in enumerate(_leaf_names(source))]
    verts += [(LeafRef("t", j + 1), y) for j, y in enumerate(_leaf_names(target))]
    rng.shuffle(verts)
    by_letter = {}
    for v, x in verts:
        by_letter.setdefault(x, []).append(v)
    links = set()
    for vs in by_letter.values():
        for i in range(0, len(vs) - 1, 2):
            if rng.random() < p:
                links.add(tuple(sorted((vs[i], vs[i + 1]))))
    return LinkGraph(source, target, frozenset(links))


def random_any_graph(rng: random.Random, source, target, p: float = 0.3) -> LinkGraph:
    """Any letter-compatible link set, fan-out, caps and cups included."""
    verts = [(LeafRef("s", i + 1), x) for i, x in enumerate(_leaf_names(source))]
    verts += [(LeafRef("t", j + 1), y) for j, y in enumerate(_leaf_names(target))]
    links = {tuple(sorted((u, v))) for (u, x), (v, y) in combinations(verts, 2)
             if x == y and rng.random() < p}
    return LinkGraph(source, target, frozenset(links))


# ------------------------------------------------------------------ oracles


def compose_oracle(f: LinkGraph, g: LinkGraph) -> LinkGraph:
    """Path-tracing composition by Warshall closure of a state graph.

    A state ``(v, c)`` means "standing at v, arrived by an edge of colour
    c". From a middle vertex one may continue only by the other colour.
    """
    def vert(outer, x):
        return ("m", x.index) if x.side == ("t" if outer == "s" else "s") else (outer, x.index)

    edges = [(vert("s", x), vert("s", y), 0) for x, y in f.links]
    edges += [(vert("t", x), vert("t", y), 1) for x, y in g.links]
    arcs = [(u, v, c) for a_, b_, c in edges for u, v in ((a_, b_), (b_, a_))]
    states = sorted({(v, c) for _, v, c in arcs})
    idx = {st: i for i, st in enumerate(states)}
    n = len(states)
    r = [[False] * n for _ in range(n)]
    for u, v, c in arcs:
        if u[0] != "m":
            continue
        for c_in in (0, 1):
            if c_in != c and (u, c_in) in idx:
                r[idx[(u, c_in)]][idx[(v, c)]] = True
    for k in range(n):
        rk = r[k]
        for i in range(n):
            if r[i][k]:
                ri = r[i]
                for j in range(n):
                    if rk[j]:
                        ri[j] = True
    links = set()
    for u, v, c in arcs:
        if u[0] == "m":
            continue
        i = idx[(v, c)]
        ends = [v] + [states[j][0] for j in range(n) if r[i][j]]
        for y in ends:
            if y[0] != "m" and y != u:
                links.add(tuple(sorted((LeafRef(*u), LeafRef(*y)))))
    return LinkGraph(f.source, g.target, frozenset(links))


def relation_compose(r: set, s: set) -> set:
    """Brute-force relational composition: {(i, k) | exists j, (i, j) in r, (j, k) in s}."""
    mids = {j for _, j in r} | {j for j, _ in s}
    return {(i, k) for i in {i for i, _ in r} for k in {k for _, k in s}
            if any((i, j) in r and (j, k) in s for j in mids)}


def catalan_closed(k: int) -> int:
    return math.comb(2 * k, k) // (k + 1)


def dissections(m: int, j: int) -> int:
    """Kirkman-Cayley count of dissections of a convex m-gon by j diagonals."""
    return math.comb(m - 3, j) * math.comb(m + j - 1, j) // (j + 1)
