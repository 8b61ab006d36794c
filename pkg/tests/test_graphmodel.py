import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from coherent.graphmodel import (
    LeafRef, LinkGraph, as_relation, compose, evaluate, format_links, from_relation,
    generator_graph, graph_to_dot, graph_to_json, graphs_equal, identity_graph, is_identity,
    is_rel, links_from_text, tensor,
)
from coherent.syntax import (
    Alpha, AlphaOr, And, Comp, Conn, D, Eps, Eta, Id, Imp, K1, K2, Lambda, Letter, Or,
    Rho, Sigma, T, Tensor, TypeMismatch, W, infer_type, leaves, parse_formula,
)

from helpers import (
    compose_oracle, random_any_graph, random_arrow, random_formula, random_matching_graph,
    random_rel_graph, relation_compose,
)

p, q, r = Letter("p"), Letter("q"), Letter("r")
L = links_from_text


# ------------------------------------------------------- generator graphs

@pytest.mark.parametrize("gen, links", [
    (Eta(p, q), "t1-t2, s1-t3"),
    (W(Imp(p, And(p, q))), "s1-t1, s1-t4, s2-t2, s2-t5, s3-t3, s3-t6"),
    (Id(T), ""),
    (Eps(p, q), "s1-s2, s3-t1"),
    (K1(r, q), "s1-t1"),
    (K2(r, q), "s2-t1"),
    (Sigma(And(p, q), r), "s1-t2, s2-t3, s3-t1"),
    (K1(r, And(p, Imp(p, q))), "s1-t1"),
])
def test_generator_graph(gen, links):
    assert generator_graph(gen).links == L(links)


@pytest.mark.parametrize("gen", [
    Alpha(p, q, r), AlphaOr(p, q, r), Lambda(And(p, q)), Rho(p), D(p, q, r), Id(And(p, q)),
])
def test_order_preserving_generators_give_identity_linkings(gen):
    assert is_identity(generator_graph(gen))


def test_generator_graph_rejects_composites():
    with pytest.raises(TypeError):
        generator_graph(Comp(Id(p), Id(p)))


# ------------------------------------------------------------ composition

def test_composite_examples():
    eta = Eta(p, q)
    assert evaluate(Comp(W(Imp(p, And(p, q))), eta)).links == L(
        "s1-t3, s1-t6, t1-t2, t1-t5, t2-t4, t4-t5")
    assert evaluate(Tensor(Conn.AND, eta, eta)).links == L("s1-t3, s2-t6, t1-t2, t4-t5")
    assert evaluate(Comp(Tensor(Conn.AND, eta, eta), W(q))).links == L(
        "s1-t3, s1-t6, t1-t2, t4-t5")
    assert evaluate(Comp(K1(r, q), Tensor(Conn.AND, Id(r), Eps(p, q)))).links == L("s1-t1, s2-s3")


def test_compose_requires_matching_middle():
    with pytest.raises(TypeMismatch):
        compose(identity_graph(p), identity_graph(q))


def test_closed_loops_are_discarded():
    # a cap then a cup on the same two leaves closes a loop; nothing survives
    cap = LinkGraph(T, And(p, p), L("t1-t2"))
    cup = LinkGraph(And(p, p), T, L("s1-s2"))
    assert compose(cap, cup).links == frozenset()


def test_alternation_blocks_fan_out_shortcuts():
    # w then its mirror relation: the two copies must not link s1 to itself
    w = generator_graph(W(p))
    merge = LinkGraph(And(p, p), p, L("s1-t1, s2-t1"))
    assert compose(w, merge).links == L("s1-t1")


def test_associativity_fails_for_unrestricted_link_sets():
    """Self-pairs dropped in the inner composite cannot be recovered."""
    pp, ppa, ppo = Imp(p, p), And(p, p), Or(p, p)
    f = LinkGraph(pp, ppa, L("t1-t2"))
    g = LinkGraph(ppa, p, L("s1-t1, s2-t1"))
    h = LinkGraph(p, ppo, L("s1-t1, s1-t2"))
    assert compose(compose(f, g), h).links == frozenset()
    assert compose(f, compose(g, h)).links == L("t1-t2")


def test_compose_agrees_with_oracle_on_unrestricted_graphs():
    rng = random.Random(21)
    for _ in range(1000):
        a, b, c = (random_formula(rng, rng.randint(1, 4), letters="pq") for _ in range(3))
        f, g = random_any_graph(rng, a, b), random_any_graph(rng, b, c)
        assert compose(f, g) == compose_oracle(f, g)


def test_compose_associative_on_matchings_relations_and_terms():
    rng = random.Random(22)
    for i in range(600):
        fs = [random_formula(rng, rng.randint(1, 4), letters="pq") for _ in range(4)]
        make = (random_matching_graph, random_rel_graph)[i % 2]
        f, g, h = (make(rng, fs[j], fs[j + 1]) for j in range(3))
        assert compose(compose(f, g), h) == compose(f, compose(g, h))


def test_letter_compatibility_preserved():
    rng = random.Random(23)
    for _ in range(400):
        src = random_formula(rng, rng.randint(1, 4))
        g = evaluate(random_arrow(rng, src, 3))
        names = {("s", i): x for i, x in leaves(g.source)}
        names.update({("t", i): x for i, x in leaves(g.target)})
        assert all(names[(x.side, x.index)] == names[(y.side, y.index)] for x, y in g.links)


# ----------------------------------------------------------------- tensor

def test_tensor_shifts_second_factor():
    g = tensor(generator_graph(Eta(p, q)), generator_graph(K1(r, q)), Conn.OR)
    assert g.source == Or(q, And(r, q))
    assert g.links == L("t1-t2, s1-t3, s2-t4")


def test_functoriality_on_random_terms():
    rng = random.Random(24)
    for _ in range(500):
        src = random_formula(rng, rng.randint(1, 4))
        f = random_arrow(rng, src, 3)
        g = random_arrow(rng, infer_type(f)[1], 3)
        assert evaluate(Comp(g, f)) == compose(evaluate(f), evaluate(g))
        s, t = infer_type(f)
        assert (evaluate(f).source, evaluate(f).target) == (s, t)


def test_identity_laws():
    rng = random.Random(25)
    for _ in range(500):
        a, b = (random_formula(rng, rng.randint(1, 4), letters="pq") for _ in range(2))
        f = random_any_graph(rng, a, b)
        assert compose(identity_graph(a), f) == f == compose(f, identity_graph(b))
        assert compose(generator_graph(Id(a)), f) == f


# ------------------------------------------------------------------ Rel

def test_rel_closure_and_relational_composition():
    rng = random.Random(26)
    for _ in range(500):
        a, b, c = (random_formula(rng, rng.randint(1, 5), letters="pq") for _ in range(3))
        f, g = random_rel_graph(rng, a, b), random_rel_graph(rng, b, c)
        assert is_rel(f) and is_rel(g)
        fg = compose(f, g)
        assert is_rel(fg)
        assert as_relation(fg) == relation_compose(as_relation(f), as_relation(g))


def test_from_relation_round_trip():
    a, b = parse_formula("p /\\ q"), parse_formula("q /\\ p")
    g = from_relation(a, b, {(1, 2), (2, 1)})
    assert g == generator_graph(Sigma(p, q))
    assert as_relation(g) == {(1, 2), (2, 1)}
    assert not is_rel(generator_graph(Eta(p, q)))


# ----------------------------------------------------------- validation

@pytest.mark.parametrize("links", ["s1-t2", "s3-t1", "s1-s1", "s1-t1, s2-t1"])
def test_link_graph_validation(links):
    with pytest.raises(ValueError):
        LinkGraph(And(p, q), And(p, r), L(links) if links != "s1-s1" else
                  frozenset({(LeafRef("s", 1), LeafRef("s", 1))}))


def test_link_order_is_normalized():
    g1 = LinkGraph(p, p, frozenset({(LeafRef("t", 1), LeafRef("s", 1))}))
    assert g1 == identity_graph(p)


# -------------------------------------------------------------- exports

def test_json_export_is_sorted_and_stable():
    g = evaluate(Comp(W(Imp(p, And(p, q))), Eta(p, q)))
    data = graph_to_json(g)
    assert data["source"] == "q" and data["target"] == "(p -> (p /\\ q)) /\\ (p -> (p /\\ q))"
    pairs = [(x["side"], x["index"], y["side"], y["index"]) for x, y in data["links"]]
    assert pairs == sorted(pairs)
    assert json.dumps(data, sort_keys=True) == json.dumps(graph_to_json(g), sort_keys=True)


def test_dot_export():
    dot = graph_to_dot(generator_graph(Eta(p, q)))
    assert dot.startswith("graph G {")
    assert "rank=same" in dot
    assert "s1 -- t3" in dot and "t1 -- t2" in dot
    assert 's1 [label="s1: q"]' in dot


def test_format_links():
    assert format_links(generator_graph(Eta(p, q))) == "s1-t3, t1-t2"
    assert format_links(identity_graph(T)) == ""


@given(st.integers(0, 2**31))
@settings(max_examples=100, deadline=None)
def test_graphs_equal_is_reflexive(seed):
    rng = random.Random(seed)
    f = random_arrow(rng, random_formula(rng, rng.randint(1, 4)), 3)
    assert graphs_equal(evaluate(f), evaluate(f))
