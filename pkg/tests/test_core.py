import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from ordered_ramsey.core import (
    BLUE,
    RED,
    EmbeddingWitness,
    FormatError,
    OrderedColoring,
    OrderedGraph,
    OrderedMatching,
    complete_graph,
    contains_ordered,
    find_blue_triangle,
    max_blue_degree,
    pair_count,
    pairs,
    verify_avoidance,
)
from ordered_ramsey.paren import nested_matching, parse_paren
from oracles import all_colorings, brute_embedding, random_coloring


def bipartite_blue(n_left, n):
    return OrderedColoring.from_blue_edges(n, [(i, j) for i in range(1, n_left + 1) for j in range(n_left + 1, n + 1)])


def test_pairs_row_major():
    assert list(pairs(4)) == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    assert pair_count(4) == 6


def test_graph_validation():
    with pytest.raises(ValueError):
        OrderedGraph(3, ((2, 1),))
    with pytest.raises(ValueError):
        OrderedGraph(3, ((1, 4),))
    with pytest.raises(ValueError):
        OrderedMatching(4, ((1, 2), (2, 3)))


def test_graph_text_round_trip():
    g = OrderedGraph(5, ((1, 5), (2, 3)))
    assert OrderedGraph.from_text(g.to_text()) == g
    with pytest.raises(FormatError):
        OrderedGraph.from_text("3\n1 x\n")


def test_hex_layout():
    # pair (1,2) is the most significant bit of the first digit
    c = OrderedColoring.from_blue_edges(4, [(1, 2)])
    assert c.to_hex() == "80"
    c = OrderedColoring.from_blue_edges(4, [(3, 4)])
    assert c.to_hex() == "04"
    assert OrderedColoring.from_hex(4, "04") == c


@pytest.mark.parametrize("n,digits", [(3, "zz"), (3, "ff"), (4, "8"), (3, "1")])
def test_hex_errors(n, digits):
    with pytest.raises(FormatError):
        OrderedColoring.from_hex(n, digits)


def test_hex_error_names_token():
    with pytest.raises(FormatError, match="'g'"):
        OrderedColoring.from_hex(3, "g")


@given(st.integers(0, 9), st.randoms(use_true_random=False))
@settings(max_examples=60, deadline=None)
def test_text_round_trip(n, rng):
    c = random_coloring(n, rng)
    assert OrderedColoring.from_text(c.to_text()) == c
    assert OrderedColoring.from_bits(n, c.to_bits()) == c


def test_red_is_complement():
    c = OrderedColoring.from_blue_edges(4, [(1, 3), (2, 4)])
    assert sorted(c.red_edges() + c.blue_edges()) == list(pairs(4))
    assert c.color(1, 3) == BLUE and c.color(3, 1) == BLUE and c.color(1, 2) == RED


def test_find_blue_triangle_examples():
    assert find_blue_triangle(OrderedColoring.all_blue(3)) == (1, 2, 3)
    assert find_blue_triangle(OrderedColoring.from_blue_edges(3, [(1, 2), (1, 3)])) is None
    assert find_blue_triangle(bipartite_blue(3, 6)) is None


def test_max_blue_degree_examples():
    assert max_blue_degree(OrderedColoring.all_blue(4)) == (1, 3)
    assert max_blue_degree(OrderedColoring.all_red(4)) == (1, 0)
    assert max_blue_degree(OrderedColoring.from_blue_edges(5, [(2, 3), (2, 4), (2, 5)])) == (2, 3)
    c = OrderedColoring.from_blue_edges(5, [(2, 3), (2, 4), (2, 5), (1, 5)])
    assert max_blue_degree(c, into=[5]) == (1, 1)
    assert max_blue_degree(c, among=[3, 4, 5]) == (5, 2)


def test_contains_ordered_examples():
    c = OrderedColoring.from_red_edges(4, [(1, 4), (2, 3)])
    w = contains_ordered(c, RED, nested_matching(2))
    assert w.map == (1, 2, 3, 4)
    assert contains_ordered(c, RED, parse_paren("()()")) is None


def test_contains_rejects_unknown_color():
    with pytest.raises(ValueError):
        contains_ordered(OrderedColoring.all_red(3), "green", complete_graph(2))


PATTERNS = [complete_graph(3), nested_matching(2), parse_paren("()()"), parse_paren("(())()"),
            OrderedGraph(4, ((1, 3), (2, 4))), OrderedGraph(3, ((1, 2), (2, 3))), OrderedGraph(3, ())]


def test_contains_matches_brute_force_exhaustive():
    for n in range(0, 6):
        for c in all_colorings(n):
            for g in PATTERNS:
                for color in (RED, BLUE):
                    w = contains_ordered(c, color, g)
                    ref = brute_embedding(c, color, g)
                    assert (w is None) == (ref is None)
                    if w is not None:
                        assert w.validate(c)
                        assert w.map == ref


def test_contains_matches_brute_force_random():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randint(6, 12)
        c = random_coloring(n, rng)
        for g in PATTERNS + [nested_matching(3), parse_paren("(()())")]:
            for color in (RED, BLUE):
                w = contains_ordered(c, color, g)
                ref = brute_embedding(c, color, g)
                assert (w is None) == (ref is None)
                if w is not None:
                    assert w.validate(c)


def test_witness_validation_catches_bad_maps():
    c = OrderedColoring.all_red(4)
    g = nested_matching(2)
    assert EmbeddingWitness(g, (1, 2, 3, 4), RED).validate(c)
    assert not EmbeddingWitness(g, (1, 2, 3, 4), BLUE).validate(c)
    assert not EmbeddingWitness(g, (2, 1, 3, 4), RED).validate(c)
    assert not EmbeddingWitness(g, (1, 2, 3), RED).validate(c)


def test_blue_neighbourhoods_are_red_cliques():
    for n in range(1, 6):
        for c in all_colorings(n):
            if find_blue_triangle(c) is not None:
                continue
            for v in range(1, n + 1):
                nbrs = [u for u in range(1, n + 1) if u != v and c.is_blue(u, v)]
                assert all(c.is_red(a, b) for a, b in combinations(nbrs, 2))


def test_verify_avoidance():
    c = bipartite_blue(3, 6)
    assert verify_avoidance(c, nested_matching(2), complete_graph(3))
    assert not verify_avoidance(OrderedColoring.all_red(4), nested_matching(2), complete_graph(3))


def test_restrict():
    c = OrderedColoring.from_blue_edges(5, [(2, 4), (1, 5)])
    sub = c.restrict([2, 3, 4])
    assert sub.n == 3 and sub.blue_edges() == [(1, 3)]
