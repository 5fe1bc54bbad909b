import pytest

from ordered_ramsey.core import OrderedColoring, OrderedGraph, complete_graph, verify_avoidance
from ordered_ramsey.paren import nested_matching, parse_paren
from ordered_ramsey.search import (
    ABSENT,
    FOUND,
    TIMEOUT,
    nested_sweep,
    edge_order,
    exact_ramsey,
    find_avoiding_coloring,
    graph_from_token,
    graph_token,
    two_clique_coloring,
    verify_two_clique,
)
from oracles import naive_avoider_exists

K3 = complete_graph(3)
EDGE = OrderedGraph(2, ((1, 2),))


def test_edge_order():
    assert edge_order(4) == [(1, 2), (2, 3), (3, 4), (1, 3), (2, 4), (1, 4)]


def test_token_round_trip():
    for g in (K3, nested_matching(3), OrderedGraph(5), parse_paren("(()())")):
        back = graph_from_token(graph_token(g))
        assert (back.n, back.edges) == (g.n, g.edges)


def test_find_examples():
    out = find_avoiding_coloring(2, EDGE, K3)
    assert out.status == FOUND and out.coloring.blue_edges() == [(1, 2)]
    for n in range(2, 8):
        assert find_avoiding_coloring(n, EDGE, EDGE).status == ABSENT
    out = find_avoiding_coloring(6, nested_matching(2), K3)
    assert out.status == FOUND and verify_avoidance(out.coloring, nested_matching(2), K3)


def test_two_clique_lower_bound():
    for k in range(1, 51):
        assert verify_two_clique(k)
    assert two_clique_coloring(1).blue_edges() == [(1, 2)]
    c = two_clique_coloring(2)
    assert c.n == 6 and len(c.blue_edges()) == 9


SMALL_TARGETS = [
    OrderedGraph(2, ((1, 2),)),
    OrderedGraph(3, ((1, 3),)),
    OrderedGraph(3, ((1, 2),)),
    OrderedGraph(4, ((1, 4), (2, 3))),
    OrderedGraph(4, ((1, 2), (3, 4))),
    OrderedGraph(4, ((1, 3), (2, 4))),
    OrderedGraph(4, ((1, 2),)),
    OrderedGraph(3, ()),
]


def test_search_complete_against_naive():
    blues = [K3, OrderedGraph(3, ((1, 2), (2, 3))), OrderedGraph(3, ((1, 3),)), EDGE]
    for red in SMALL_TARGETS:
        for blue in blues:
            for n in range(1, 6):
                out = find_avoiding_coloring(n, red, blue)
                assert (out.status == FOUND) == naive_avoider_exists(n, red, blue), (red, blue, n)
                if out.status == FOUND:
                    assert verify_avoidance(out.coloring, red, blue)


def test_exact_values():
    res = exact_ramsey(nested_matching(1), K3)
    assert res.value == 3
    res = exact_ramsey(OrderedGraph(3), K3)
    assert res.value == 3
    res = exact_ramsey(nested_matching(2), K3, budget=10 ** 8)
    assert res.exact and 6 < res.value <= 12
    assert res.value == 7
    assert res.witness_below.n == 6
    assert verify_avoidance(res.witness_below, nested_matching(2), K3)


def test_monotone():
    for red in SMALL_TARGETS[:6]:
        res = exact_ramsey(red, K3, n_max=10)
        assert res.exact
        assert find_avoiding_coloring(res.value + 1, red, K3).status == ABSENT


def test_budget_timeout():
    out = find_avoiding_coloring(7, nested_matching(2), K3, budget=100)
    assert out.status == TIMEOUT
    res = exact_ramsey(nested_matching(2), K3, budget=500)
    assert not res.exact and res.value is None
    assert res.lower >= 1


def test_parallel_same_witness():
    serial = find_avoiding_coloring(6, nested_matching(2), K3)
    split = find_avoiding_coloring(6, nested_matching(2), K3, split_depth=4)
    pooled = find_avoiding_coloring(6, nested_matching(2), K3, threads=2)
    assert serial.coloring == split.coloring == pooled.coloring
    assert find_avoiding_coloring(7, nested_matching(2), K3, threads=2).status == ABSENT


def test_resume_reuses_records():
    first = exact_ramsey(nested_matching(2), K3)
    again = exact_ramsey(nested_matching(2), K3, resume=first.records)
    assert again.value == first.value and again.nodes == 0


def test_resume_rejects_bad_witness():
    rec = {"red_target": graph_token(nested_matching(2)), "blue_target": graph_token(K3), "n": 6,
           "outcome": FOUND, "witness_hex": OrderedColoring.all_red(6).to_hex(), "nodes": 0}
    res = exact_ramsey(nested_matching(2), K3, n_start=7, resume=[rec])
    assert res.value == 7 and res.nodes > 0


def test_sweep_small():
    rows = nested_sweep(2, budget=10 ** 7)
    assert [r.result.value for r in rows] == [3, 7]
    for r in rows:
        assert 4 * r.k - 2 < r.result.value <= 6 * r.k


def test_sweep_degrades_to_bracket():
    rows = nested_sweep(3, budget=20_000)
    last = rows[-1].to_json()
    assert last["status"] == "bounded"
    assert last["lower_exclusive"] == 10 and last["upper_inclusive"] == 18


def test_lower_witness_checked():
    with pytest.raises(ValueError):
        exact_ramsey(nested_matching(2), K3, n_start=7, lower_witness=OrderedColoring.all_red(6))
