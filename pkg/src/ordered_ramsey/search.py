"""Exact ordered Ramsey numbers at desk scale.

The search colours the pairs of [n] one at a time, shortest span first, and
abandons a branch as soon as the decided blue edges contain the blue target or
the decided red edges contain the red target.  Because every pair strictly
inside a span is shorter, the red nesting depth of a newly coloured pair is
already final when it is coloured, which makes red NM_k detection exact.
"""

from __future__ import annotations

import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Optional

from ordered_ramsey.core import (
    BLUE,
    RED,
    OrderedColoring,
    OrderedGraph,
    complete_graph,
    contains_ordered,
    find_embedding,
    is_nested_matching,
    pairs,
    verify_avoidance,
)
from ordered_ramsey.paren import nested_matching

FOUND = "found"
ABSENT = "absent"
TIMEOUT = "timeout"

HEARTBEAT = 1 << 20


class BudgetExceeded(Exception):
    pass


def edge_order(n: int) -> list[tuple[int, int]]:
    return sorted(pairs(n), key=lambda e: (e[1] - e[0], e[0]))


def graph_token(g: OrderedGraph) -> str:
    """Compact text form ``n:i-j,i-j``."""
    return f"{g.n}:" + ",".join(f"{i}-{j}" for i, j in g.edges)


def graph_from_token(token: str) -> OrderedGraph:
    n_txt, _, rest = token.partition(":")
    edges = []
    for item in filter(None, rest.split(",")):
        a, _, b = item.partition("-")
        edges.append((int(a), int(b)))
    return OrderedGraph(int(n_txt), tuple(edges))


@dataclass
class SearchOutcome:
    status: str
    n: int
    coloring: Optional[OrderedColoring] = None
    nodes: int = 0


class _Engine:
    def __init__(self, n: int, red_target: OrderedGraph, blue_target: OrderedGraph,
                 budget: Optional[int], progress: Optional[Callable[[int, int], None]] = None):
        self.n = n
        self.red_target = red_target
        self.blue_target = blue_target
        self.budget = budget
        self.progress = progress
        self.order = edge_order(n)
        self.nodes = 0
        self.red_nested = len(red_target.edges) if is_nested_matching(red_target) else 0
        self.blue_triangle = (blue_target.n, blue_target.edges) == (3, complete_graph(3).edges)
        self.red = [0] * (n + 1)
        self.blue = [0] * (n + 1)
        self.red_depth: list[tuple[int, int, int]] = []

    def trivially_forced(self) -> bool:
        """An edgeless target that fits is present in every coloring."""
        return any(not g.edges and g.n <= self.n for g in (self.red_target, self.blue_target))

    # each assignment returns False when it creates a forbidden copy
    def _try_red(self, i: int, j: int) -> bool:
        if self.red_nested:
            depth = 1
            for a, b, d in self.red_depth:
                if i < a and b < j and d + 1 > depth:
                    depth = d + 1
            if depth >= self.red_nested:
                return False
            if depth + 1 >= self.red_nested and self.blue_triangle:
                # a longer pair around (i, j) with a common blue neighbour must be red
                for a in range(1, i):
                    for b in range(j + 1, self.n + 1):
                        if self.blue[a] & self.blue[b]:
                            return False
            self.red_depth.append((i, j, depth))
            self.red[i] |= 1 << j
            self.red[j] |= 1 << i
            return True
        self.red[i] |= 1 << j
        self.red[j] |= 1 << i
        if find_embedding(self.red, self.n, self.red_target, lexmin=False) is not None:
            self._undo_red(i, j)
            return False
        return True

    def _undo_red(self, i: int, j: int) -> None:
        if self.red_nested:
            self.red_depth.pop()
        self.red[i] &= ~(1 << j)
        self.red[j] &= ~(1 << i)

    def _inside_depth(self, a: int, b: int) -> int:
        depth = 0
        for x, y, d in self.red_depth:
            if a < x and y < b and d > depth:
                depth = d
        return depth

    def _try_blue(self, i: int, j: int) -> bool:
        if self.blue_triangle:
            if self.blue[i] & self.blue[j]:
                return False
            if self.red_nested:
                # pairs closing a blue path through i or j are forced red
                k = self.red_nested
                for u, w in ((i, j), (j, i)):
                    m = self.blue[w]
                    while m:
                        low = m & -m
                        m ^= low
                        v = low.bit_length() - 1
                        a, b = (u, v) if u < v else (v, u)
                        if b - a > j - i and self._inside_depth(a, b) + 1 >= k:
                            return False
            self.blue[i] |= 1 << j
            self.blue[j] |= 1 << i
            return True
        self.blue[i] |= 1 << j
        self.blue[j] |= 1 << i
        if find_embedding(self.blue, self.n, self.blue_target, lexmin=False) is not None:
            self._undo_blue(i, j)
            return False
        return True

    def _undo_blue(self, i: int, j: int) -> None:
        self.blue[i] &= ~(1 << j)
        self.blue[j] &= ~(1 << i)

    def _tick(self) -> None:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded
        if self.progress is not None and self.nodes % HEARTBEAT == 0:
            self.progress(self.n, self.nodes)

    def assign(self, idx: int, color: str) -> bool:
        i, j = self.order[idx]
        return self._try_red(i, j) if color == RED else self._try_blue(i, j)

    def unassign(self, idx: int, color: str) -> None:
        i, j = self.order[idx]
        if color == RED:
            self._undo_red(i, j)
        else:
            self._undo_blue(i, j)

    def dfs(self, idx: int) -> bool:
        if idx == len(self.order):
            return True
        for color in (RED, BLUE):
            self._tick()
            if self.assign(idx, color):
                if self.dfs(idx + 1):
                    return True
                self.unassign(idx, color)
        return False

    def coloring(self) -> OrderedColoring:
        return OrderedColoring._trusted(self.n, self.blue)

    def replay(self, prefix: Sequence[str]) -> bool:
        for idx, color in enumerate(prefix):
            if not self.assign(idx, color):
                return False
        return True

    def prefixes(self, depth: int) -> list[tuple[str, ...]]:
        """Surviving colour assignments of the first ``depth`` pairs, in DFS order."""
        depth = min(depth, len(self.order))
        out: list[tuple[str, ...]] = []
        cur: list[str] = []

        def rec(idx: int):
            if idx == depth:
                out.append(tuple(cur))
                return
            for color in (RED, BLUE):
                self._tick()
                if self.assign(idx, color):
                    cur.append(color)
                    rec(idx + 1)
                    cur.pop()
                    self.unassign(idx, color)

        rec(0)
        return out


def _finish(engine: _Engine) -> SearchOutcome:
    c = engine.coloring()
    if not verify_avoidance(c, engine.red_target, engine.blue_target):
        raise AssertionError("search produced a coloring that contains a target")
    return SearchOutcome(FOUND, engine.n, c, engine.nodes)


def _run_subproblem(args) -> SearchOutcome:
    n, red_tok, blue_tok, prefix, budget = args
    engine = _Engine(n, graph_from_token(red_tok), graph_from_token(blue_tok), budget)
    if not engine.replay(prefix):
        return SearchOutcome(ABSENT, n, None, 0)
    try:
        if engine.dfs(len(prefix)):
            return _finish(engine)
    except BudgetExceeded:
        return SearchOutcome(TIMEOUT, n, None, engine.nodes)
    return SearchOutcome(ABSENT, n, None, engine.nodes)


def find_avoiding_coloring(n: int, red_target: OrderedGraph, blue_target: OrderedGraph,
                           budget: Optional[int] = None, threads: int = 1, split_depth: Optional[int] = None,
                           progress: Optional[Callable[[int, int], None]] = None) -> SearchOutcome:
    """A coloring of K_n with no red red_target and no blue blue_target, if any.

    With ``threads > 1`` the first ``split_depth`` pairs are enumerated up front
    and the subtrees are searched in a process pool; the first subtree in
    enumeration order that succeeds supplies the witness, so the coloring
    returned is the same as with one thread.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    engine = _Engine(n, red_target, blue_target, budget, progress)
    if engine.trivially_forced():
        return SearchOutcome(ABSENT, n, None, 0)
    if threads <= 1 and not split_depth:
        try:
            if engine.dfs(0):
                return _finish(engine)
        except BudgetExceeded:
            return SearchOutcome(TIMEOUT, n, None, engine.nodes)
        return SearchOutcome(ABSENT, n, None, engine.nodes)

    depth = split_depth if split_depth is not None else max(1, (4 * threads - 1).bit_length())
    try:
        prefixes = engine.prefixes(depth)
    except BudgetExceeded:
        return SearchOutcome(TIMEOUT, n, None, engine.nodes)
    jobs = [(n, graph_token(red_target), graph_token(blue_target), p, budget) for p in prefixes]
    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_subproblem, jobs))
    else:
        results = [_run_subproblem(j) for j in jobs]
    total = engine.nodes
    for res in results:
        total += res.nodes
        if res.status == TIMEOUT or (budget is not None and total > budget):
            return SearchOutcome(TIMEOUT, n, None, total)
        if res.status == FOUND:
            return SearchOutcome(FOUND, n, res.coloring, total)
    return SearchOutcome(ABSENT, n, None, total)


# -- exact values ----------------------------------------------------------------------------

@dataclass
class RamseyResult:
    red_target: OrderedGraph
    blue_target: OrderedGraph
    value: Optional[int]
    lower: int                      # value > lower
    upper: Optional[int]            # value <= upper, None when unknown
    witness_below: Optional[OrderedColoring]
    nodes: int
    seconds: float
    records: list[dict] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return self.value is not None

    def to_json(self) -> dict:
        return {
            "red_target": graph_token(self.red_target),
            "blue_target": graph_token(self.blue_target),
            "status": "exact" if self.exact else "bounded",
            "value": self.value,
            "lower_exclusive": self.lower,
            "upper_inclusive": self.upper,
            "witness_n": None if self.witness_below is None else self.witness_below.n,
            "witness_hex": None if self.witness_below is None else self.witness_below.to_hex(),
            "nodes": self.nodes,
        }


def _record(red: OrderedGraph, blue: OrderedGraph, out: SearchOutcome) -> dict:
    return {"red_target": graph_token(red), "blue_target": graph_token(blue), "n": out.n,
            "outcome": out.status, "witness_hex": out.coloring.to_hex() if out.coloring else None,
            "nodes": out.nodes, "seed": 0}


def _resumed(records: Sequence[dict], red: OrderedGraph, blue: OrderedGraph) -> dict[int, SearchOutcome]:
    out = {}
    rt, bt = graph_token(red), graph_token(blue)
    for rec in records:
        if rec.get("red_target") != rt or rec.get("blue_target") != bt:
            continue
        if rec.get("outcome") == FOUND and rec.get("witness_hex") is not None:
            c = OrderedColoring.from_hex(rec["n"], rec["witness_hex"])
            if verify_avoidance(c, red, blue):
                out[rec["n"]] = SearchOutcome(FOUND, rec["n"], c, rec.get("nodes", 0))
        elif rec.get("outcome") == ABSENT:
            out[rec["n"]] = SearchOutcome(ABSENT, rec["n"], None, rec.get("nodes", 0))
    return out


def exact_ramsey(red_target: OrderedGraph, blue_target: OrderedGraph, n_start: int = 1, n_max: int = 64,
                 budget: Optional[int] = None, threads: int = 1, lower_witness: Optional[OrderedColoring] = None,
                 known_upper: Optional[int] = None, resume: Sequence[dict] = (),
                 progress: Optional[Callable[[int, int], None]] = None) -> RamseyResult:
    """Least n in [n_start, n_max] with no avoiding coloring, searching upward.

    ``budget`` caps the total node count across all n.  A valid
    ``lower_witness`` on n_start - 1 vertices certifies the lower end;
    otherwise n_start - 1 is searched too.
    """
    if n_start > n_max:
        raise ValueError("n_start must not exceed n_max")
    n_start = max(n_start, 1)
    t0 = time.perf_counter()
    done = _resumed(resume, red_target, blue_target)
    records: list[dict] = []
    spent = 0

    def search(n: int) -> SearchOutcome:
        nonlocal spent
        if n in done:
            out = done[n]
        else:
            left = None if budget is None else max(budget - spent, 0)
            out = find_avoiding_coloring(n, red_target, blue_target, left, threads, progress=progress)
            spent += out.nodes
        records.append(_record(red_target, blue_target, out))
        return out

    def result(value, lower, upper, witness):
        return RamseyResult(red_target, blue_target, value, lower, upper, witness, spent,
                            time.perf_counter() - t0, records)

    witness = None
    if lower_witness is not None:
        if lower_witness.n != n_start - 1 or not verify_avoidance(lower_witness, red_target, blue_target):
            raise ValueError("lower_witness does not avoid both targets on n_start - 1 vertices")
        witness = lower_witness
    elif n_start > 1:
        below = search(n_start - 1)
        if below.status == ABSENT:
            return result(None, 0, n_start - 1, None)
        if below.status == TIMEOUT:
            return result(None, 0, known_upper, None)
        witness = below.coloring
    else:
        witness = OrderedColoring.all_red(0)
    for n in range(n_start, n_max + 1):
        out = search(n)
        if out.status == ABSENT:
            return result(n, n - 1, n, witness)
        if out.status == TIMEOUT:
            return result(None, n - 1, known_upper, witness)
        witness = out.coloring
    return result(None, n_max, known_upper, witness)


def two_clique_coloring(k: int) -> OrderedColoring:
    """Two red cliques {1..2k-1} and {2k..4k-2}, every pair between them blue."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    n = 4 * k - 2
    return OrderedColoring.from_blue_edges(n, ((i, j) for i in range(1, 2 * k) for j in range(2 * k, n + 1)))


def max_red_span(c: OrderedColoring) -> int:
    return max((j - i for i, j in c.red_edges()), default=0)


def verify_two_clique(k: int) -> bool:
    """No blue triangle, no red NM_k: by containment search and by the span argument."""
    c = two_clique_coloring(k)
    by_search = verify_avoidance(c, nested_matching(k), complete_graph(3))
    # the outer pair of NM_k spans at least 2k - 1
    by_span = contains_ordered(c, BLUE, complete_graph(3)) is None and max_red_span(c) <= 2 * k - 2
    return by_search and by_span


@dataclass
class SweepRow:
    k: int
    result: RamseyResult

    def to_json(self) -> dict:
        r = self.result
        return {"k": self.k, "expected": 4 * self.k - 1, "status": "exact" if r.exact else "bounded",
                "value": r.value, "lower_exclusive": r.lower, "upper_inclusive": r.upper, "nodes": r.nodes,
                "witness_n": None if r.witness_below is None else r.witness_below.n,
                "witness_hex": None if r.witness_below is None else r.witness_below.to_hex()}


def nested_sweep(k_max: int, budget: Optional[int] = None, threads: int = 1,
                     progress: Optional[Callable[[int, int], None]] = None) -> list[SweepRow]:
    """r_<(NM_k, K3) for k = 1..k_max, starting at 4k-1 and capped at 6k."""
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    rows = []
    for k in range(1, k_max + 1):
        res = exact_ramsey(nested_matching(k), complete_graph(3), n_start=4 * k - 1, n_max=6 * k,
                           budget=budget, threads=threads, lower_witness=two_clique_coloring(k),
                           known_upper=6 * k, progress=progress)
        rows.append(SweepRow(k, res))
    return rows
