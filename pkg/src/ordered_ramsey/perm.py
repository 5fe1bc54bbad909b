"""Permutations of matchings with interval chromatic number 2, exact patterns,
ordered intersections and the shifted-intersection statistics.

Permutations are plain tuples of values (one-line notation, 1-based values).
``shift(p, h)`` is a value shift, not a cyclic one.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from itertools import combinations, permutations
from typing import Optional

import numpy as np

from ordered_ramsey.core import (
    RED,
    OrderedColoring,
    OrderedGraph,
    OrderedMatching,
    find_blue_triangle,
)


class NotBipartiteOrdered(ValueError):
    """Matching with an edge that does not cross the midpoint."""


def check_permutation(p: Sequence[int]) -> tuple[int, ...]:
    p = tuple(int(x) for x in p)
    if sorted(p) != list(range(1, len(p) + 1)):
        raise ValueError(f"{p} is not a permutation of 1..{len(p)}")
    return p


def shift(seq: Sequence[int], h: int) -> tuple[int, ...]:
    return tuple(x + h for x in seq)


def parse_perm(text: str) -> tuple[int, ...]:
    """Comma separated values, e.g. ``3,5,6,1,2,4``."""
    text = text.strip()
    if not text:
        return ()
    out = []
    for tok in text.split(","):
        try:
            out.append(int(tok))
        except ValueError:
            raise ValueError(f"bad sequence entry {tok.strip()!r}") from None
    return tuple(out)


def format_perm(p: Sequence[int]) -> str:
    return ",".join(str(x) for x in p)


# -- matchings <-> permutations --------------------------------------------------

def matching_to_perm(m: OrderedMatching) -> tuple[int, ...]:
    if not m.is_perfect or m.n % 2:
        raise NotBipartiteOrdered("matching must be perfect on an even number of vertices")
    half = m.n // 2
    out = [0] * half
    for i, j in m.edges:
        if not (i <= half < j):
            raise NotBipartiteOrdered(f"edge {(i, j)} lies on one side of the midpoint")
        out[i - 1] = j - half
    return tuple(out)


def perm_to_matching(p: Sequence[int]) -> OrderedMatching:
    p = check_permutation(p)
    n = len(p)
    return OrderedMatching(2 * n, tuple((i, n + v) for i, v in enumerate(p, start=1)))


def interval_chromatic_number(g: OrderedGraph) -> int:
    """Fewest consecutive independent intervals covering [n]; greedy is optimal."""
    if g.n == 0:
        return 1
    back = [0] * (g.n + 1)     # largest earlier neighbour
    for i, j in g.edges:
        back[j] = max(back[j], i)
    count, start = 1, 1
    for v in range(1, g.n + 1):
        if back[v] >= start:
            count += 1
            start = v
    return count


# -- exact patterns and ordered intersection --------------------------------------

def contains_exact_pattern(p: Sequence[int], rho: Sequence[int]) -> bool:
    it = iter(p)
    return all(any(x == y for x in it) for y in rho)


def _distinct(seq: Sequence[int], name: str) -> None:
    if len(set(seq)) != len(seq):
        raise ValueError(f"sequence {name} has repeated values")


def lis_length(seq: Iterable[int]) -> int:
    """Longest strictly increasing subsequence by patience sorting."""
    tails: list[int] = []
    for x in seq:
        pos = bisect_left(tails, x)
        if pos == len(tails):
            tails.append(x)
        else:
            tails[pos] = x
    return len(tails)


def ordered_intersection(a: Sequence[int], b: Sequence[int]) -> int:
    """Length of the longest common subsequence of two repetition-free sequences."""
    _distinct(a, "a")
    _distinct(b, "b")
    where = {v: idx for idx, v in enumerate(b)}
    return lis_length(where[v] for v in a if v in where)


def lcs_length_dp(a: Sequence[int], b: Sequence[int]) -> int:
    """Quadratic LCS, one vectorised row per element of ``a``."""
    b_arr = np.asarray(b, dtype=np.int64)
    prev = np.zeros(len(b) + 1, dtype=np.int64)
    for x in a:
        cand = prev.copy()
        match = b_arr == x
        cand[1:] = np.maximum(cand[1:], np.where(match, prev[:-1] + 1, 0))
        prev = np.maximum.accumulate(cand)
    return int(prev[-1])


def shift_intersection(p: Sequence[int], h: int) -> int:
    """Int(p, p + h) for a permutation p."""
    return ordered_intersection(p, shift(p, h))


# -- compatible orderings --------------------------------------------------------------

def orderings_compatible(rho: Sequence[int], h: int) -> bool:
    """Some arrangement contains both rho and rho + h as subsequences.

    Both sequences impose a chain on the union of their values; the two chains
    are simultaneously realisable iff their union has no cycle.
    """
    ts = TopologicalSorter()
    for seq in (tuple(rho), shift(rho, h)):
        for x in seq:
            ts.add(x)
        for x, y in zip(seq, seq[1:]):
            ts.add(y, x)
    try:
        ts.prepare()
    except CycleError:
        return False
    return True


@dataclass(frozen=True)
class CompatibleCount:
    count: int
    k: int
    t: int

    @property
    def bound(self) -> int:
        """2^(2k-t) * k^(k-t), the counting bound on compatible orderings."""
        return 2 ** (2 * self.k - self.t) * self.k ** (self.k - self.t)


def count_compatible_orderings(u: Iterable[int], h: int, limit: int = 8) -> CompatibleCount:
    values = sorted(set(u))
    k = len(values)
    if k > limit:
        raise ValueError(f"|U| = {k} exceeds the exhaustive limit {limit}")
    if h < 1:
        raise ValueError("shift must be a positive integer")
    t = len(set(values) & {x + h for x in values})
    count = sum(1 for rho in permutations(values) if orderings_compatible(rho, h))
    return CompatibleCount(count, k, t)


# -- Monte Carlo ------------------------------------------------------------------------

def sample_permutation(n: int, seed: int) -> np.ndarray:
    """Uniform permutation of 1..n from a PCG64 stream seeded with ``seed`` (Fisher-Yates)."""
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.permutation(n) + 1


def shift_intersection_fast(p: np.ndarray, h: int) -> int:
    """Int(p, p + h): common values are h+1..n; relabel them by position in p + h."""
    n = len(p)
    if h >= n:
        return 0
    inv = np.empty(n + 1, dtype=np.int64)
    inv[p] = np.arange(n)
    # value v of p (v > h) sits in p + h at the index where p holds v - h
    seq = inv[p[p > h] - h]
    return lis_length(seq.tolist())


def ordint_log_bound(n: int, alpha: float) -> float:
    """Natural log of (e^5 n^(-3 alpha / 2))^(n^(2/3 + alpha))."""
    return n ** (2.0 / 3.0 + alpha) * (5.0 - 1.5 * alpha * math.log(n))


def _trial(args: tuple[int, int, int]) -> int:
    n, h, sub_seed = args
    return shift_intersection_fast(sample_permutation(n, sub_seed), h)


@dataclass
class ShiftReport:
    n: int
    h: int
    seed: int
    values: list[int]
    alphas: list[float] = field(default_factory=list)

    def cdf(self) -> list[tuple[int, float]]:
        total = len(self.values)
        out, running = [], 0
        counts: dict[int, int] = {}
        for v in self.values:
            counts[v] = counts.get(v, 0) + 1
        for v in sorted(counts):
            running += counts[v]
            out.append((v, running / total))
        return out

    def distribution(self) -> dict[int, float]:
        total = len(self.values)
        counts: dict[int, int] = {}
        for v in self.values:
            counts[v] = counts.get(v, 0) + 1
        return {v: counts[v] / total for v in sorted(counts)}

    def thresholds(self) -> list[dict]:
        out = []
        for a in self.alphas:
            thr = self.n ** (2.0 / 3.0 + a)
            log_b = ordint_log_bound(self.n, a)
            out.append({
                "alpha": a,
                "threshold": thr,
                "exceedances": sum(1 for v in self.values if v >= thr),
                "log_bound": log_b,
                "log10_bound": log_b / math.log(10),
                "bound": math.exp(log_b) if log_b < 700 else math.inf,
            })
        return out

    def to_json(self) -> dict:
        vals = self.values
        return {
            "n": self.n, "h": self.h, "seed": self.seed, "trials": len(vals),
            "mean": sum(vals) / len(vals), "min": min(vals), "max": max(vals),
            "cdf": [[v, p] for v, p in self.cdf()],
            "bounds": self.thresholds(),
        }

    def to_csv(self) -> str:
        rows = ["n,h,trial,Int"] + [f"{self.n},{self.h},{t},{v}" for t, v in enumerate(self.values)]
        return "\n".join(rows) + "\n"


def mc_shift_intersection(n: int, h: int, trials: int, seed: int, alphas: Sequence[float] = (),
                          threads: int = 1) -> ShiftReport:
    """Int(p, p + h) over seeded uniform permutations; trial t uses seed XOR t."""
    if trials < 1:
        raise ValueError("trials must be positive")
    if n < 2:
        raise ValueError("n must be at least 2")
    jobs = [(n, h, seed ^ t) for t in range(trials)]
    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(_trial, jobs, chunksize=max(1, trials // (4 * threads))))
    else:
        values = [_trial(j) for j in jobs]
    return ShiftReport(n, h, seed, values, list(alphas))


def exhaustive_shift_distribution(n: int, h: int) -> dict[int, float]:
    """Distribution of Int(p, p + h) over all of S_n."""
    counts: dict[int, int] = {}
    total = 0
    for p in permutations(range(1, n + 1)):
        v = shift_intersection(p, h)
        counts[v] = counts.get(v, 0) + 1
        total += 1
    return {v: counts[v] / total for v in sorted(counts)}


# -- parameters for random interval-chromatic-2 matchings ----------------------------

@dataclass(frozen=True)
class RandomMatchingParameters:
    m: int
    alpha_int: float      # exponent slack in the intersection bound, 4 / ln m
    int_threshold: float  # m^(2/3 + 4/ln m) = e^4 m^(2/3)
    eps: float
    alpha: float
    beta: float
    c: float
    host: float           # c * m^(24/13)

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _host_conditions(n: float, m: int) -> bool:
    lm = math.log(m)
    big = n ** (13.0 / 24.0 - 1.0 / (2.0 * lm))
    small = n ** (1.0 / 12.0 - 1.0 / lm)
    return big / 4.0 - small / 2.0 >= 2 * m and 2 * big >= 2 * m


def rmatching_parameters(m: int, c: Optional[float] = None) -> RandomMatchingParameters:
    """Parameters feeding the three-structure argument for a random matching on 2m vertices.

    Without ``c``, the smallest constant (to 1e-6 relative) meeting both host
    size conditions is found by doubling and bisection.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    lm = math.log(m)
    eps = 1.0 / 3.0 - 4.0 / lm
    ab = 1.0 / 24.0 - 1.0 / (2.0 * lm)
    expo = 24.0 / 13.0

    def ok(cc: float) -> bool:
        return _host_conditions(cc * m ** expo, m)

    if c is None:
        hi = 1.0
        while not ok(hi):
            hi *= 2.0
            if hi > 1e300:
                raise ValueError("no finite constant satisfies the host conditions")
        lo = hi / 2.0 if hi > 1.0 else 0.0
        while hi - lo > 1e-6 * hi:
            mid = (lo + hi) / 2.0
            if ok(mid):
                hi = mid
            else:
                lo = mid
        c = hi
    return RandomMatchingParameters(m, 4.0 / lm, math.exp(4.0) * m ** (2.0 / 3.0), eps, ab, ab, c, c * m ** expo)


# -- three structures ---------------------------------------------------------------------

def _has_red_clique(c: OrderedColoring, size: int, lo: int = 1, hi: Optional[int] = None) -> Optional[tuple[int, ...]]:
    """Lexicographically least red clique of the given size inside [lo, hi], by bitset backtracking."""
    hi = c.n if hi is None else hi
    if size <= 0:
        return ()
    if size > hi - lo + 1:
        return None
    red = [0] + [c.red_mask(v) for v in range(1, c.n + 1)]
    full = ((1 << (hi + 1)) - 1) & ~((1 << lo) - 1)
    chosen: list[int] = []

    def rec(cand: int) -> bool:
        if len(chosen) == size:
            return True
        if cand.bit_count() < size - len(chosen):
            return False
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            chosen.append(v)
            if rec(cand & red[v]):
                return True
            chosen.pop()
            if cand.bit_count() < size - len(chosen):
                return False
        return False

    return tuple(chosen) if rec(full) else None


def bipartite_red_copy(c: OrderedColoring, p: Sequence[int], half: int) -> Optional[tuple[int, ...]]:
    """Red copy of perm_to_matching(p) with left part in [1, half] and right part in [half+1, 2 half].

    Columns are enumerated in increasing order; for fixed columns the rows are
    found greedily (earliest red row for each successive left vertex).
    """
    k = len(p)
    if k == 0:
        return ()
    if k > half or 2 * half > c.n:
        return None
    for cols in combinations(range(half + 1, 2 * half + 1), k):
        rows = []
        at = 1
        for i in range(k):
            target = cols[p[i] - 1]
            while at <= half and not c.is_red(at, target):
                at += 1
            if at > half:
                break
            rows.append(at)
            at += 1
        else:
            return tuple(rows) + cols
    return None


@dataclass(frozen=True)
class ThreeStructureReport:
    blue_triangle: Optional[tuple[int, int, int]]
    red_clique: Optional[tuple[int, ...]]
    bipartite_copy: Optional[tuple[int, ...]]

    @property
    def any(self) -> bool:
        return any(x is not None for x in (self.blue_triangle, self.red_clique, self.bipartite_copy))

    def to_json(self) -> dict:
        def conv(x):
            return None if x is None else list(x)
        return {"blue_triangle": conv(self.blue_triangle), "red_clique": conv(self.red_clique),
                "bipartite_copy": conv(self.bipartite_copy)}


def three_structure_check(c: OrderedColoring, m: OrderedMatching, clique_size: int) -> ThreeStructureReport:
    """Which of blue K3 / red K_clique_size inside one half / red bipartite copy of m the coloring has."""
    if c.n % 2:
        raise ValueError("coloring must live on an even number 2n of vertices")
    p = matching_to_perm(m)
    half = c.n // 2
    clique = _has_red_clique(c, clique_size, 1, half) or _has_red_clique(c, clique_size, half + 1, c.n)
    if clique_size <= 0:
        clique = ()
    return ThreeStructureReport(find_blue_triangle(c), clique, bipartite_red_copy(c, p, half))
