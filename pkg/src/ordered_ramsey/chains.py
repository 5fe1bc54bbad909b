"""Nesting order on intervals: longest chains and antichain levels.

An edge ``(i, j)`` sits strictly inside ``(l, m)`` when ``l < i < j < m``.
Chains are listed innermost first.
"""

from __future__ import annotations

from bisect import bisect_left
from collections.abc import Iterable, Sequence

Edge = tuple[int, int]


def nested_inside(inner: Edge, outer: Edge) -> bool:
    return outer[0] < inner[0] and inner[1] < outer[1]


def _depths_from_outside(edges: Sequence[Edge]) -> list[int]:
    """For each edge, the longest chain having that edge as its innermost member.

    Patience sorting over edges ordered by left endpoint ascending; equal left
    endpoints are fed with right endpoints ascending so that no two of them can
    sit in one strictly decreasing run of right endpoints.
    """
    order = sorted(range(len(edges)), key=lambda p: (edges[p][0], edges[p][1]))
    tails: list[int] = []
    depth = [0] * len(edges)
    for p in order:
        key = -edges[p][1]
        pos = bisect_left(tails, key)
        if pos == len(tails):
            tails.append(key)
        else:
            tails[pos] = key
        depth[p] = pos + 1
    return depth


def chain_length(edges: Iterable[Edge]) -> int:
    """Length of a longest chain, O(E log E)."""
    edges = list(edges)
    if not edges:
        return 0
    return max(_depths_from_outside(edges))


def longest_nested_chain(edges: Iterable[Edge], length: int | None = None) -> list[Edge]:
    """Lexicographically least chain (innermost first) of maximum length.

    With ``length`` given, the lexicographically least chain of exactly that many
    edges is returned instead, or an empty list when none exists.
    """
    edges = sorted(set(edges))
    if not edges:
        return []
    depth = _depths_from_outside(edges)
    best = max(depth)
    k = best if length is None else length
    if k <= 0 or k > best:
        return []
    chain: list[Edge] = []
    need = k
    for e, d in zip(edges, depth):
        if d >= need:
            chain.append(e)
            break
    need -= 1
    while need > 0:
        inner = chain[-1]
        for e, d in zip(edges, depth):
            if d >= need and nested_inside(inner, e):
                chain.append(e)
                break
        need -= 1
    return chain


def antichain_levels(edges: Iterable[Edge]) -> list[list[Edge]]:
    """Partition edges by the length of the longest chain ending at them.

    Each level is an antichain, and there are exactly as many levels as the
    longest chain has edges.
    """
    edges = sorted(set(edges))
    if not edges:
        return []
    depth = _depths_from_outside(edges)
    levels: list[list[Edge]] = [[] for _ in range(max(depth))]
    for e, d in zip(edges, depth):
        levels[d - 1].append(e)
    return levels
