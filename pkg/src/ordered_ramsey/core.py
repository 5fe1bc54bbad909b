"""Ordered graphs, red/blue colorings of the ordered complete graph, containment.

Vertices are 1-based throughout.  A coloring stores its blue edges as one
adjacency bitmask per vertex (bit ``v`` of ``mask[u]`` set means ``uv`` is
blue); red is the complement.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from typing import Optional

from ordered_ramsey.chains import chain_length, longest_nested_chain

RED = "red"
BLUE = "blue"
COLORS = (RED, BLUE)

Edge = tuple[int, int]


class FormatError(ValueError):
    """Malformed text input (graph, coloring, sequence)."""


def _check_color(color: str) -> str:
    if color not in COLORS:
        raise ValueError(f"unknown color {color!r}")
    return color


@dataclass(frozen=True)
class OrderedGraph:
    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"vertex count must be non-negative, got {self.n}")
        cleaned = []
        for e in self.edges:
            i, j = e
            if not (1 <= i < j <= self.n):
                raise ValueError(f"edge {e} is not a pair 1 <= i < j <= {self.n}")
            cleaned.append((int(i), int(j)))
        if len(set(cleaned)) != len(cleaned):
            raise ValueError("duplicate edges")
        object.__setattr__(self, "edges", tuple(sorted(cleaned)))

    def adjacency(self) -> list[int]:
        """Bitmask adjacency, index 0 unused."""
        adj = [0] * (self.n + 1)
        for i, j in self.edges:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return adj

    def to_text(self) -> str:
        lines = [str(self.n)] + [f"{i} {j}" for i, j in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str):
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not rows:
            raise FormatError("empty graph text")
        try:
            n = int(rows[0][0])
            edges = [(int(a), int(b)) for a, b in rows[1:]]
        except (ValueError, IndexError) as exc:
            raise FormatError(f"malformed graph text: {exc}") from None
        edges = [(min(a, b), max(a, b)) for a, b in edges]
        try:
            return cls(n, tuple(edges))
        except ValueError as exc:
            raise FormatError(str(exc)) from None


@dataclass(frozen=True)
class OrderedMatching(OrderedGraph):
    def __post_init__(self):
        super().__post_init__()
        seen = set()
        for i, j in self.edges:
            if i in seen or j in seen:
                raise ValueError(f"vertex of edge {(i, j)} is already matched")
            seen.add(i)
            seen.add(j)

    @property
    def is_perfect(self) -> bool:
        return 2 * len(self.edges) == self.n

    def partner(self) -> dict[int, int]:
        out = {}
        for i, j in self.edges:
            out[i] = j
            out[j] = i
        return out


def complete_graph(m: int) -> OrderedGraph:
    return OrderedGraph(m, tuple((i, j) for i in range(1, m + 1) for j in range(i + 1, m + 1)))


def nested_matching_edges(k: int) -> tuple[Edge, ...]:
    return tuple((i, 2 * k + 1 - i) for i in range(1, k + 1))


def is_nested_matching(g: OrderedGraph) -> bool:
    k = len(g.edges)
    return k >= 1 and g.n == 2 * k and g.edges == nested_matching_edges(k)


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def pairs(n: int) -> Iterator[Edge]:
    """All pairs of [n] in row-major order (1,2),(1,3),...,(1,n),(2,3),..."""
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            yield (i, j)


class OrderedColoring:
    """Red/blue coloring of the ordered complete graph on [n]."""

    __slots__ = ("n", "_blue", "_hash")

    def __init__(self, n: int, blue_masks: Sequence[int]):
        if n < 0:
            raise ValueError("n must be non-negative")
        if len(blue_masks) != n + 1:
            raise ValueError("need one mask per vertex plus an unused slot 0")
        full = ((1 << (n + 1)) - 1) & ~1
        masks = []
        for v, m in enumerate(blue_masks):
            if v == 0:
                masks.append(0)
                continue
            if m & ~full or (m >> v) & 1:
                raise ValueError(f"bad adjacency mask for vertex {v}")
            masks.append(m)
        for u in range(1, n + 1):
            for v in _bits(masks[u]):
                if not (masks[v] >> u) & 1:
                    raise ValueError("blue masks are not symmetric")
        self.n = n
        self._blue = tuple(masks)
        self._hash = None

    @classmethod
    def _trusted(cls, n: int, masks: Sequence[int]) -> "OrderedColoring":
        obj = cls.__new__(cls)
        obj.n = n
        obj._blue = tuple(masks)
        obj._hash = None
        return obj

    @classmethod
    def from_blue_edges(cls, n: int, edges: Iterable[Edge]) -> "OrderedColoring":
        masks = [0] * (n + 1)
        for i, j in edges:
            if i > j:
                i, j = j, i
            if not (1 <= i < j <= n):
                raise ValueError(f"edge {(i, j)} out of range for n={n}")
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        return cls._trusted(n, masks)

    @classmethod
    def from_red_edges(cls, n: int, edges: Iterable[Edge]) -> "OrderedColoring":
        return cls.all_blue(n).flipped(edges)

    @classmethod
    def all_red(cls, n: int) -> "OrderedColoring":
        return cls._trusted(n, [0] * (n + 1))

    @classmethod
    def all_blue(cls, n: int) -> "OrderedColoring":
        full = ((1 << (n + 1)) - 1) & ~1
        return cls._trusted(n, [0] + [full & ~(1 << v) for v in range(1, n + 1)])

    @classmethod
    def from_bits(cls, n: int, bits: int) -> "OrderedColoring":
        """Bit p of ``bits`` is the color of the p-th pair in row-major order (1 = blue)."""
        masks = [0] * (n + 1)
        p = 0
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                if (bits >> p) & 1:
                    masks[i] |= 1 << j
                    masks[j] |= 1 << i
                p += 1
        return cls._trusted(n, masks)

    def to_bits(self) -> int:
        bits = 0
        for p, (i, j) in enumerate(pairs(self.n)):
            if (self._blue[i] >> j) & 1:
                bits |= 1 << p
        return bits

    def flipped(self, edges: Iterable[Edge]) -> "OrderedColoring":
        masks = list(self._blue)
        for i, j in edges:
            masks[i] ^= 1 << j
            masks[j] ^= 1 << i
        return OrderedColoring._trusted(self.n, masks)

    def is_blue(self, i: int, j: int) -> bool:
        if i == j:
            raise ValueError("a vertex is not paired with itself")
        return bool((self._blue[i] >> j) & 1)

    def is_red(self, i: int, j: int) -> bool:
        return not self.is_blue(i, j)

    def color(self, i: int, j: int) -> str:
        return BLUE if self.is_blue(i, j) else RED

    def blue_mask(self, v: int) -> int:
        return self._blue[v]

    def red_mask(self, v: int) -> int:
        full = ((1 << (self.n + 1)) - 1) & ~1
        return full & ~self._blue[v] & ~(1 << v)

    def masks(self, color: str) -> list[int]:
        _check_color(color)
        if color == BLUE:
            return list(self._blue)
        return [0] + [self.red_mask(v) for v in range(1, self.n + 1)]

    def blue_edges(self) -> list[Edge]:
        return [(i, j) for i in range(1, self.n + 1) for j in _bits(self._blue[i] >> (i + 1) << (i + 1))]

    def red_edges(self) -> list[Edge]:
        return [(i, j) for i in range(1, self.n + 1) for j in _bits(self.red_mask(i) >> (i + 1) << (i + 1))]

    def edges(self, color: str) -> list[Edge]:
        return self.blue_edges() if _check_color(color) == BLUE else self.red_edges()

    def to_hex(self) -> str:
        m = pair_count(self.n)
        bits = "".join("1" if (self._blue[i] >> j) & 1 else "0" for i, j in pairs(self.n))
        bits += "0" * (-m % 4)
        return "".join(f"{int(bits[p:p + 4], 2):x}" for p in range(0, len(bits), 4))

    @classmethod
    def from_hex(cls, n: int, digits: str) -> "OrderedColoring":
        digits = digits.strip().lower()
        m = pair_count(n)
        want = -(-m // 4)
        bad = next((d for d in digits if d not in "0123456789abcdef"), None)
        if bad is not None:
            raise FormatError(f"invalid hex digit {bad!r} in {digits!r}")
        if len(digits) != want:
            raise FormatError(f"hex string {digits!r} has {len(digits)} digits, expected {want} for n={n}")
        bits = "".join(f"{int(d, 16):04b}" for d in digits)
        if "1" in bits[m:]:
            raise FormatError("non-zero padding bits after the last pair")
        masks = [0] * (n + 1)
        for b, (i, j) in zip(bits, pairs(n)):
            if b == "1":
                masks[i] |= 1 << j
                masks[j] |= 1 << i
        return cls._trusted(n, masks)

    def to_text(self) -> str:
        return f"{self.n}\n{self.to_hex()}\n"

    @classmethod
    def from_text(cls, text: str) -> "OrderedColoring":
        lines = [ln.strip() for ln in text.splitlines()]
        while lines and not lines[-1]:
            lines.pop()
        if not lines:
            raise FormatError("empty coloring text")
        try:
            n = int(lines[0])
        except ValueError:
            raise FormatError(f"bad vertex count {lines[0]!r}") from None
        if n < 0:
            raise FormatError(f"bad vertex count {lines[0]!r}")
        return cls.from_hex(n, lines[1] if len(lines) > 1 else "")

    def restrict(self, vertices: Sequence[int]) -> "OrderedColoring":
        """Induced coloring on the given increasing vertex list, relabelled 1..len."""
        m = len(vertices)
        masks = [0] * (m + 1)
        for a in range(m):
            for b in range(a + 1, m):
                if (self._blue[vertices[a]] >> vertices[b]) & 1:
                    masks[a + 1] |= 1 << (b + 1)
                    masks[b + 1] |= 1 << (a + 1)
        return OrderedColoring._trusted(m, masks)

    def __eq__(self, other):
        return isinstance(other, OrderedColoring) and self.n == other.n and self._blue == other._blue

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self._blue))
        return self._hash

    def __repr__(self):
        return f"OrderedColoring(n={self.n}, hex={self.to_hex()!r})"


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _above(v: int) -> int:
    """Mask of all vertex bits strictly greater than v."""
    return ~((1 << (v + 1)) - 1)


@dataclass(frozen=True)
class EmbeddingWitness:
    pattern: OrderedGraph
    map: tuple[int, ...]
    color: str

    def image_edges(self) -> list[Edge]:
        return [(self.map[i - 1], self.map[j - 1]) for i, j in self.pattern.edges]

    def validate(self, c: OrderedColoring) -> bool:
        f = self.map
        if len(f) != self.pattern.n:
            return False
        if any(not 1 <= v <= c.n for v in f):
            return False
        if any(a >= b for a, b in zip(f, f[1:])):
            return False
        want_blue = self.color == BLUE
        return all(c.is_blue(a, b) == want_blue for a, b in self.image_edges())

    def to_json(self) -> dict:
        return {"color": self.color, "pattern_n": self.pattern.n,
                "pattern_edges": [list(e) for e in self.pattern.edges], "map": list(self.map)}


def find_blue_triangle(c: OrderedColoring, vertices: Optional[Iterable[int]] = None):
    """Lexicographically least blue triangle ``(i, j, k)``, or None."""
    allowed = ~0
    if vertices is not None:
        allowed = 0
        for v in vertices:
            allowed |= 1 << v
    blue = c._blue
    for i in range(1, c.n + 1):
        if not (allowed >> i) & 1:
            continue
        row = blue[i] & allowed & _above(i)
        for j in _bits(row):
            common = row & blue[j] & _above(j)
            if common:
                return (i, j, (common & -common).bit_length() - 1)
    return None


def max_blue_degree(c: OrderedColoring, among: Optional[Iterable[int]] = None,
                    into: Optional[Iterable[int]] = None) -> tuple[int, int]:
    """Vertex of largest blue degree (ties to the smallest index) and that degree.

    ``among`` restricts the candidate vertices, ``into`` the neighbours counted.
    """
    if c.n < 1:
        raise ValueError("coloring has no vertices")
    target = ~0
    if into is not None:
        target = 0
        for v in into:
            target |= 1 << v
    cands = range(1, c.n + 1) if among is None else sorted(among)
    best_v, best_d = None, -1
    for v in cands:
        d = (c._blue[v] & target).bit_count()
        if d > best_d:
            best_v, best_d = v, d
    if best_v is None:
        raise ValueError("no candidate vertices")
    return best_v, best_d


# -- containment -------------------------------------------------------------

def _backtrack(adj: Sequence[int], n: int, g: OrderedGraph, lo: int = 1, hi: Optional[int] = None,
               last: Optional[int] = None) -> Optional[tuple[int, ...]]:
    """Lexicographically least increasing map of g into [lo, hi] along host adjacency ``adj``.

    With ``last`` set, the final pattern vertex is pinned to that host vertex.
    """
    hi = n if hi is None else hi
    p = g.n
    if p == 0:
        return ()
    if hi - lo + 1 < p:
        return None
    earlier: list[list[int]] = [[] for _ in range(p + 1)]
    has_later = [False] * (p + 1)
    for i, j in g.edges:
        earlier[j].append(i)
        has_later[i] = True
    window = ((1 << (hi + 1)) - 1) & ~((1 << lo) - 1)
    f = [0] * (p + 1)

    def candidates(v: int) -> int:
        m = window & _above(f[v - 1]) if v > 1 else window
        m &= (1 << (hi - (p - v) + 1)) - 1
        for u in earlier[v]:
            m &= adj[f[u]]
        if v == p and last is not None:
            m &= 1 << last
        if has_later[v]:
            # keep only vertices with some neighbour further right
            keep = 0
            for x in _bits(m):
                if adj[x] & window & _above(x):
                    keep |= 1 << x
            m = keep
        return m

    stack = [candidates(1)]
    while stack:
        v = len(stack)
        m = stack[-1]
        if not m:
            stack.pop()
            continue
        low = m & -m
        stack[-1] = m ^ low
        f[v] = low.bit_length() - 1
        if v == p:
            return tuple(f[1:])
        stack.append(candidates(v + 1))
    return None


def _blocks(g: OrderedGraph) -> list[tuple[int, int]]:
    """Split [1, g.n] into maximal consecutive intervals that no edge crosses."""
    reach = list(range(g.n + 1))
    for i, j in g.edges:
        reach[i] = max(reach[i], j)
    out = []
    start, end = 1, 0
    for v in range(1, g.n + 1):
        end = max(end, reach[v])
        if end == v:
            out.append((start, v))
            start = v + 1
    return out


def _sub_pattern(g: OrderedGraph, a: int, b: int) -> OrderedGraph:
    return OrderedGraph(b - a + 1, tuple((i - a + 1, j - a + 1) for i, j in g.edges if a <= i and j <= b))


def _exists_by_blocks(adj: Sequence[int], n: int, g: OrderedGraph) -> bool:
    """Greedy over uncrossed blocks, each embedded with the earliest possible end."""
    lo = 1
    for a, b in _blocks(g):
        block = _sub_pattern(g, a, b)
        if not block.edges:
            lo += block.n
            if lo - 1 > n:
                return False
            continue
        end = None
        for e in range(lo + block.n - 1, n + 1):
            if _backtrack(adj, n, block, lo=lo, hi=e, last=e) is not None:
                end = e
                break
        if end is None:
            return False
        lo = end + 1
    return True


def find_embedding(adj: Sequence[int], n: int, g: OrderedGraph, lexmin: bool = True) -> Optional[tuple[int, ...]]:
    """Increasing map of pattern g into the host graph given by bitmask adjacency."""
    if g.n > n:
        return None
    if not g.edges:
        return tuple(range(1, g.n + 1))
    if is_nested_matching(g):
        k = len(g.edges)
        host_edges = [(i, j) for i in range(1, n + 1) for j in _bits(adj[i] & _above(i))]
        if chain_length(host_edges) < k:
            return None
        if not lexmin:
            return nested_chain_map(longest_nested_chain(host_edges, k))
    elif isinstance(g, OrderedMatching) and len(_blocks(g)) > 1:
        if not _exists_by_blocks(adj, n, g):
            return None
    return _backtrack(adj, n, g)


def nested_chain_map(chain: Sequence[Edge]) -> tuple[int, ...]:
    """Embedding map of NM_k from a chain listed innermost first."""
    outer_first = list(reversed(chain))
    return tuple([e[0] for e in outer_first] + [e[1] for e in chain])


def contains_ordered(c: OrderedColoring, color: str, g: OrderedGraph,
                     lexmin: bool = True) -> Optional[EmbeddingWitness]:
    """Witness of an order-preserving copy of g in the given color, or None."""
    _check_color(color)
    if g.n > c.n:
        return None
    f = find_embedding(c.masks(color), c.n, g, lexmin=lexmin)
    if f is None:
        return None
    return EmbeddingWitness(g, f, color)


def verify_avoidance(c: OrderedColoring, red_target: OrderedGraph, blue_target: OrderedGraph) -> bool:
    """True iff c has neither a red copy of red_target nor a blue copy of blue_target."""
    return contains_ordered(c, RED, red_target) is None and contains_ordered(c, BLUE, blue_target) is None
