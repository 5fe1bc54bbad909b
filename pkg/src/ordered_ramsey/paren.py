"""Parenthesis matchings: sequence, matching and rooted-tree views, bound certificates.

A non-crossing perfect matching on [2m] is the same thing as a balanced
parenthesis string of length 2m and as an ordered rooted tree with m + 1
nodes (each matched pair is a non-root node, its children are the pairs
directly inside it).
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from ordered_ramsey.core import OrderedMatching, nested_matching_edges


class ParenError(ValueError):
    """Unbalanced parenthesis string, or a matching that is not non-crossing."""


class CrossingError(ParenError):
    def __init__(self, e, f):
        super().__init__(f"edges {e} and {f} cross")
        self.pair = (e, f)


# -- sequences and matchings -------------------------------------------------

def parse_paren(seq: str) -> OrderedMatching:
    stack: list[int] = []
    edges = []
    for pos, ch in enumerate(seq, start=1):
        if ch == "(":
            stack.append(pos)
        elif ch == ")":
            if not stack:
                raise ParenError(f"unmatched ')' at index {pos}")
            edges.append((stack.pop(), pos))
        else:
            raise ParenError(f"unexpected character {ch!r} at index {pos}")
    if stack:
        raise ParenError(f"unmatched '(' at index {stack[-1]}")
    return OrderedMatching(len(seq), tuple(edges))


def check_non_crossing(m: OrderedMatching) -> None:
    if not m.is_perfect:
        raise ParenError("matching does not cover every vertex")
    stack: list[tuple[int, int]] = []
    for i, j in sorted(m.edges):
        while stack and stack[-1][1] < i:
            stack.pop()
        if stack and stack[-1][1] < j:
            raise CrossingError(stack[-1], (i, j))
        stack.append((i, j))


def render_paren(m: OrderedMatching) -> str:
    check_non_crossing(m)
    out = [""] * m.n
    for i, j in m.edges:
        out[i - 1] = "("
        out[j - 1] = ")"
    return "".join(out)


def nested_matching(k: int) -> OrderedMatching:
    if k < 1:
        raise ValueError("k must be a positive integer")
    return OrderedMatching(2 * k, nested_matching_edges(k))


def balanced_sequences(pairs: int) -> Iterator[str]:
    """All balanced strings with the given number of pairs, in lexicographic order."""
    def rec(prefix: str, opened: int, depth: int):
        if len(prefix) == 2 * pairs:
            yield prefix
            return
        if opened < pairs:
            yield from rec(prefix + "(", opened + 1, depth + 1)
        if depth > 0:
            yield from rec(prefix + ")", opened, depth - 1)
    yield from rec("", 0, 0)


def top_blocks(seq: str) -> list[str]:
    """Split a balanced string into its top-level blocks ``(…)``."""
    out = []
    depth = 0
    start = 0
    for pos, ch in enumerate(seq):
        depth += 1 if ch == "(" else -1
        if depth == 0:
            out.append(seq[start:pos + 1])
            start = pos + 1
    return out


# -- trees -------------------------------------------------------------------

@dataclass(eq=False)
class TreeNode:
    children: list["TreeNode"] = field(default_factory=list)
    size: int = 1
    heavy: bool = False          # label of the edge to the parent
    edge: Optional[tuple[int, int]] = None   # matched pair, None at the root
    text: str = ""               # parenthesis string of the pairs strictly inside


@dataclass(eq=False)
class ParenTree:
    root: TreeNode
    ratio: float

    def nodes(self) -> list[TreeNode]:
        """Pre-order list of nodes."""
        out, stack = [], [self.root]
        while stack:
            node = stack.pop()
            out.append(node)
            stack.extend(reversed(node.children))
        return out

    @property
    def vertex_count(self) -> int:
        return 2 * (self.root.size - 1)


def matching_to_tree(m: OrderedMatching, ratio: float = 0.5) -> ParenTree:
    seq = render_paren(m)
    root = TreeNode(text=seq)
    stack = [(root, 0)]
    for pos, ch in enumerate(seq, start=1):
        if ch == "(":
            node = TreeNode(edge=(pos, 0))
            stack[-1][0].children.append(node)
            stack.append((node, pos))
        else:
            node, start = stack.pop()
            node.edge = (start, pos)
            node.text = seq[start:pos - 1]
    for node in reversed(ParenTree(root, ratio).nodes()):
        node.size = 1 + sum(ch.size for ch in node.children)
        for ch in node.children:
            ch.heavy = ch.size >= ratio * node.size
    return ParenTree(root, ratio)


def tree_to_matching(tree: ParenTree) -> OrderedMatching:
    edges = []
    pos = 0
    stack: list[tuple[TreeNode, int, int]] = [(tree.root, 0, 0)]
    while stack:
        node, idx, start = stack.pop()
        if idx < len(node.children):
            stack.append((node, idx + 1, start))
            pos += 1
            stack.append((node.children[idx], 0, pos))
        elif node is not tree.root:
            pos += 1
            edges.append((start, pos))
    return OrderedMatching(pos, tuple(edges))


# -- bound certificates -------------------------------------------------------

class Case(str, Enum):
    LEAF = "leaf"
    LIGHT_ROOT = "light-root"
    HEAVY_A = "heavy-path-A"
    HEAVY_B = "heavy-path-B"


@dataclass(frozen=True)
class Constants:
    eps: float
    r: float
    c: float

    @classmethod
    def for_eps(cls, eps: float, ratio: Optional[float] = None) -> "Constants":
        if not (isinstance(eps, (int, float)) and math.isfinite(eps) and eps > 0):
            raise ValueError(f"eps must be a positive real, got {eps!r}")
        gap = 23.0 ** (-2.0 / eps)          # 1 - r
        one_minus_r_eps = -math.expm1(eps * math.log1p(-gap))
        c = 23.0 / one_minus_r_eps
        if ratio is None:
            return cls(float(eps), 1.0 - gap, c)
        if not 0.5 <= ratio < 1:
            raise ValueError(f"ratio must lie in [1/2, 1), got {ratio!r}")
        return cls(float(eps), float(ratio), c)

    def to_json(self) -> dict:
        return {"eps": self.eps, "r": self.r, "c": self.c}


@dataclass(frozen=True, eq=False)
class BoundCertificate:
    """Upper bound on r_<(M, K3) for the matching ``text`` and how it was obtained.

    Light-root nodes hold one child per top-level block.  Heavy-path nodes hold
    one child per branch hanging off the path; ``layout[a]`` lists the child
    indices whose wrapped matchings fill slot a of the nested decomposition
    (A_1 .. A_{2k-1}, the middle slot holding the tail subtrees).
    """

    text: str
    case: Case
    bound: int
    constants: Constants
    children: tuple["BoundCertificate", ...] = ()
    s_heavy: int = 0
    tail: int = 0
    layout: tuple[tuple[int, ...], ...] = ()

    @property
    def s(self) -> int:
        return len(self.text) // 2 + 1

    def to_json(self) -> dict:
        out = {"case": self.case.value, "s": self.s, "bound": self.bound,
               "constants": self.constants.to_json(), "matching": self.text,
               "children": [ch.to_json() for ch in self.children]}
        if self.case in (Case.HEAVY_A, Case.HEAVY_B):
            out["s_heavy"] = self.s_heavy
            out["tail"] = self.tail
            out["layout"] = [list(slot) for slot in self.layout]
        return out


def surround_cost(t: int, s: int) -> int:
    """Budget for wrapping a subtree of size s (bound t) in one more pair."""
    return t + 2 * s + 1


def heavy_formula(children: Sequence[BoundCertificate], s_heavy: int, tail: int) -> int:
    """Nested-decomposition bound: tail subtrees first, then the other branches."""
    inner = children[:tail]
    rest = children[tail:]
    center = sum(ch.bound + 3 * ch.s for ch in inner)
    return center + 20 * (s_heavy + sum(ch.bound + 3 * ch.s for ch in rest) + sum(ch.s for ch in inner))


def _heavy_case(s_heavy: int, children: Sequence[BoundCertificate], tail: int, s: int, k: Constants) -> Case:
    light_mass = s_heavy + sum(ch.s for ch in children[tail:])
    return Case.HEAVY_A if light_mass >= 23.0 ** (-1.0 / k.eps) * s else Case.HEAVY_B


class CertificateCalculator:
    """Computes certificates with memoisation keyed on subtree strings."""

    def __init__(self, eps: float = 1.0, ratio: Optional[float] = None):
        self.constants = Constants.for_eps(eps, ratio)
        self._cache: dict[str, BoundCertificate] = {}

    def certify(self, seq: str) -> BoundCertificate:
        if seq in self._cache:
            return self._cache[seq]
        # closing brackets arrive in post-order, so every inner string is
        # certified after the strings nested inside it
        opened: list[int] = []
        for pos, ch in enumerate(seq):
            if ch == "(":
                opened.append(pos)
            elif ch == ")" and opened:
                inner = seq[opened.pop() + 1:pos]
                if inner not in self._cache:
                    self._cache[inner] = self._node(inner)
            else:
                parse_paren(seq)    # raises with the offending index
        if opened:
            parse_paren(seq)
        if seq not in self._cache:
            self._cache[seq] = self._node(seq)
        return self._cache[seq]

    def _node(self, text: str) -> BoundCertificate:
        k = self.constants
        if not text:
            return BoundCertificate(text, Case.LEAF, 0, k)
        s = len(text) // 2 + 1
        blocks = top_blocks(text)
        heavy = [b for b in blocks if len(b) // 2 >= k.r * s]
        if not heavy:
            kids = tuple(self._cache[b[1:-1]] for b in blocks)
            bound = sum(surround_cost(ch.bound, ch.s) for ch in kids)
            return BoundCertificate(text, Case.LIGHT_ROOT, bound, k, kids)
        # walk down the heavy path, collecting left/right branches at each level
        lefts: list[list[str]] = []
        rights: list[list[str]] = []
        cur, cur_s = blocks, s
        path = 1
        while True:
            sizes = [len(b) // 2 for b in cur]
            h = next((p for p, z in enumerate(sizes) if z >= k.r * cur_s), None)
            if h is None:
                break
            lefts.append(cur[:h])
            rights.append(cur[h + 1:])
            inner = cur[h][1:-1]
            cur, cur_s = top_blocks(inner), len(inner) // 2 + 1
            path += 1
        tail_blocks = cur
        kids: list[BoundCertificate] = [self._cache[b[1:-1]] for b in tail_blocks]
        slots_left, slots_right = [], []
        for level in range(len(lefts)):
            idx = []
            for b in lefts[level]:
                idx.append(len(kids))
                kids.append(self._cache[b[1:-1]])
            slots_left.append(tuple(idx))
            idx = []
            for b in rights[level]:
                idx.append(len(kids))
                kids.append(self._cache[b[1:-1]])
            slots_right.append(tuple(idx))
        tail = len(tail_blocks)
        layout = tuple(slots_left) + (tuple(range(tail)),) + tuple(reversed(slots_right))
        kids_t = tuple(kids)
        bound = heavy_formula(kids_t, path, tail)
        case = _heavy_case(path, kids_t, tail, s, k)
        return BoundCertificate(text, case, bound, k, kids_t, s_heavy=path, tail=tail, layout=layout)


def bound_pmatching(m: OrderedMatching | str, eps: float = 1.0, ratio: Optional[float] = None) -> BoundCertificate:
    seq = m if isinstance(m, str) else render_paren(m)
    return CertificateCalculator(eps, ratio).certify(seq)


def certificate_issues(cert: BoundCertificate, check_growth: bool = True,
                       seen: Optional[set[int]] = None) -> list[str]:
    """Re-derive every node of a certificate; an empty list means it is valid.

    ``check_growth`` also tests bound <= c * s**(1+eps) at each node.  Nodes
    whose id is in ``seen`` are skipped (pass the same set across calls that
    share sub-certificates); checked nodes are added to it.
    """
    issues: list[str] = []
    seen = set() if seen is None else seen
    stack = [cert]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.extend(node.children)
        k = node.constants
        if node.case is Case.LEAF:
            ok = node.text == "" and node.bound == 0 and not node.children
        elif node.case is Case.LIGHT_ROOT:
            blocks = top_blocks(node.text)
            ok = (len(blocks) == len(node.children)
                  and all(b[1:-1] == ch.text for b, ch in zip(blocks, node.children))
                  and all(ch.s < k.r * node.s for ch in node.children)
                  and node.bound == sum(surround_cost(ch.bound, ch.s) for ch in node.children))
        else:
            kids = node.children
            total = node.s_heavy + sum(ch.s for ch in kids)
            used = sorted(i for slot in node.layout for i in slot)
            ok = (total == node.s
                  and len(node.layout) == 2 * node.s_heavy - 1
                  and used == list(range(len(kids)))
                  and node.layout[node.s_heavy - 1] == tuple(range(node.tail))
                  and _rebuild_heavy(node) == node.text
                  and node.bound == heavy_formula(kids, node.s_heavy, node.tail)
                  and node.case is _heavy_case(node.s_heavy, kids, node.tail, node.s, k))
        if not ok:
            issues.append(f"{node.case.value} node {node.text!r} does not match its formula")
        if check_growth and node.bound > k.c * node.s ** (1 + k.eps):
            issues.append(f"node {node.text!r}: bound {node.bound} exceeds c*s^(1+eps)")
    return issues


def _rebuild_heavy(node: BoundCertificate) -> str:
    """Matching string of a heavy-path node reassembled from its layout."""
    wrap = ["(" + ch.text + ")" for ch in node.children]
    k = node.s_heavy
    slots = ["".join(wrap[i] for i in slot) for slot in node.layout]
    out = slots[k - 1]
    for level in range(k - 2, -1, -1):
        out = slots[level] + "(" + out + ")" + slots[2 * k - 2 - level]
    return out


# -- convexity predicates ------------------------------------------------------

class Verdict(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNMET = "hypothesis-unmet"


def _check_values(a: Sequence[float]) -> list[float]:
    if len(a) == 0:
        raise ValueError("empty list")
    vals = [float(x) for x in a]
    if not all(math.isfinite(x) for x in vals):
        raise ValueError("non-finite value")
    return vals


def _leq(lhs: float, rhs: float, rel: float) -> bool:
    return lhs <= rhs + rel * max(abs(lhs), abs(rhs), 1.0)


def convex1_holds(a: Sequence[float], delta: float, m: float, c: float, rel: float = 1e-9) -> Verdict:
    """m * (a_0 + c * sum_{i>=1} a_i**delta) <= c * s**delta, given its hypotheses."""
    vals = _check_values(a)
    for name, x in (("delta", delta), ("m", m), ("c", c)):
        if not math.isfinite(x):
            raise ValueError(f"non-finite {name}")
    if delta <= 1 or m <= 0 or c < m or any(x < 0 for x in vals):
        return Verdict.UNMET
    s = math.fsum(vals)
    r = m ** (-1.0 / (delta - 1.0))
    if s < 1 or any(not _leq(x, r * s, rel) for x in vals[1:]):
        return Verdict.UNMET
    lhs = m * (vals[0] + c * math.fsum(x ** delta for x in vals[1:]))
    return Verdict.HOLDS if _leq(lhs, c * s ** delta, rel) else Verdict.FAILS


def convex2_holds(a: Sequence[float], delta: float, r: float, rel: float = 1e-9) -> Verdict:
    """sum a_i**delta <= r**(delta-1) * s**delta, given a_i <= r*s."""
    vals = _check_values(a)
    if not (math.isfinite(delta) and math.isfinite(r)):
        raise ValueError("non-finite parameter")
    if delta < 1 or not 0 < r < 1 or any(x < 0 for x in vals):
        return Verdict.UNMET
    s = math.fsum(vals)
    if any(not _leq(x, r * s, rel) for x in vals):
        return Verdict.UNMET
    lhs = math.fsum(x ** delta for x in vals)
    return Verdict.HOLDS if _leq(lhs, r ** (delta - 1) * s ** delta, rel) else Verdict.FAILS
