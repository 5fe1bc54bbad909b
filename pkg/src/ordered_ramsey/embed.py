"""Constructive embedders: find a red copy of a parenthesis matching, or a blue
triangle, or a red clique big enough to hold the target.

Every embedder works on an increasing list of host vertices (``host``) and only
touches the prefix of it that its budget requires.  Targets are parenthesis
strings; a red copy is reported as the list of host vertices that the
pattern's vertices map to, in order.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Optional, Union

from ordered_ramsey.chains import antichain_levels, chain_length, longest_nested_chain
from ordered_ramsey.core import (
    BLUE,
    RED,
    EmbeddingWitness,
    OrderedColoring,
    OrderedMatching,
    find_blue_triangle,
    max_blue_degree,
    nested_chain_map,
)
from ordered_ramsey.paren import (
    BoundCertificate,
    Case,
    CertificateCalculator,
    parse_paren,
    render_paren,
)

__all__ = [
    "BlueTriangle", "RedCopy", "RedClique", "EmbedOutcome", "SizeError", "ContractViolation",
    "longest_nested_chain", "antichain_levels", "validate_outcome",
    "Piece", "EmptyPiece", "ConcatPiece", "SurroundPiece", "NestedPiece", "NestSimplePiece",
    "NestComplexPiece", "piece_for_certificate",
    "embed_nested", "embed_surround", "embed_nest_simple", "embed_nest_complex", "embed_pmatching",
]


class SizeError(ValueError):
    """Host smaller than the embedder's budget."""


class ContractViolation(RuntimeError):
    """A step that the underlying argument guarantees did not go through."""


@dataclass(frozen=True)
class BlueTriangle:
    vertices: tuple[int, int, int]

    def to_json(self) -> dict:
        return {"kind": "blue-triangle", "vertices": list(self.vertices)}


@dataclass(frozen=True)
class RedCopy:
    witness: EmbeddingWitness

    def to_json(self) -> dict:
        return {"kind": "red-copy", "pattern": render_paren(self.witness.pattern),
                "map": list(self.witness.map)}


@dataclass(frozen=True)
class RedClique:
    vertices: tuple[int, ...]

    def to_json(self) -> dict:
        return {"kind": "red-clique", "vertices": list(self.vertices)}


EmbedOutcome = Union[BlueTriangle, RedCopy, RedClique]


def outcome_from_json(data: dict, pattern: Optional[OrderedMatching] = None) -> EmbedOutcome:
    kind = data.get("kind")
    if kind == "blue-triangle":
        return BlueTriangle(tuple(data["vertices"]))
    if kind == "red-clique":
        return RedClique(tuple(data["vertices"]))
    if kind == "red-copy":
        pat = parse_paren(data["pattern"]) if pattern is None else pattern
        return RedCopy(EmbeddingWitness(pat, tuple(data["map"]), RED))
    raise ValueError(f"unknown outcome kind {kind!r}")


def validate_outcome(c: OrderedColoring, outcome: EmbedOutcome,
                     pattern: Optional[OrderedMatching] = None) -> bool:
    """Check an outcome against the host coloring alone.

    With ``pattern`` given, a red copy must be of that pattern and a red clique
    must have at least ``pattern.n`` vertices.
    """
    if isinstance(outcome, BlueTriangle):
        i, j, k = outcome.vertices
        return (1 <= i < j < k <= c.n and c.is_blue(i, j) and c.is_blue(i, k) and c.is_blue(j, k))
    if isinstance(outcome, RedCopy):
        w = outcome.witness
        if w.color != RED:
            return False
        if pattern is not None and (w.pattern.n, w.pattern.edges) != (pattern.n, pattern.edges):
            return False
        return w.validate(c)
    if isinstance(outcome, RedClique):
        v = outcome.vertices
        if any(a >= b for a, b in zip(v, v[1:])) or any(not 1 <= x <= c.n for x in v):
            return False
        if pattern is not None and len(v) < pattern.n:
            return False
        return all(c.is_red(v[a], v[b]) for a in range(len(v)) for b in range(a + 1, len(v)))
    return False


# -- helpers -------------------------------------------------------------------

Image = list[int]
Result = Union[BlueTriangle, Image, RedClique]


def _red_clique_or_triangle(c: OrderedColoring, centre: int, nbrs: Sequence[int]) -> Union[BlueTriangle, RedClique]:
    """Blue neighbours of ``centre`` are pairwise red unless a blue triangle shows up."""
    nbrs = sorted(nbrs)
    allowed = 0
    for v in nbrs:
        allowed |= 1 << v
    for a in nbrs:
        m = c.blue_mask(a) & allowed & ~((1 << (a + 1)) - 1)
        if m:
            b = (m & -m).bit_length() - 1
            return BlueTriangle(tuple(sorted((centre, a, b))))
    return RedClique(tuple(nbrs))


def _as_image(res: Result, size: int) -> Union[BlueTriangle, Image]:
    if isinstance(res, RedClique):
        if len(res.vertices) < size:
            raise ContractViolation(f"red clique of {len(res.vertices)} vertices cannot hold {size}")
        return list(res.vertices[:size])
    return res


def _take(host: Sequence[int], budget: int, what: str) -> list[int]:
    if len(host) < budget:
        raise SizeError(f"{what} needs {budget} host vertices, got {len(host)}")
    return list(host[:budget])


def _finish(c: OrderedColoring, res: Result, pattern: str) -> EmbedOutcome:
    if isinstance(res, list):
        return RedCopy(EmbeddingWitness(parse_paren(pattern), tuple(res), RED))
    return res


# -- pieces ------------------------------------------------------------------------

class Piece:
    """A target matching together with a procedure that embeds it within ``budget`` vertices."""

    pattern: str
    budget: int

    def run(self, c: OrderedColoring, host: Sequence[int]) -> Result:
        raise NotImplementedError

    def image(self, c: OrderedColoring, host: Sequence[int]) -> Union[BlueTriangle, Image]:
        return _as_image(self.run(c, host), len(self.pattern))

    def embed(self, c: OrderedColoring, host: Optional[Sequence[int]] = None) -> EmbedOutcome:
        host = range(1, c.n + 1) if host is None else host
        return _finish(c, self.run(c, list(host)), self.pattern)


class EmptyPiece(Piece):
    pattern = ""
    budget = 0

    def run(self, c, host):
        return []


class ConcatPiece(Piece):
    """Pieces placed side by side on consecutive host intervals."""

    def __init__(self, parts: Sequence[Piece]):
        self.parts = list(parts)
        self.pattern = "".join(p.pattern for p in self.parts)
        self.budget = sum(p.budget for p in self.parts)

    def run(self, c, host):
        host = _take(host, self.budget, "concatenation")
        out: Image = []
        at = 0
        for p in self.parts:
            img = p.image(c, host[at:at + p.budget])
            if isinstance(img, BlueTriangle):
                return img
            out.extend(img)
            at += p.budget
        return out


class SurroundPiece(Piece):
    """One extra pair around ``inner``: budget t + n' + 1 for n' wrapped vertices."""

    def __init__(self, inner: Piece, budget: Optional[int] = None):
        self.inner = inner
        self.pattern = "(" + inner.pattern + ")"
        need = inner.budget + len(self.pattern) + 1
        if budget is not None and budget < need:
            raise ValueError(f"budget {budget} below the minimum {need}")
        self.budget = need if budget is None else budget

    def run(self, c, host):
        t = self.inner.budget
        n_wrap = len(self.pattern)
        if len(host) < t + 1:
            raise SizeError(f"surround needs at least {t + 1} host vertices, got {len(host)}")
        first = host[0]
        img = self.inner.image(c, host[1:t + 1])
        if isinstance(img, BlueTriangle):
            return img
        tail = list(host[t + 1:t + 1 + n_wrap])
        for z in tail:
            if c.is_red(first, z):
                return [first] + img + [z]
        if len(tail) < n_wrap:
            raise SizeError(f"surround needs {t + n_wrap + 1} host vertices, got {len(host)}")
        # first vertex is blue to the whole tail
        return _red_clique_or_triangle(c, first, tail)


class NestedPiece(Piece):
    """NM_k inside 6k vertices: a blue-heavy vertex or a long red nesting chain."""

    def __init__(self, k: int):
        if k < 1:
            raise ValueError("k must be a positive integer")
        self.k = k
        self.pattern = "(" * k + ")" * k
        self.budget = 6 * k

    def run(self, c, host):
        k = self.k
        host = _take(host, self.budget, f"nested matching of size {k}")
        v, d = max_blue_degree(c, among=host, into=host)
        if d >= 2 * k:
            nbrs = [x for x in host if x != v and c.is_blue(v, x)]
            return _red_clique_or_triangle(c, v, nbrs)
        red = _red_pairs(c, host, host)
        chain = longest_nested_chain(red, k)
        if chain:
            return list(nested_chain_map(chain))
        tri = find_blue_triangle(c, host)
        if tri is not None:
            return BlueTriangle(tri)
        raise ContractViolation(f"no chain of {k} nested red edges among {len(host)} vertices")


def _red_pairs(c: OrderedColoring, left: Sequence[int], right: Sequence[int]) -> list[tuple[int, int]]:
    right_mask = 0
    for z in right:
        right_mask |= 1 << z
    out = []
    for x in left:
        m = c.red_mask(x) & right_mask & ~((1 << (x + 1)) - 1)
        while m:
            low = m & -m
            out.append((x, low.bit_length() - 1))
            m ^= low
    return out


def _walk(c: OrderedColoring, host: Sequence[int], chain_outer_first: Sequence[tuple[int, int]],
          parts: Sequence[Piece], centre_image: Optional[Image]) -> Union[BlueTriangle, Image]:
    """Save chain pairs innermost-outward, deleting pairs until each gap fits its parts.

    ``parts`` are A_1..A_{2k-1}; the saved pairs become the k pairs of
    (A_1(A_2( .. (A_k) .. )A_{2k-2})A_{2k-1}).  With ``centre_image`` given,
    A_k is already embedded inside the innermost chain pair.
    """
    k = (len(parts) + 1) // 2
    host = list(host)
    chain = list(chain_outer_first)
    q = len(chain) - 1
    images: list[Optional[Image]] = [None] * len(parts)

    def between(a: int, b: int) -> list[int]:
        return host[bisect_right(host, a):bisect_left(host, b)]

    if centre_image is None:
        need = parts[k - 1].budget
        while q >= 0 and len(between(*chain[q])) < need:
            q -= 1
        if q < 0:
            raise ContractViolation("nesting chain too short for the centre part")
        img = parts[k - 1].image(c, between(*chain[q]))
        if isinstance(img, BlueTriangle):
            return img
        images[k - 1] = img
    else:
        if q < 0:
            raise ContractViolation("empty nesting chain")
        images[k - 1] = centre_image
    saved = [chain[q]]
    for level in range(k - 2, -1, -1):
        left, right = parts[level], parts[2 * k - 2 - level]
        x_in, z_in = saved[-1]
        q -= 1
        while q >= 0 and (len(between(chain[q][0], x_in)) < left.budget
                          or len(between(z_in, chain[q][1])) < right.budget):
            q -= 1
        if q < 0:
            raise ContractViolation("nesting chain ran out of pairs")
        x, z = chain[q]
        for slot, piece, gap in ((level, left, between(x, x_in)), (2 * k - 2 - level, right, between(z_in, z))):
            img = piece.image(c, gap)
            if isinstance(img, BlueTriangle):
                return img
            images[slot] = img
        saved.append(chain[q])
    out: Image = []
    for level in range(k):
        out.append(saved[k - 1 - level][0])
        out.extend(images[level])
    for j in range(k):
        out.append(saved[j][1])
        if j < k - 1:
            out.extend(images[k + j])
    return out


def _nest_pattern(parts: Sequence[Piece]) -> str:
    k = (len(parts) + 1) // 2
    out = "(" + parts[k - 1].pattern + ")"
    for level in range(k - 2, -1, -1):
        out = "(" + parts[level].pattern + out + parts[2 * k - 2 - level].pattern + ")"
    return out


def _check_parts(parts: Sequence[Piece]) -> None:
    if len(parts) % 2 != 1:
        raise ValueError("need an odd number 2k-1 of parts")


class NestSimplePiece(Piece):
    """Nested decomposition embedded inside a red NM_{k+t}, t = sum of paired max budgets."""

    def __init__(self, parts: Sequence[Piece]):
        _check_parts(parts)
        self.parts = list(parts)
        k = (len(parts) + 1) // 2
        self.k = k
        self.t = sum(max(parts[i].budget, parts[2 * k - 2 - i].budget) for i in range(k))
        self.pattern = _nest_pattern(self.parts)
        self.nested = NestedPiece(k + self.t)
        self.budget = self.nested.budget

    def run(self, c, host):
        host = _take(host, self.budget, "nest-simple")
        res = self.nested.run(c, host)
        if not isinstance(res, list):
            if isinstance(res, RedClique) and len(res.vertices) < len(self.pattern):
                raise ContractViolation("red clique smaller than the target")
            return res
        size = self.k + self.t
        chain_outer_first = list(zip(res[:size], reversed(res[size:])))
        return _walk(c, host, chain_outer_first, self.parts, None)


class NestComplexPiece(Piece):
    """Nested decomposition with a cheap centre: budget t + 20(k + l + |M_k|).

    The host prefix splits into X (first 10K vertices), Y (next t) and Z (last 10K),
    K = k + l + |M_k|.  The centre goes into Y; a red X-Z nesting chain of
    length k + l carries the rest, and otherwise some X vertex has 8K blue
    neighbours in Z.
    """

    def __init__(self, parts: Sequence[Piece]):
        _check_parts(parts)
        self.parts = list(parts)
        k = (len(parts) + 1) // 2
        self.k = k
        self.centre = parts[k - 1]
        self.l = sum(p.budget for i, p in enumerate(parts) if i != k - 1)
        self.big_k = k + self.l + len(self.centre.pattern) // 2
        self.pattern = _nest_pattern(self.parts)
        self.budget = self.centre.budget + 20 * self.big_k
        if len(self.pattern) > 8 * self.big_k:
            raise ContractViolation(f"target of {len(self.pattern)} vertices exceeds 8K = {8 * self.big_k}")

    def run(self, c, host):
        host = _take(host, self.budget, "nest-complex")
        w, t = 10 * self.big_k, self.centre.budget
        x_part, y_part, z_part = host[:w], host[w:w + t], host[w + t:]
        centre = self.centre.image(c, y_part)
        if isinstance(centre, BlueTriangle):
            return centre
        red = _red_pairs(c, x_part, z_part)
        need = self.k + self.l
        chain = longest_nested_chain(red, need)
        if chain:
            return _walk(c, host, list(reversed(chain)), self.parts, centre)
        v, d = max_blue_degree(c, among=x_part, into=z_part)
        if d < 8 * self.big_k:
            raise ContractViolation(f"no X vertex with {8 * self.big_k} blue edges into Z (best {d})")
        nbrs = [z for z in z_part if c.is_blue(v, z)]
        return _red_clique_or_triangle(c, v, nbrs)


class _DropOuter(Piece):
    """Embeds ``inner`` (a single outer pair around the target) and drops that pair."""

    def __init__(self, inner: Piece):
        self.inner = inner
        self.pattern = inner.pattern[1:-1]
        self.budget = inner.budget

    def run(self, c, host):
        res = self.inner.run(c, host)
        if isinstance(res, list):
            return res[1:-1]
        return res


def piece_for_certificate(cert: BoundCertificate) -> Piece:
    """Embedding procedure that mirrors a bound certificate; its budget equals the bound."""
    if cert.case is Case.LEAF:
        return EmptyPiece()
    if cert.case is Case.LIGHT_ROOT:
        return ConcatPiece([SurroundPiece(piece_for_certificate(ch)) for ch in cert.children])
    wrapped = [SurroundPiece(piece_for_certificate(ch), budget=ch.bound + 3 * ch.s) for ch in cert.children]
    parts = [ConcatPiece([wrapped[i] for i in slot]) for slot in cert.layout]
    piece = _DropOuter(NestComplexPiece(parts))
    if piece.budget != cert.bound or piece.pattern != cert.text:
        raise ContractViolation("embedding procedure disagrees with the certificate")
    return piece


# -- public entry points ---------------------------------------------------------

def embed_nested(c: OrderedColoring, k: int) -> EmbedOutcome:
    if c.n < 6 * k:
        raise SizeError(f"need at least {6 * k} vertices for k={k}, got {c.n}")
    return NestedPiece(k).embed(c)


def _as_piece(p: Union[Piece, str, OrderedMatching]) -> Piece:
    if isinstance(p, Piece):
        return p
    seq = p if isinstance(p, str) else render_paren(p)
    return piece_for_certificate(CertificateCalculator(1.0).certify(seq))


def embed_surround(c: OrderedColoring, inner: Union[Piece, str, OrderedMatching],
                   host: Optional[Sequence[int]] = None) -> EmbedOutcome:
    """Red copy of ``(inner)``; a string or matching gets its certificate-driven procedure."""
    return SurroundPiece(_as_piece(inner)).embed(c, host)


def embed_nest_simple(c: OrderedColoring, parts: Sequence[Union[Piece, str]],
                      host: Optional[Sequence[int]] = None) -> EmbedOutcome:
    return NestSimplePiece([_as_piece(p) for p in parts]).embed(c, host)


def embed_nest_complex(c: OrderedColoring, parts: Sequence[Union[Piece, str]],
                       host: Optional[Sequence[int]] = None) -> EmbedOutcome:
    return NestComplexPiece([_as_piece(p) for p in parts]).embed(c, host)


def embed_pmatching(c: OrderedColoring, m: Union[OrderedMatching, str], eps: float = 1.0,
                    ratio: Optional[float] = None) -> EmbedOutcome:
    seq = m if isinstance(m, str) else render_paren(m)
    cert = CertificateCalculator(eps, ratio).certify(seq)
    if c.n < cert.bound:
        raise SizeError(f"certificate bound is {cert.bound}, host has {c.n} vertices")
    return piece_for_certificate(cert).embed(c)
