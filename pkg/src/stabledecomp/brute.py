"""Brute-force ground truth: isomorphism, minimal encodings, class corpora.

These oracles live in the shipped library, not only in the tests, so CLI
users can cross-verify canonical outputs.  Caps are strict.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import TooLarge
from .graphs import Graph, bits
from .structures import BinaryStructure, OrderedStructure, encode_ordered

ISO_CAP = 8
CANONICAL_CAP = 6
CORPUS_CAP = 7


def brute_force_iso(g: Graph, h: Graph, cap: int = ISO_CAP) -> bool:
    """Exact isomorphism by backtracking with a degree-sequence prefilter."""
    if max(g.n, h.n) > cap:
        raise TooLarge(f"brute-force isomorphism cap is {cap} vertices")
    if g.n != h.n or g.m != h.m:
        return False
    if g.degree_sequence() != h.degree_sequence():
        return False
    n = g.n
    gadj, hadj = g.adjacency, h.adjacency
    image = [-1] * n
    used = [False] * n

    def assign(v: int) -> bool:
        if v == n:
            return True
        dv = gadj[v].bit_count()
        for w in range(n):
            if used[w] or hadj[w].bit_count() != dv:
                continue
            ok = True
            for u in range(v):
                if (gadj[v] >> u & 1) != (hadj[w] >> image[u] & 1):
                    ok = False
                    break
            if ok:
                image[v] = w
                used[w] = True
                if assign(v + 1):
                    return True
                used[w] = False
        return False

    return assign(0)


def brute_force_canonical(m: BinaryStructure, cap: int = CANONICAL_CAP) -> bytes:
    """Minimum of encode_ordered over every ordering of the domain."""
    if m.domain_size > cap:
        raise TooLarge(f"brute-force canonical cap is {cap} elements")
    return min(
        encode_ordered(OrderedStructure(m, perm))
        for perm in itertools.permutations(range(m.domain_size))
    )


def canonical_graph_code(g: Graph, cap: int = ISO_CAP) -> bytes:
    """Canonical adjacency code: the minimum upper-triangular bit rows.

    Vertices are placed one by one; a partial placement is abandoned as
    soon as its row prefix exceeds the best complete code.  Independent of
    the structure-canonization pipeline, so it can arbitrate it.
    """
    if g.n > cap:
        raise TooLarge(f"canonical graph code cap is {cap} vertices")
    n = g.n
    adj = g.adjacency
    best: list[tuple[int, ...]] | None = None
    placed: list[int] = []

    def rows_for(candidate: int) -> tuple[int, ...]:
        return tuple(adj[candidate] >> u & 1 for u in placed)

    def search(rows: list[tuple[int, ...]]):
        nonlocal best
        depth = len(placed)
        if depth == n:
            code = tuple(rows)
            if best is None or code < best:
                best = code
            return
        pool = sorted(
            ((rows_for(v), v) for v in range(n) if v not in placed),
        )
        for row, v in pool:
            if best is not None:
                prefix = tuple(rows) + (row,)
                if prefix > best[: len(prefix)]:
                    continue
            placed.append(v)
            rows.append(row)
            search(rows)
            rows.pop()
            placed.pop()

    search([])
    assert best is not None or n == 0
    flat = [b for row in (best or ()) for b in row]
    return bytes([n]) + bytes(flat)


@dataclass(frozen=True)
class Corpus:
    """Deterministic enumeration of a hereditary class at desk scale."""

    n_max: int
    depth: int
    label_budget: int
    graphs: tuple[Graph, ...]


def enumerate_class(n_max: int, depth: int, label_budget: int, cap: int = CORPUS_CAP) -> Corpus:
    """All graphs up to isomorphism with <= n_max vertices in the class.

    Grown by vertex extension: the class is hereditary, so every member on
    k vertices extends a member on k - 1.  Deduplication is by the exact
    canonical adjacency code.
    """
    from .connection_models import in_class

    if n_max > cap:
        raise TooLarge(f"corpus cap is {cap} vertices")
    out: list[Graph] = []
    level: dict[bytes, Graph] = {}
    if n_max >= 1 and in_class(Graph.of(1), depth, label_budget):
        g1 = Graph.of(1)
        level = {canonical_graph_code(g1): g1}
        out.extend(level.values())
    for n in range(2, n_max + 1):
        nxt: dict[bytes, Graph] = {}
        for g in level.values():
            for mask in range(1 << g.n):
                edges = list(g.edges) + [(u, g.n) for u in bits(mask)]
                cand = Graph.of(n, edges)
                if not in_class(cand, depth, label_budget):
                    continue
                code = canonical_graph_code(cand)
                if code not in nxt:
                    nxt[code] = cand
        level = nxt
        out.extend(level.values())
    ordered = sorted(out, key=canonical_graph_code)
    return Corpus(n_max, depth, label_budget, tuple(ordered))
