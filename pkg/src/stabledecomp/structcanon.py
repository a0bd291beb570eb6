"""Canonization of binary structures whose Gaifman graph has small treedepth.

The recursion: a disconnected structure is canonized component by
component and the components sorted (smaller first, then lexicographically
by encoding); a connected structure enumerates, for every ordering of its
treedepth-reducing vertex set, the residual structure on the remaining
elements (with substituted relation variants recorded as extra relations,
unary predicates, and nullary flags), canonizes that recursively, and
keeps the ordering whose full encoded structure is smallest.

All treedepth queries in one run are masks over a single solver built on
the top-level Gaifman graph, and results are memoized per exact structure
content, so repeated residuals and equal components are canonized once.
"""

from __future__ import annotations

import itertools

from .errors import NotASubset, SignatureMismatch, TooLarge
from .graphs import bits
from .structures import (
    BinaryStructure,
    OrderedStructure,
    _fold_constants,
    _RESERVED,
    encode_ordered,
)
from .treedepth import TreedepthSolver, gaifman

TD_CAP = 64
MAX_REDUCING = 8


def _derived(base: str, assignment) -> str:
    """Name for a relation variant with coordinates pinned to ranked vertices."""
    if not assignment:
        return base
    return base + _RESERVED + ",".join(f"{pos}:{j}" for pos, j in assignment)


def residual_structure(m: BinaryStructure, x_order) -> BinaryStructure:
    """Structure on the remaining elements after pinning x_order.

    For each relation and each way of substituting ranked x_order vertices
    into its coordinates, the surviving coordinates form a derived
    relation: binary relations yield a binary remainder, two unary
    families (one per pinned side), and one flag per pinned pair; unary
    predicates yield a unary remainder and per-vertex flags.  The empty
    substitution keeps the base name, so pinning nothing returns the
    structure unchanged.  The remaining elements are reindexed densely in
    increasing order.
    """
    struct, _ = _residual_with_map(m, tuple(x_order))
    return struct


def _residual_with_map(m: BinaryStructure, x_order: tuple[int, ...]):
    xs = frozenset(x_order)
    if len(xs) != len(x_order):
        raise NotASubset("x_order repeats a vertex")
    if any(not 0 <= v < m.domain_size for v in x_order):
        raise NotASubset("x_order leaves the domain")
    if m.constants:
        raise ValueError("fold constants before building residuals")
    rest = [v for v in range(m.domain_size) if v not in xs]
    pos = {v: i for i, v in enumerate(rest)}
    rank = {v: j for j, v in enumerate(x_order, start=1)}
    unary: dict[str, set[int]] = {}
    binary: dict[str, set[tuple[int, int]]] = {}
    flags = set(m.flags)
    for name, elems in m.unary:
        unary[name] = {pos[e] for e in elems if e not in xs}
        for v in elems & xs:
            flags.add(_derived(name, ((1, rank[v]),)))
    for name, pairs in m.binary:
        keep = binary.setdefault(name, set())
        for a, b in pairs:
            a_in, b_in = a in xs, b in xs
            if not a_in and not b_in:
                keep.add((pos[a], pos[b]))
            elif a_in and not b_in:
                unary.setdefault(_derived(name, ((1, rank[a]),)), set()).add(pos[b])
            elif not a_in and b_in:
                unary.setdefault(_derived(name, ((2, rank[b]),)), set()).add(pos[a])
            else:
                flags.add(_derived(name, ((1, rank[a]), (2, rank[b]))))
    struct = BinaryStructure.of(len(rest), unary, binary, None, flags)
    return struct, tuple(rest)


def canonical_order(
    m: BinaryStructure,
    td_cap: int = TD_CAP,
    max_reducing: int = MAX_REDUCING,
    stats: dict | None = None,
) -> OrderedStructure:
    """Order whose encoding is identical for isomorphic inputs.

    Raises TooLarge when the domain exceeds the treedepth cap or some
    reducing set exceeds the bijection-enumeration cap.
    """
    base = _fold_constants(m)
    if base.domain_size > td_cap:
        raise TooLarge(f"canonization cap is {td_cap} elements")
    solver = TreedepthSolver(gaifman(base))
    memo: dict[BinaryStructure, tuple[tuple[int, ...], bytes]] = {}
    order = _canon(base, tuple(range(base.domain_size)), solver, memo, max_reducing, stats)
    return OrderedStructure(m, order)


def _canon(struct, to_top, solver, memo, max_reducing, stats) -> tuple[int, ...]:
    hit = memo.get(struct)
    if hit is not None:
        return hit[0]
    n = struct.domain_size
    if n == 0:
        order: tuple[int, ...] = ()
        memo[struct] = (order, encode_ordered(OrderedStructure(struct, order)))
        return order
    mask = 0
    for t in to_top:
        mask |= 1 << t
    loc_of = {t: i for i, t in enumerate(to_top)}
    comps = solver.components(mask)
    if len(comps) > 1:
        pieces = []
        for comp in comps:
            locs = sorted(loc_of[t] for t in bits(comp))
            sub = struct.substructure(locs)
            sub_order = _canon(
                sub, tuple(to_top[i] for i in locs), solver, memo, max_reducing, stats
            )
            pieces.append((memo[sub][1], [locs[i] for i in sub_order]))
        pieces.sort(key=lambda p: p[0])
        order = tuple(itertools.chain.from_iterable(p[1] for p in pieces))
        memo[struct] = (order, encode_ordered(OrderedStructure(struct, order)))
        return order
    d = solver.td(mask)
    x_loc = sorted(
        loc_of[t] for t in bits(mask) if solver.td_le(mask & ~(1 << t), d - 1)
    )
    if len(x_loc) > max_reducing:
        raise TooLarge(
            f"reducing set has {len(x_loc)} vertices; bijection cap is {max_reducing}"
        )
    if stats is not None:
        stats["max_reducing"] = max(stats.get("max_reducing", 0), len(x_loc))
        stats["branches"] = stats.get("branches", 0) + 1
    best_bytes = None
    best_order: tuple[int, ...] = ()
    for sigma in itertools.permutations(x_loc):
        res, rest = _residual_with_map(struct, sigma)
        sub_order = _canon(
            res, tuple(to_top[i] for i in rest), solver, memo, max_reducing, stats
        )
        full = sigma + tuple(rest[i] for i in sub_order)
        enc = encode_ordered(OrderedStructure(struct, full))
        if best_bytes is None or enc < best_bytes:
            best_bytes, best_order = enc, full
    memo[struct] = (best_order, best_bytes)
    return best_order


def iso_structures(m: BinaryStructure, n: BinaryStructure, **kwargs) -> bool:
    """Isomorphism via byte equality of canonical encodings."""
    if m.signature() != n.signature():
        raise SignatureMismatch("structures have different signatures")
    if m.domain_size != n.domain_size:
        return False
    em = encode_ordered(canonical_order(m, **kwargs))
    en = encode_ordered(canonical_order(n, **kwargs))
    return em == en
