"""Reduction of small-shrubdepth graphs to sparse structures and back.

build_structure maps a graph to a vertex-colored arc structure whose
Gaifman graph has small treedepth: a root everything points at, one
element per refined label block, per featured component partition an
anchor element, per (partition, part) a part element, per adjacent label
pair a pair element, and recursively built substructures for the blocks
of the refined component partition.  interpret reads the graph back off
the arcs alone, and canonize_graph composes the construction with
structure canonization, restricting the order to the original vertices.
"""

from __future__ import annotations

from dataclasses import dataclass

from .connection_models import in_class
from .dicings import good_dicings
from .errors import Malformed, NotInClass
from .graphs import Graph
from .partitions import Partition, refine_all
from .structcanon import MAX_REDUCING, TD_CAP, canonical_order
from .structures import BinaryStructure, encode_ordered

ROOT = "root"
LEAF = "leaf"
LABEL_NODE = "x"
PARTITION_NODE = "y"
PART_NODE = "z"
PAIR_NODE = "q"
GLOBAL_ROOT = "global_root"
ARC = "arc"


@dataclass(frozen=True)
class CanonicalStructure:
    """The reduction output plus the embedding of the original vertices."""

    structure: BinaryStructure
    leaf_map: tuple[int, ...]


class _Builder:
    def __init__(self, n):
        self.preds = {name: set() for name in (ROOT, LEAF, LABEL_NODE, PARTITION_NODE, PART_NODE, PAIR_NODE)}
        self.arcs: set[tuple[int, int]] = set()
        self.next_id = n

    def new(self) -> int:
        e = self.next_id
        self.next_id += 1
        return e


def build_structure(
    g: Graph,
    depth: int,
    label_budget: int,
    s_max: int = 4,
    warn_threshold: int = 64,
) -> CanonicalStructure:
    """Isomorphism-invariant sparse encoding of a class member."""
    if g.n == 0:
        raise NotInClass("the empty graph has no reduction")
    if not in_class(g, depth, label_budget):
        raise NotInClass(f"graph is not in Class({depth}, {label_budget})")
    b = _Builder(g.n)
    root, _ = _build(g, tuple(range(g.n)), depth, label_budget, s_max, warn_threshold, b)
    unary = {name: frozenset(elems) for name, elems in b.preds.items()}
    unary[GLOBAL_ROOT] = frozenset([root])
    structure = BinaryStructure.of(b.next_id, unary, {ARC: b.arcs})
    return CanonicalStructure(structure, tuple(range(g.n)))


def _build(g, leaf_elems, depth, label_budget, s_max, warn_threshold, b):
    if depth == 1:
        if g.n != 1:
            raise NotInClass("depth-1 classes contain one-vertex graphs only")
        e = leaf_elems[0]
        b.preds[ROOT].add(e)
        b.preds[LEAF].add(e)
        b.arcs.add((e, e))
        return e, [e]

    family = good_dicings(g, depth, label_budget, s_max, warn_threshold=warn_threshold)
    dicing_list = sorted(family, key=lambda d: (d.components.key(), d.labels.key()))
    label_hat = refine_all([d.labels for d in dicing_list])
    part_hat = refine_all([d.components for d in dicing_list])
    featured = []
    seen_parts = set()
    for d in dicing_list:
        if d.components.key() not in seen_parts:
            seen_parts.add(d.components.key())
            featured.append(d.components)

    root = b.new()
    b.preds[ROOT].add(root)
    subtree = [root]

    x_of = {}
    for block in label_hat.blocks:
        x = b.new()
        b.preds[LABEL_NODE].add(x)
        x_of[block] = x
        subtree.append(x)

    y_of, z_of, q_of = {}, {}, {}
    for p in featured:
        y = b.new()
        b.preds[PARTITION_NODE].add(y)
        y_of[p.key()] = y
        subtree.append(y)
    for p in featured:
        for part in p.blocks:
            z = b.new()
            b.preds[PART_NODE].add(z)
            z_of[(p.key(), part)] = z
            subtree.append(z)
            b.arcs.add((z, y_of[p.key()]))
    for p in featured:
        for pair in sorted(_pair_table(g, p, label_hat), key=_pair_key):
            q = b.new()
            b.preds[PAIR_NODE].add(q)
            q_of[(p.key(), pair)] = q
            subtree.append(q)
            for block in pair:
                b.arcs.add((q, x_of[block]))
            b.arcs.add((q, y_of[p.key()]))

    for v in range(g.n):
        b.arcs.add((leaf_elems[v], x_of[label_hat.block_containing(v)]))

    for block in part_hat.blocks:
        verts = sorted(block)
        sub_g = g.induced(verts)
        sub_leaves = tuple(leaf_elems[v] for v in verts)
        sub_root, sub_elems = _build(
            sub_g, sub_leaves, depth - 1, label_budget, s_max, warn_threshold, b
        )
        subtree.extend(sub_elems)
        for p in featured:
            part = p.block_containing(verts[0])
            b.arcs.add((sub_root, z_of[(p.key(), part)]))

    for e in subtree:
        b.arcs.add((e, root))
    return root, subtree


def _pair_table(g, p, label_hat):
    """Adjacent label-block pairs across parts of p; must be consistent."""
    verdict: dict[frozenset, bool] = {}
    pb, lb = p.block_of, label_hat.block_of
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if pb[u] == pb[v]:
                continue
            key = frozenset((label_hat.blocks[lb[u]], label_hat.blocks[lb[v]]))
            e = g.has_edge(u, v)
            if verdict.setdefault(key, e) != e:
                raise AssertionError("refined labels fail to witness a family dicing")
    return [k for k, e in verdict.items() if e]


def _pair_key(pair):
    return tuple(sorted(tuple(sorted(b)) for b in pair))


def interpret(a: CanonicalStructure) -> Graph:
    """Reverse interpretation: the graph on the embedded vertices."""
    graph, elems = interpret_structure(a.structure)
    if frozenset(a.leaf_map) != frozenset(elems):
        raise Malformed("leaf map does not match the structure's leaf predicate")
    pos = {e: i for i, e in enumerate(elems)}
    relabel = {pos[e]: v for v, e in enumerate(a.leaf_map)}
    return Graph.of(graph.n, ((relabel[u], relabel[v]) for u, v in graph.edges))


def interpret_structure(m: BinaryStructure):
    """Graph read off a reduction structure; vertices follow sorted leaves.

    Adjacency of two leaves is decided inside their deepest common
    root-marked element: they are adjacent exactly when some pair element
    there links their label elements through a shared partition anchor,
    with distinct part elements below, and carries no other arcs.
    """
    for name in (ROOT, LEAF, LABEL_NODE, PARTITION_NODE, PART_NODE, PAIR_NODE, GLOBAL_ROOT):
        if name not in m.unary_map:
            raise Malformed(f"missing unary predicate {name!r}")
    if ARC not in m.binary_map:
        raise Malformed(f"missing binary relation {ARC!r}")
    global_roots = m.unary_map[GLOBAL_ROOT]
    if len(global_roots) != 1:
        raise Malformed("global root is not unique")
    (top,) = global_roots
    arcs = m.binary_map[ARC]
    heads: dict[int, set[int]] = {e: set() for e in range(m.domain_size)}
    tails: dict[int, set[int]] = {e: set() for e in range(m.domain_size)}
    for a_, b_ in arcs:
        heads[a_].add(b_)
        tails[b_].add(a_)
    for e in range(m.domain_size):
        if top not in heads[e]:
            raise Malformed("an element lacks an arc to the global root")
    roots = m.unary_map[ROOT]
    if top not in roots:
        raise Malformed("global root lacks the root mark")
    root_depth = {w: len(heads[w] & roots) for w in roots}
    leaves = sorted(m.unary_map[LEAF])
    xset = m.unary_map[LABEL_NODE]
    yset = m.unary_map[PARTITION_NODE]
    zset = m.unary_map[PART_NODE]
    qset = m.unary_map[PAIR_NODE]

    def adjacent(u, v):
        common = [w for w in roots if w in heads[u] and w in heads[v]]
        if not common:
            raise Malformed("two leaves share no root")
        best = max(root_depth[w] for w in common)
        deepest = [w for w in common if root_depth[w] == best]
        if len(deepest) != 1:
            raise Malformed("ambiguous root chain")
        w = deepest[0]
        scope = tails[w]
        xs_u = xset & heads[u] & scope
        xs_v = xset & heads[v] & scope
        subroots_u = (roots & heads[u] & scope) - {w}
        subroots_v = (roots & heads[v] & scope) - {w}
        for q in qset & scope:
            qheads = heads[q] & scope
            qx = qheads & xset
            qy = qheads & yset
            if len(qy) != 1:
                continue
            (y,) = qy
            if qheads - qx - qy - {w}:
                continue  # the pair element may only point at labels, anchor, roots
            for x in qx & xs_u:
                for x2 in qx & xs_v:
                    if qx - {x, x2}:
                        continue
                    z_u = {
                        z
                        for rb in subroots_u
                        for z in heads[rb] & zset & scope
                        if y in heads[z]
                    }
                    z_v = {
                        z
                        for rb in subroots_v
                        for z in heads[rb] & zset & scope
                        if y in heads[z]
                    }
                    if z_u and z_v and (len(z_u | z_v) > 1 or z_u != z_v):
                        if any(z1 != z2 for z1 in z_u for z2 in z_v):
                            return True
        return False

    edges = []
    for i, u in enumerate(leaves):
        for v in leaves[i + 1:]:
            if adjacent(u, v):
                edges.append((u, v))
    pos = {e: i for i, e in enumerate(leaves)}
    return Graph.of(len(leaves), ((pos[u], pos[v]) for u, v in edges)), tuple(leaves)


def canonize_graph(
    g: Graph,
    depth: int,
    label_budget: int,
    s_max: int = 4,
    td_cap: int = TD_CAP,
    max_reducing: int = MAX_REDUCING,
    stats: dict | None = None,
):
    """Canonical bytes and vertex order for a class member."""
    cs = build_structure(g, depth, label_budget, s_max)
    ordered = canonical_order(cs.structure, td_cap, max_reducing, stats)
    enc = encode_ordered(ordered)
    inverse = {e: v for v, e in enumerate(cs.leaf_map)}
    vertex_order = tuple(inverse[e] for e in ordered.order if e in inverse)
    return enc, vertex_order


def iso_graphs(
    g: Graph,
    h: Graph,
    depth: int,
    label_budget: int,
    s_max: int = 4,
    td_cap: int = TD_CAP,
    max_reducing: int = MAX_REDUCING,
) -> bool:
    """Isomorphism of class members via canonical byte equality."""
    if g.n != h.n or g.m != h.m:
        # still validate membership so misuse surfaces
        if not in_class(g, depth, label_budget) or not in_class(h, depth, label_budget):
            raise NotInClass("both graphs must lie in the class")
        return False
    eg, _ = canonize_graph(g, depth, label_budget, s_max, td_cap, max_reducing)
    eh, _ = canonize_graph(h, depth, label_budget, s_max, td_cap, max_reducing)
    return eg == eh
