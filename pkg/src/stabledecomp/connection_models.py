"""Connection models: labeled rooted trees with per-node adjacency tables.

A model determines adjacency of two distinct vertices by looking up the
pair of their labels in the table at their lowest common ancestor.  Depth
counts nodes on the longest root-to-leaf path, so a depth-1 model is a
single node and describes a one-vertex graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import LeafMismatch, NotALeaf, TooLarge
from .graphs import Graph, bits

MODEL_CAP = 12


@dataclass
class ConnectionModel:
    """Rooted tree whose leaves are exactly the graph's vertices.

    Node ids: leaves are the vertex ids 0..n-1, internal nodes are >= n.
    Tables map an internal node to a symmetric set of label pairs.
    """

    n: int
    root: int
    parent: dict[int, int]
    children: dict[int, tuple[int, ...]]
    label_of: dict[int, int]
    adj: dict[int, frozenset[tuple[int, int]]]

    @property
    def labels(self) -> frozenset[int]:
        return frozenset(self.label_of.values())

    def depth(self) -> int:
        if self.n == 0:
            return 0

        def down(node):
            kids = self.children.get(node, ())
            if not kids:
                return 1
            return 1 + max(down(c) for c in kids)

        return down(self.root)

    def is_leaf(self, node: int) -> bool:
        return 0 <= node < self.n

    def _depth_of(self, node: int) -> int:
        d = 0
        while node != self.root:
            node = self.parent[node]
            d += 1
        return d

    def lca(self, u: int, v: int) -> int:
        du, dv = self._depth_of(u), self._depth_of(v)
        while du > dv:
            u = self.parent[u]
            du -= 1
        while dv > du:
            v = self.parent[v]
            dv -= 1
        while u != v:
            u = self.parent[u]
            v = self.parent[v]
        return u


def eval_adjacency(model: ConnectionModel, u: int, v: int) -> bool:
    """Adjacency read off the table at the lowest common ancestor."""
    if not (model.is_leaf(u) and model.is_leaf(v)):
        raise NotALeaf(f"{u} or {v} is not a leaf")
    if u == v:
        raise ValueError("eval_adjacency needs distinct vertices")
    x = model.lca(u, v)
    return (model.label_of[u], model.label_of[v]) in model.adj.get(x, frozenset())


def validate_model(model: ConnectionModel, g: Graph) -> bool:
    """True iff the model reproduces g's adjacency on every vertex pair."""
    if model.n != g.n:
        raise LeafMismatch("model leaves do not match the vertex set")
    return all(
        eval_adjacency(model, u, v) == g.has_edge(u, v)
        for u in range(g.n)
        for v in range(u + 1, g.n)
    )


def type_partition_classes(g: Graph) -> list[list[int]]:
    """Coarsest partition where adjacency depends only on the class pair.

    Two vertices are equivalent when their neighborhoods agree outside the
    pair itself; classes are cliques or independent sets.
    """
    adj = g.adjacency
    classes: list[list[int]] = []
    for v in range(g.n):
        for cls in classes:
            u = cls[0]
            if (adj[u] ^ adj[v]) & ~((1 << u) | (1 << v)) == 0:
                cls.append(v)
                break
        else:
            classes.append([v])
    return classes


def _set_partitions(items, max_blocks):
    """Partitions of items into at most max_blocks nonempty blocks."""
    items = list(items)
    if not items:
        yield []
        return

    def rec(i, blocks):
        if i == len(items):
            yield [list(b) for b in blocks]
            return
        x = items[i]
        for b in blocks:
            b.append(x)
            yield from rec(i + 1, blocks)
            b.pop()
        if len(blocks) < max_blocks:
            blocks.append([x])
            yield from rec(i + 1, blocks)
            blocks.pop()

    yield from rec(0, [])


def _symmetric_tables(label_ids):
    pairs = [
        (a, b) for i, a in enumerate(label_ids) for b in label_ids[i:]
    ]
    for bitsel in range(1 << len(pairs)):
        chosen = {pairs[i] for i in range(len(pairs)) if bitsel >> i & 1}
        yield frozenset(chosen) | frozenset((b, a) for a, b in chosen)


def find_connection_model(
    g: Graph, depth: int, label_budget: int, cap: int = MODEL_CAP
) -> ConnectionModel | None:
    """Search for a model of at most the given depth and label count.

    Tree shape is driven by the table choice: once a root table is fixed,
    vertex pairs disagreeing with it must share a child subtree, so the
    candidate child partition is the component partition of the
    disagreement graph.  Single-child internal nodes are never produced.
    """
    if depth < 1 or label_budget < 1:
        raise ValueError("depth and label budget must be positive")
    if g.n > cap:
        raise TooLarge(f"connection model search cap is {cap} vertices")
    if g.n == 0:
        return ConnectionModel(0, -1, {}, {}, {}, {})
    if g.n == 1:
        return ConnectionModel(1, 0, {}, {}, {0: 0}, {})
    if depth == 1:
        return None
    adj = g.adjacency
    if depth == 2:
        classes = type_partition_classes(g)
        if len(classes) > label_budget:
            return None
        label_of = {}
        for i, cls in enumerate(classes):
            for v in cls:
                label_of[v] = i
        table = set()
        for u, v in g.edges:
            table.add((label_of[u], label_of[v]))
            table.add((label_of[v], label_of[u]))
        root = g.n
        return ConnectionModel(
            g.n,
            root,
            {v: root for v in range(g.n)},
            {root: tuple(range(g.n))},
            label_of,
            {root: frozenset(table)},
        )

    for blocks in _set_partitions(range(g.n), label_budget):
        label_of = {}
        for i, blk in enumerate(blocks):
            for v in blk:
                label_of[v] = i
        dead: set[tuple[frozenset[int], int]] = set()

        def assemble(vertices: frozenset[int], budget: int):
            if len(vertices) == 1:
                return ("leaf", next(iter(vertices)))
            if budget <= 1 or (vertices, budget) in dead:
                return None
            present = sorted({label_of[v] for v in vertices})
            if budget == 2:
                table = {}
                for u in vertices:
                    for v in vertices:
                        if u >= v:
                            continue
                        key = tuple(sorted((label_of[u], label_of[v])))
                        e = adj[u] >> v & 1
                        if table.setdefault(key, e) != e:
                            dead.add((vertices, budget))
                            return None
                chosen = {k for k, e in table.items() if e}
                t = frozenset(chosen) | frozenset((b, a) for a, b in chosen)
                return ("node", t, [("leaf", v) for v in sorted(vertices)])
            for t in _symmetric_tables(present):
                comp_of = _disagreement_components(vertices, label_of, adj, t)
                if len(comp_of) < 2:
                    continue
                subs = []
                for comp in comp_of:
                    sub = assemble(comp, budget - 1)
                    if sub is None:
                        break
                    subs.append(sub)
                else:
                    return ("node", t, subs)
            dead.add((vertices, budget))
            return None

        spec = assemble(frozenset(range(g.n)), depth)
        if spec is not None:
            return _materialize(g.n, spec, label_of)
    return None


def _disagreement_components(vertices, label_of, adj, table):
    verts = sorted(vertices)
    nbr = {}
    for u in verts:
        row = set()
        for v in verts:
            if v == u:
                continue
            e = bool(adj[u] >> v & 1)
            if e != ((label_of[u], label_of[v]) in table):
                row.add(v)
        nbr[u] = row
    comps = []
    seen = set()
    for s in verts:
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for v in nbr[u]:
                if v not in comp:
                    comp.add(v)
                    stack.append(v)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def _materialize(n, spec, label_of) -> ConnectionModel:
    parent: dict[int, int] = {}
    children: dict[int, tuple[int, ...]] = {}
    adj: dict[int, frozenset[tuple[int, int]]] = {}
    counter = [n]

    def build(node_spec):
        if node_spec[0] == "leaf":
            return node_spec[1]
        _, table, subs = node_spec
        node = counter[0]
        counter[0] += 1
        kids = tuple(build(s) for s in subs)
        for k in kids:
            parent[k] = node
        children[node] = kids
        adj[node] = table
        return node

    root = build(spec)
    return ConnectionModel(n, root, parent, children, dict(label_of), adj)


@lru_cache(maxsize=None)
def _in_class_cached(g: Graph, depth: int, label_budget: int, cap: int) -> bool:
    if g.n == 0:
        return True
    if depth == 1:
        return g.n <= 1
    if depth == 2:
        return len(type_partition_classes(g)) <= label_budget
    return find_connection_model(g, depth, label_budget, cap) is not None


def in_class(g: Graph, depth: int, label_budget: int, cap: int = MODEL_CAP) -> bool:
    """Membership in the hereditary family Class(depth, label_budget)."""
    if depth < 1 or label_budget < 1:
        raise ValueError("depth and label budget must be positive")
    if g.n > cap:
        raise TooLarge(f"connection model search cap is {cap} vertices")
    return _in_class_cached(g, depth, label_budget, cap)
