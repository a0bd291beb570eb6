"""Exact treedepth, elimination forests, reducing vertices, Gaifman graphs.

The solver is a branch-and-bound over vertex-subset bitmasks with an
interval memo (known lower/upper bound per connected mask).  Reductions
that keep it exact:

* a universal vertex can always be taken as the root;
* cliques, paths, and cycles have closed-form depths;
* a vertex u with N[u] contained in N[v] never needs to be tried as a
  root, because rooting at v is at least as good.

Budgets make decision queries ("is the treedepth of G - v below d?")
cheap, which is what the reducing-set computation needs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import Disconnected, TooLarge
from .graphs import Graph, bits

DEFAULT_CAP = 20

_INF = 1 << 30


def gaifman(m) -> Graph:
    """Graph on the structure's domain joining co-related distinct elements."""
    edges = set()
    for _, pairs in m.binary:
        for a, b in pairs:
            if a != b:
                edges.add((min(a, b), max(a, b)))
    return Graph(m.domain_size, frozenset(edges))


@dataclass(frozen=True)
class EliminationForest:
    """Rooted forest witnessing a treedepth bound.

    parent[v] is the parent vertex or -1 for roots; depth is the maximum
    number of vertices on a root-to-leaf path.
    """

    parent: tuple[int, ...]
    depth: int


def validate_forest(g: Graph, forest: EliminationForest) -> bool:
    """Check acyclicity, edge coverage, and the reported depth."""
    n = g.n
    if len(forest.parent) != n:
        return False
    depth_of = [0] * n

    def depth_rec(v, trail):
        if depth_of[v]:
            return depth_of[v]
        if v in trail:
            return -1
        p = forest.parent[v]
        if p == -1:
            depth_of[v] = 1
        else:
            d = depth_rec(p, trail | {v})
            if d < 0:
                return -1
            depth_of[v] = d + 1
        return depth_of[v]

    for v in range(n):
        if depth_rec(v, set()) < 0:
            return False
    if n and max(depth_of) != forest.depth:
        return False
    if n == 0 and forest.depth != 0:
        return False

    def ancestors(v):
        out = set()
        while v != -1:
            out.add(v)
            v = forest.parent[v]
        return out

    anc = [ancestors(v) for v in range(n)]
    return all(u in anc[v] or v in anc[u] for u, v in g.edges)


class TreedepthSolver:
    """Shared exact-treedepth queries over induced subgraphs of one graph.

    All queries take vertex bitmasks over the base graph, so recursive
    canonization can reuse one memo across every substructure it visits.
    """

    def __init__(self, g: Graph):
        self.g = g
        self.n = g.n
        self.adj = list(g.adjacency)
        # mask -> [lo, hi, root, rule]; rule in {"", "clique", "path", "cycle", "universal"}
        self._memo: dict[int, list] = {}

    # -- component helpers -------------------------------------------------

    def components(self, mask: int) -> list[int]:
        out = []
        rest = mask
        adj = self.adj
        while rest:
            v = (rest & -rest).bit_length() - 1
            comp = 1 << v
            frontier = comp
            while frontier:
                nxt = 0
                for u in bits(frontier):
                    nxt |= adj[u]
                frontier = nxt & mask & ~comp
                comp |= frontier
            out.append(comp)
            rest &= ~comp
        return out

    # -- public queries -----------------------------------------------------

    def td(self, mask: int) -> int:
        v = self._td(mask, _INF)
        return v

    def td_le(self, mask: int, budget: int) -> bool:
        if budget < 0:
            return mask == 0
        return self._td(mask, budget) <= budget

    # -- core recursion -----------------------------------------------------

    def _td(self, mask: int, budget: int) -> int:
        """Lower bound on treedepth of g[mask], exact whenever <= budget."""
        if mask == 0:
            return 0
        best = 0
        for comp in sorted(self.components(mask), key=lambda c: -c.bit_count()):
            r = self._td_conn(comp, budget)
            if r > budget:
                return r
            if r > best:
                best = r
        return best

    def _new_entry(self, mask: int) -> list:
        k = mask.bit_count()
        adj = self.adj
        if k == 1:
            ent = [1, 1, (mask.bit_length() - 1), ""]
            self._memo[mask] = ent
            return ent
        degs = [(adj[v] & mask).bit_count() for v in bits(mask)]
        if all(d == k - 1 for d in degs):
            ent = [k, k, (mask & -mask).bit_length() - 1, "clique"]
            self._memo[mask] = ent
            return ent
        if max(degs) <= 2:
            ends = degs.count(1)
            if ends == 2:
                # td of a path on k vertices is ceil(log2(k + 1))
                d = k.bit_length()
                ent = [d, d, -1, "path"]
            else:
                # td of a cycle on k vertices is 1 + td of a path on k - 1
                d = 1 + (k - 1).bit_length()
                ent = [d, d, (mask & -mask).bit_length() - 1, "cycle"]
            self._memo[mask] = ent
            return ent
        lo = max(2, self._mmd_plus(mask) + 1)
        if k >= 10:
            # a shortest path of diameter-many edges is induced
            lo = max(lo, (self._diameter(mask) + 1).bit_length())
        hi = self._heuristic(mask)
        ent = [lo, min(hi, k), -1, ""]
        if ent[0] > ent[1]:
            ent[0] = ent[1]
        self._memo[mask] = ent
        return ent

    def _td_conn(self, mask: int, budget: int) -> int:
        ent = self._memo.get(mask)
        if ent is None:
            ent = self._new_entry(mask)
        lo, hi = ent[0], ent[1]
        if lo == hi:
            return hi
        if lo > budget:
            return lo
        adj = self.adj
        k = mask.bit_count()
        universal = 0
        for v in bits(mask):
            if (adj[v] & mask).bit_count() == k - 1:
                universal = v
                ent[2] = v
                ent[3] = "universal"
                break
        if ent[3] == "universal":
            # a universal vertex is always an optimal root
            r = self._td(mask & ~(1 << universal), budget - 1)
            val = 1 + r
            if r <= budget - 1:
                ent[0] = ent[1] = val
            else:
                ent[0] = max(ent[0], val)
            return val

        best = hi
        best_root = -1
        alpha = min(budget, best - 1)
        for v in self._root_candidates(mask):
            bv = 1 << v
            r = 1 + self._td(mask & ~bv, alpha - 1)
            if r <= alpha:
                best = r
                best_root = v
                alpha = min(budget, best - 1)
                if best <= ent[0]:
                    break
        if best <= budget:
            ent[0] = ent[1] = best
            if best_root >= 0:
                ent[2] = best_root
            elif ent[2] < 0:
                ent[2] = self._heuristic_root(mask)
            return best
        ent[0] = max(ent[0], budget + 1)
        if best < ent[1]:
            ent[1] = best
            if best_root >= 0:
                ent[2] = best_root
        return budget + 1

    def _root_candidates(self, mask: int):
        adj = self.adj
        verts = bits(mask)
        closed = {v: (adj[v] & mask) | (1 << v) for v in verts}
        out = []
        for u in verts:
            cu = closed[u]
            dominated = False
            for v in verts:
                if v == u:
                    continue
                cv = closed[v]
                if cu & ~cv == 0 and (cu != cv or u > v):
                    dominated = True
                    break
            if not dominated:
                out.append(u)
        out.sort(key=lambda v: (-(adj[v] & mask).bit_count(), v))
        return out

    # -- bounds -------------------------------------------------------------

    def _mmd_plus(self, mask: int) -> int:
        """Minor-min-degree lower bound on treewidth (so td >= value + 1).

        Greedily contracts a minimum-degree vertex into its neighbor with
        the fewest common neighbors; the largest minimum degree seen along
        the way is a degree of some minor, hence a treewidth lower bound.
        """
        nbr = {v: self.adj[v] & mask for v in bits(mask)}
        best = 0
        while len(nbr) > 1:
            v = min(nbr, key=lambda u: (nbr[u].bit_count(), u))
            d = nbr[v].bit_count()
            best = max(best, d)
            if d == 0:
                del nbr[v]
                continue
            nv = nbr[v]
            w = min(bits(nv), key=lambda u: ((nbr[u] & nv).bit_count(), u))
            merged = (nbr[w] | nv) & ~(1 << w) & ~(1 << v)
            del nbr[v]
            nbr[w] = merged
            bw = 1 << w
            bv = 1 << v
            for u in list(nbr):
                if u == w:
                    continue
                if nbr[u] & bv:
                    nbr[u] = (nbr[u] & ~bv) | bw
            nbr[w] = merged
        return best

    def _diameter(self, mask: int) -> int:
        adj = self.adj
        diam = 0
        for s in bits(mask):
            seen = 1 << s
            frontier = seen
            dist = 0
            while True:
                nxt = 0
                for u in bits(frontier):
                    nxt |= adj[u]
                frontier = nxt & mask & ~seen
                if not frontier:
                    break
                seen |= frontier
                dist += 1
            diam = max(diam, dist)
        return diam

    def _heuristic_root(self, mask: int) -> int:
        adj = self.adj
        return max(bits(mask), key=lambda v: ((adj[v] & mask).bit_count(), -v))

    def _heuristic(self, mask: int) -> int:
        if mask == 0:
            return 0
        best = 0
        for comp in self.components(mask):
            k = comp.bit_count()
            if k <= 2:
                d = k
            else:
                v = self._heuristic_root(comp)
                d = 1 + self._heuristic(comp & ~(1 << v))
            best = max(best, d)
        return best

    # -- witness reconstruction ----------------------------------------------

    def build_forest(self, mask: int) -> dict[int, int]:
        """Parent map (vertex -> parent or -1) of an optimal elimination forest."""
        parent: dict[int, int] = {}
        for comp in self.components(mask):
            self._witness(comp, -1, parent)
        return parent

    def _witness(self, mask: int, up: int, parent: dict[int, int]):
        if mask == 0:
            return
        ent = self._memo.get(mask)
        if ent is None or ent[0] != ent[1]:
            self._td(mask, _INF)
            ent = self._memo[mask]
        rule = ent[3]
        if rule == "clique":
            for v in bits(mask):
                parent[v] = up
                up = v
            return
        if rule == "path":
            order = self._path_order(mask)
            self._path_witness(order, up, parent)
            return
        if rule == "cycle":
            v = ent[2]
            parent[v] = up
            order = self._path_order(mask & ~(1 << v))
            self._path_witness(order, v, parent)
            return
        root = ent[2]
        if root < 0:
            # entry became exact from matching bounds; find an optimal root
            d = ent[1]
            root = next(
                v for v in bits(mask)
                if self._td(mask & ~(1 << v), d - 1) <= d - 1
            )
            ent[2] = root
        parent[root] = up
        rest = mask & ~(1 << root)
        for comp in self.components(rest):
            self._witness(comp, root, parent)

    def _path_order(self, mask: int) -> list[int]:
        adj = self.adj
        verts = bits(mask)
        if len(verts) == 1:
            return verts
        start = next(v for v in verts if (adj[v] & mask).bit_count() == 1)
        order = [start]
        prev, cur = -1, start
        while True:
            nxt = [u for u in bits(adj[cur] & mask) if u != prev]
            if not nxt:
                return order
            prev, cur = cur, nxt[0]
            order.append(cur)

    def _path_witness(self, order: list[int], up: int, parent: dict[int, int]):
        if not order:
            return
        mid = len(order) // 2
        parent[order[mid]] = up
        self._path_witness(order[:mid], order[mid], parent)
        self._path_witness(order[mid + 1:], order[mid], parent)


def treedepth(g: Graph, cap: int = DEFAULT_CAP):
    """Exact treedepth with a witnessing elimination forest.

    Raises TooLarge when the vertex count exceeds the bitmask cap.
    """
    if g.n > cap:
        raise TooLarge(f"treedepth cap is {cap} vertices, graph has {g.n}")
    if g.n == 0:
        return 0, EliminationForest((), 0)
    solver = TreedepthSolver(g)
    full = (1 << g.n) - 1
    depth = solver.td(full)
    parent_map = solver.build_forest(full)
    parent = tuple(parent_map[v] for v in range(g.n))
    return depth, EliminationForest(parent, depth)


def reducing_set(g: Graph, cap: int = DEFAULT_CAP) -> frozenset[int]:
    """Vertices whose removal strictly lowers the treedepth.

    Defined for connected nonempty graphs; every member u satisfies
    td(g - u) == td(g) - 1, so these are exactly the possible roots of
    minimum-depth elimination trees.
    """
    if g.n == 0 or not g.is_connected():
        raise Disconnected("reducing_set needs a connected nonempty graph")
    if g.n > cap:
        raise TooLarge(f"treedepth cap is {cap} vertices, graph has {g.n}")
    solver = TreedepthSolver(g)
    full = (1 << g.n) - 1
    d = solver.td(full)
    return frozenset(v for v in range(g.n) if solver.td_le(full & ~(1 << v), d - 1))
