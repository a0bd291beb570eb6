"""Stability probes: ladder index of the edge relation and neighborhood traces."""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import Graph


@dataclass(frozen=True)
class Ladder:
    """Witness sequences a_1..a_k, b_1..b_k with an edge a_i b_j iff i < j."""

    a_side: tuple[int, ...]
    b_side: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.a_side)

    def holds_in(self, g: Graph) -> bool:
        k = self.order
        if len(self.b_side) != k:
            return False
        return all(
            g.has_edge(self.a_side[i], self.b_side[j]) == (i < j)
            for i in range(k)
            for j in range(k)
        )


def half_graph(k: int) -> Graph:
    """2k vertices a_1..a_k = 0..k-1, b_1..b_k = k..2k-1; edge a_i b_j iff i < j."""
    if k < 1:
        raise ValueError("k must be positive")
    return Graph.of(2 * k, ((i, k + j) for i in range(k) for j in range(k) if i < j))


def find_ladder(g: Graph, k: int) -> Ladder | None:
    """Backtracking search for a ladder of the exact given order.

    Vertex repetitions are permitted inside and across the two sides; the
    extension of (a_1..a_t, b_1..b_t) by (a, b) must satisfy every
    constraint against all earlier pairs, which prunes hard.
    """
    if k <= 0:
        raise ValueError("order must be positive")
    adj = g.adjacency
    a_seq: list[int] = []
    b_seq: list[int] = []

    def extend(t: int) -> bool:
        if t == k:
            return True
        for a in range(g.n):
            ma = adj[a]
            # no edge from the new a to any earlier b, nor to the new b
            if any(ma >> b & 1 for b in b_seq):
                continue
            a_seq.append(a)
            for b in range(g.n):
                if ma >> b & 1:
                    continue
                # every earlier a must see the new b
                if all(adj[x] >> b & 1 for x in a_seq[:-1]):
                    b_seq.append(b)
                    if extend(t + 1):
                        return True
                    b_seq.pop()
            a_seq.pop()
        return False

    if extend(0):
        return Ladder(tuple(a_seq), tuple(b_seq))
    return None


def ladder_index(g: Graph, k_max: int) -> int:
    """Largest k <= k_max witnessed by a ladder; k_max means "at least k_max".

    The empty graph has no vertices to form even an order-1 witness and
    yields 0; any nonempty graph has order >= 1 via a_1 = b_1.
    """
    if k_max < 1:
        raise ValueError("k_max must be positive")
    if g.n == 0:
        return 0
    best = 0
    for k in range(1, k_max + 1):
        if find_ladder(g, k) is None:
            break
        best = k
    return best


def neighborhood_trace_count(g: Graph) -> int:
    """Number of distinct neighborhoods N(v) over all vertices."""
    return len({g.adjacency[v] for v in range(g.n)})
