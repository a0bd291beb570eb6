"""Finite simple undirected graphs with dense integer vertices.

The text format is: a first line ``n m`` followed by ``m`` lines ``u v``
with ``0 <= u < v < n``, whitespace separated, newline terminated.
External labels never enter the library; vertices are always 0-based
dense indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import InvalidEdge, ParseError


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices ``0 .. n-1``.

    Edges are stored once as ordered pairs ``(u, v)`` with ``u < v``;
    loops are rejected at construction time.
    """

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        for u, v in self.edges:
            if u == v:
                raise InvalidEdge(f"loop at vertex {u}")
            if not 0 <= u < v < self.n:
                raise InvalidEdge(f"edge ({u}, {v}) out of range or unordered")

    @staticmethod
    def of(n: int, pairs=()) -> "Graph":
        """Build a graph, normalizing each pair to (min, max)."""
        norm = set()
        for u, v in pairs:
            if u == v:
                raise InvalidEdge(f"loop at vertex {u}")
            norm.add((u, v) if u < v else (v, u))
        return Graph(n, frozenset(norm))

    @cached_property
    def adjacency(self) -> tuple[int, ...]:
        """Per-vertex neighbor bitmasks."""
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(self.n)

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        return (min(u, v), max(u, v)) in self.edges

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(_bits(self.adjacency[v]))

    def degree(self, v: int) -> int:
        return self.adjacency[v].bit_count()

    def degree_sequence(self) -> tuple[int, ...]:
        return tuple(sorted(self.degree(v) for v in range(self.n)))

    def induced(self, vertices) -> "Graph":
        """Induced subgraph; vertex i of the result is sorted(vertices)[i]."""
        keep = sorted(set(vertices))
        if keep and not 0 <= keep[0] <= keep[-1] < self.n:
            raise ValueError("vertex out of range")
        pos = {v: i for i, v in enumerate(keep)}
        edges = [(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos]
        return Graph.of(len(keep), edges)

    def without(self, v: int) -> "Graph":
        return self.induced([u for u in range(self.n) if u != v])

    def permute(self, perm) -> "Graph":
        """Relabel: vertex v becomes perm[v]."""
        if sorted(perm) != list(range(self.n)):
            raise ValueError("not a permutation")
        return Graph.of(self.n, ((perm[u], perm[v]) for u, v in self.edges))

    def components(self) -> tuple[tuple[int, ...], ...]:
        """Connected components as sorted vertex tuples, ordered by minimum."""
        seen = 0
        out = []
        for v in range(self.n):
            if seen >> v & 1:
                continue
            comp = self.reach_mask(v)
            seen |= comp
            out.append(tuple(_bits(comp)))
        return tuple(out)

    def reach_mask(self, v: int) -> int:
        """Bitmask of the connected component containing v."""
        comp = 1 << v
        frontier = comp
        adj = self.adjacency
        while frontier:
            nxt = 0
            for u in _bits(frontier):
                nxt |= adj[u]
            frontier = nxt & ~comp
            comp |= frontier
        return comp

    def is_connected(self) -> bool:
        return self.n <= 1 or self.reach_mask(0).bit_count() == self.n


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits(mask: int) -> list[int]:
    """Indices of set bits, ascending."""
    return list(_bits(mask))


def graph_from_text(text) -> Graph:
    """Parse the ``n m`` / edge-line format; see module docstring."""
    if isinstance(text, bytes):
        text = text.decode("ascii")
    lines = text.splitlines()
    idx = 0
    while idx < len(lines) and not lines[idx].strip():
        idx += 1
    if idx >= len(lines):
        raise ParseError("empty input", line=1)
    header = lines[idx].split()
    if len(header) != 2:
        raise ParseError("expected 'n m' header", line=idx + 1)
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError("non-integer header", line=idx + 1) from None
    if n < 0 or m < 0:
        raise ParseError("negative counts", line=idx + 1)
    edges = []
    seen = set()
    row = idx + 1
    for _ in range(m):
        while row < len(lines) and not lines[row].strip():
            row += 1
        if row >= len(lines):
            raise ParseError(f"expected {m} edge lines", line=len(lines) + 1)
        parts = lines[row].split()
        if len(parts) != 2:
            raise ParseError("expected 'u v'", line=row + 1)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError("non-integer edge", line=row + 1) from None
        if u == v:
            raise InvalidEdge(f"line {row + 1}: loop at vertex {u}")
        if not 0 <= u < v < n:
            raise InvalidEdge(f"line {row + 1}: edge ({u}, {v}) out of range or unordered")
        if (u, v) in seen:
            raise InvalidEdge(f"line {row + 1}: duplicate edge ({u}, {v})")
        seen.add((u, v))
        edges.append((u, v))
        row += 1
    for extra in range(row, len(lines)):
        if lines[extra].strip():
            raise ParseError("trailing content after edge list", line=extra + 1)
    return Graph(n, frozenset(edges))


def graph_to_text(g: Graph) -> str:
    """Render in the same format graph_from_text accepts."""
    out = [f"{g.n} {g.m}"]
    out.extend(f"{u} {v}" for u, v in sorted(g.edges))
    return "\n".join(out) + "\n"


def empty_graph(n: int) -> Graph:
    return Graph(n, frozenset())


def complete_graph(n: int) -> Graph:
    return Graph.of(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def path_graph(n: int) -> Graph:
    return Graph.of(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return Graph.of(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """Star with center 0 and the given number of leaves."""
    return Graph.of(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.of(a + b, ((i, a + j) for i in range(a) for j in range(b)))


def disjoint_union(*graphs: Graph) -> Graph:
    offset = 0
    n = 0
    edges = []
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.n
        n += g.n
    return Graph.of(n, edges)
