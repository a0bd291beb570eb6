"""Dicings: partition pairs making cross-part adjacency label-determined.

A dicing of a graph is a pair (component partition P, label partition L)
together with a symmetric relation z over label blocks such that two
vertices in different P-blocks are adjacent exactly when their label
blocks form a z-pair.  The family oracle enumerates neighborhood label
partitions of small parameter sets, flips the graph by candidate z's, and
keeps the dicings whose flip components all stay in the next-lower
connection-model class.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

from .connection_models import in_class
from .errors import DomainMismatch, EmptyFamily, TooLarge
from .graphs import Graph, bits
from .partitions import Partition

DICING_CAP = 12
Z_PAIR_CAP = 16
FAMILY_WARN = 64

BlockPair = frozenset  # frozenset of one or two label blocks


@dataclass(frozen=True)
class Dicing:
    """A validated dicing with its normalized witnessing relation."""

    components: Partition
    labels: Partition
    z: frozenset[BlockPair]

    @property
    def order(self) -> int:
        return self.labels.index


def validate_dicing(g: Graph, p: Partition, l: Partition):
    """Normalized witness z, or None when no consistent z exists.

    Label-block pairs never realized by a cross-component vertex pair are
    normalized to absent, so the witness is unique on its support.
    """
    full = frozenset(range(g.n))
    if p.domain != full or l.domain != full:
        raise DomainMismatch("partitions must cover the vertex set")
    verdict: dict[frozenset, bool] = {}
    pb, lb = p.block_of, l.block_of
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if pb[u] == pb[v]:
                continue
            key = frozenset((l.blocks[lb[u]], l.blocks[lb[v]]))
            e = g.has_edge(u, v)
            if verdict.setdefault(key, e) != e:
                return None
    return frozenset(k for k, e in verdict.items() if e)


def neighborhood_partition(g: Graph, s) -> Partition:
    """Vertices grouped by identical neighborhoods inside s."""
    smask = 0
    for v in s:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
        smask |= 1 << v
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(g.adjacency[v] & smask, []).append(v)
    return Partition.of(groups.values())


def find_label_set(g: Graph, dicing: Dicing, s_max: int):
    """Minimum-cardinality s whose neighborhood partition re-witnesses the dicing.

    Searches subsets in increasing size, then lexicographic order; None
    when nothing within the budget works.
    """
    if validate_dicing(g, dicing.components, dicing.labels) is None:
        raise ValueError("dicing is not valid for this graph")
    for size in range(0, min(s_max, g.n) + 1):
        for s in itertools.combinations(range(g.n), size):
            if validate_dicing(g, dicing.components, neighborhood_partition(g, s)) is not None:
                return frozenset(s)
    return None


def flip_graph(g: Graph, l: Partition, z) -> Graph:
    """Complement adjacency on distinct pairs whose label blocks form a z-pair."""
    if l.domain != frozenset(range(g.n)):
        raise DomainMismatch("label partition must cover the vertex set")
    lb = l.block_of
    zset = frozenset(z)
    edges = set()
    for u in range(g.n):
        for v in range(u + 1, g.n):
            flip = frozenset((l.blocks[lb[u]], l.blocks[lb[v]])) in zset
            if g.has_edge(u, v) != flip:
                edges.add((u, v))
    return Graph(g.n, frozenset(edges))


def component_partition(g: Graph) -> Partition:
    """Blocks are the connected components."""
    return Partition.of(g.components())


def _symmetric_zs(blocks):
    pairs = [
        frozenset((a, b)) for i, a in enumerate(blocks) for b in blocks[i:]
    ]
    for sel in range(1 << len(pairs)):
        yield frozenset(pairs[i] for i in range(len(pairs)) if sel >> i & 1)


def good_dicings(
    g: Graph,
    depth: int,
    label_budget: int,
    s_max: int = 4,
    cap: int = DICING_CAP,
    z_pair_cap: int = Z_PAIR_CAP,
    warn_threshold: int = FAMILY_WARN,
) -> frozenset[Dicing]:
    """Isomorphism-invariant dicing family for the recursive decomposition.

    For parameter sets s of the smallest cardinality that yields any
    acceptable dicing (searched up to s_max), every symmetric z over the
    neighborhood partition of s is applied as a flip; the dicing
    (flip components, neighborhood partition) is accepted when it
    validates and every flip component induces a graph admitting a
    connection model one level down.  Restricting to the minimal
    cardinality keeps the family small on highly symmetric graphs without
    breaking invariance, since the minimal cardinality is itself an
    isomorphism invariant.

    Raises EmptyFamily when no cardinality up to s_max works.
    """
    if depth < 2:
        raise ValueError("dicing families need depth at least 2")
    if g.n > cap:
        raise TooLarge(f"dicing oracle cap is {cap} vertices")
    if g.n == 0:
        raise ValueError("dicing families need a nonempty graph")
    singles = Partition.singletons(range(g.n))
    for size in range(0, min(s_max, g.n) + 1):
        found: dict[tuple, Dicing] = {}
        for s in itertools.combinations(range(g.n), size):
            labels = neighborhood_partition(g, s)
            if depth == 2:
                # components must be singletons, which forces the flip to
                # erase every edge; that works exactly when the label
                # partition alone determines adjacency
                z = validate_dicing(g, singles, labels)
                if z is not None:
                    key = (singles.key(), labels.key())
                    found.setdefault(key, Dicing(singles, labels, z))
                continue
            t = labels.index
            if t * (t + 1) // 2 > z_pair_cap:
                raise TooLarge(
                    f"label partition has {t} blocks; flip enumeration capped"
                )
            for z in _symmetric_zs(labels.blocks):
                flipped = flip_graph(g, labels, z)
                comps = component_partition(flipped)
                zgood = validate_dicing(g, comps, labels)
                if zgood is None:
                    continue
                if all(
                    in_class(g.induced(block), depth - 1, label_budget)
                    for block in comps.blocks
                ):
                    key = (comps.key(), labels.key())
                    found.setdefault(key, Dicing(comps, labels, zgood))
        if found:
            if len(found) > warn_threshold:
                warnings.warn(
                    f"dicing family has {len(found)} members (threshold {warn_threshold})",
                    stacklevel=2,
                )
            return frozenset(found.values())
    raise EmptyFamily(
        f"no dicing with parameter sets of size <= {s_max}; raise s_max"
    )
