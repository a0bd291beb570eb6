"""Partitions of integer domains and their coarsest common refinement."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import DomainMismatch


@dataclass(frozen=True)
class Partition:
    """Partition of a finite set of integers into disjoint nonempty blocks.

    Blocks are kept in a canonical order (sorted by their sorted element
    tuples) so that equal partitions compare and hash equal.
    """

    blocks: tuple[frozenset[int], ...]

    def __post_init__(self):
        seen = set()
        for b in self.blocks:
            if not b:
                raise ValueError("empty block")
            if seen & b:
                raise ValueError("blocks overlap")
            seen |= b
        canon = tuple(sorted(self.blocks, key=lambda b: tuple(sorted(b))))
        object.__setattr__(self, "blocks", canon)

    @staticmethod
    def of(blocks) -> "Partition":
        return Partition(tuple(frozenset(b) for b in blocks))

    @staticmethod
    def singletons(domain) -> "Partition":
        return Partition(tuple(frozenset([x]) for x in sorted(domain)))

    @staticmethod
    def trivial(domain) -> "Partition":
        """One block covering the whole (nonempty) domain; empty if domain is."""
        domain = frozenset(domain)
        return Partition((domain,) if domain else ())

    @cached_property
    def domain(self) -> frozenset[int]:
        out = set()
        for b in self.blocks:
            out |= b
        return frozenset(out)

    @cached_property
    def block_of(self) -> dict[int, int]:
        """Element to block index (into .blocks)."""
        return {x: i for i, b in enumerate(self.blocks) for x in b}

    @property
    def index(self) -> int:
        """Number of blocks."""
        return len(self.blocks)

    def block_containing(self, x: int) -> frozenset[int]:
        return self.blocks[self.block_of[x]]

    def same_block(self, x: int, y: int) -> bool:
        return self.block_of[x] == self.block_of[y]

    def refines(self, other: "Partition") -> bool:
        """Every block of self lies inside a block of other."""
        if self.domain != other.domain:
            raise DomainMismatch("partitions cover different domains")
        where = other.block_of
        return all(len({where[x] for x in b}) == 1 for b in self.blocks)

    def restrict(self, subdomain) -> "Partition":
        """Restriction to a subset of the domain; empty intersections drop."""
        sub = frozenset(subdomain)
        if not sub <= self.domain:
            raise DomainMismatch("restriction target is not a subset")
        return Partition(tuple(b & sub for b in self.blocks if b & sub))

    def key(self) -> tuple[tuple[int, ...], ...]:
        """Hashable canonical form, convenient for dict keys and sorting."""
        return tuple(tuple(sorted(b)) for b in self.blocks)


def common_refinement(p: Partition, q: Partition) -> Partition:
    """Coarsest partition refining both: all nonempty pairwise intersections."""
    if p.domain != q.domain:
        raise DomainMismatch("partitions cover different domains")
    out = []
    for a in p.blocks:
        for b in q.blocks:
            c = a & b
            if c:
                out.append(c)
    return Partition(tuple(out))


def refine_all(parts) -> Partition:
    """Coarsest common refinement of a nonempty iterable of partitions."""
    parts = list(parts)
    if not parts:
        raise ValueError("need at least one partition")
    acc = parts[0]
    for p in parts[1:]:
        acc = common_refinement(acc, p)
    return acc
