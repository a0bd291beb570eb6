"""Binary relational structures, ordered structures, and byte encodings.

A structure has a dense integer domain, named unary predicates, named
binary relations, optional named constants, and (internal to the
canonization machinery) a set of true nullary flags.

The text format:

    structure <domain_size>
    U <name> <id ...>
    B <name>
      u v
      ...
    end
    c <name> <id>

The deterministic byte encoding of an ordered structure is designed so
that byte-wise comparison of two same-signature encodings coincides with
the structural comparison implemented by :func:`compare_ordered`:
first by domain size, then by the true-flag name list, then per relation
section by lexicographic comparison of sorted order-index tuple lists,
where a shorter list that is a prefix of a longer one comes first.

Concretely::

    encoding := size(8B BE) | flag_count(1B) | flag* | section*
    flag     := name_len(2B BE) | name bytes                (ascending)
    section  := name_len(2B BE) | name | kind(1B) | (0x01 tuple)* | 0x00
    tuple    := arity x 8B BE order index

with kind 0 for constants (arity 1), 1 for unary (arity 1), 2 for binary
(arity 2), and sections ordered by (name bytes, kind).  The 0x00 list
terminator sorts before the 0x01 tuple marker, which realizes the
shorter-prefix-first rule under plain byte comparison.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property

from .errors import ParseError, SignatureMismatch

_RESERVED = "\x1f"  # separator used in derived relation names


def _check_name(name: str):
    if not name or any(ch.isspace() for ch in name):
        raise ValueError(f"bad relation name {name!r}")
    if _RESERVED in name:
        raise ValueError("relation names may not contain the reserved separator")


@dataclass(frozen=True)
class BinaryStructure:
    """Relational structure with unary predicates and binary relations.

    Fields are stored as sorted tuples so instances are hashable; use
    :meth:`of` to build from dicts and the ``*_map`` views to read back.
    """

    domain_size: int
    unary: tuple[tuple[str, frozenset[int]], ...] = ()
    binary: tuple[tuple[str, frozenset[tuple[int, int]]], ...] = ()
    constants: tuple[tuple[str, int], ...] = ()
    flags: frozenset[str] = frozenset()

    def __post_init__(self):
        if self.domain_size < 0:
            raise ValueError("domain size must be nonnegative")
        for name, elems in self.unary:
            _check_name(name)
            if any(not 0 <= e < self.domain_size for e in elems):
                raise ValueError(f"unary {name}: element out of range")
        for name, pairs in self.binary:
            _check_name(name)
            for a, b in pairs:
                if not (0 <= a < self.domain_size and 0 <= b < self.domain_size):
                    raise ValueError(f"binary {name}: pair out of range")
        for name, e in self.constants:
            _check_name(name)
            if not 0 <= e < self.domain_size:
                raise ValueError(f"constant {name}: element out of range")
        for kind in (self.unary, self.binary, self.constants):
            names = [name for name, _ in kind]
            if len(names) != len(set(names)):
                raise ValueError("duplicate relation name within a kind")
        object.__setattr__(self, "unary", tuple(sorted(self.unary)))
        object.__setattr__(self, "binary", tuple(sorted(self.binary)))
        object.__setattr__(self, "constants", tuple(sorted(self.constants)))

    @staticmethod
    def of(domain_size, unary=None, binary=None, constants=None, flags=()) -> "BinaryStructure":
        return BinaryStructure(
            domain_size,
            tuple((k, frozenset(v)) for k, v in (unary or {}).items()),
            tuple((k, frozenset(tuple(p) for p in v)) for k, v in (binary or {}).items()),
            tuple((constants or {}).items()),
            frozenset(flags),
        )

    @cached_property
    def unary_map(self) -> dict[str, frozenset[int]]:
        return dict(self.unary)

    @cached_property
    def binary_map(self) -> dict[str, frozenset[tuple[int, int]]]:
        return dict(self.binary)

    @cached_property
    def constant_map(self) -> dict[str, int]:
        return dict(self.constants)

    def signature(self):
        return (
            tuple(name for name, _ in self.unary),
            tuple(name for name, _ in self.binary),
            tuple(name for name, _ in self.constants),
        )

    def permute(self, perm) -> "BinaryStructure":
        """Relabel elements: element e becomes perm[e]."""
        if sorted(perm) != list(range(self.domain_size)):
            raise ValueError("not a permutation")
        return BinaryStructure(
            self.domain_size,
            tuple((n, frozenset(perm[e] for e in s)) for n, s in self.unary),
            tuple((n, frozenset((perm[a], perm[b]) for a, b in s)) for n, s in self.binary),
            tuple((n, perm[e]) for n, e in self.constants),
            self.flags,
        )

    def substructure(self, elements) -> "BinaryStructure":
        """Induced substructure on sorted(elements), reindexed densely.

        Constants whose element is dropped are removed; flags carry over
        unchanged.
        """
        keep = sorted(set(elements))
        pos = {e: i for i, e in enumerate(keep)}
        return BinaryStructure(
            len(keep),
            tuple((n, frozenset(pos[e] for e in s if e in pos)) for n, s in self.unary),
            tuple(
                (n, frozenset((pos[a], pos[b]) for a, b in s if a in pos and b in pos))
                for n, s in self.binary
            ),
            tuple((n, pos[e]) for n, e in self.constants if e in pos),
            self.flags,
        )


@dataclass(frozen=True)
class OrderedStructure:
    """A structure together with a total order on its domain."""

    structure: BinaryStructure
    order: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.order) != list(range(self.structure.domain_size)):
            raise ValueError("order is not a permutation of the domain")


class Order(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _fold_constants(m: BinaryStructure) -> BinaryStructure:
    """View constants as singleton unary predicates for canonical purposes."""
    if not m.constants:
        return m
    unary = dict(m.unary)
    for name, e in m.constants:
        unary[f"const{_RESERVED}{name}"] = frozenset([e])
    return BinaryStructure(m.domain_size, tuple(unary.items()), m.binary, (), m.flags)


def encode_ordered(a: OrderedStructure) -> bytes:
    """Deterministic bytes; see module docstring for the format."""
    m = _fold_constants(a.structure)
    rank = {e: i for i, e in enumerate(a.order)}
    out = [m.domain_size.to_bytes(8, "big")]
    flags = sorted(m.flags)
    if len(flags) > 255:
        raise ValueError("too many flags to encode")
    out.append(bytes([len(flags)]))
    for name in flags:
        nb = name.encode("utf-8")
        out.append(len(nb).to_bytes(2, "big"))
        out.append(nb)
    sections = [(name, 1, [(rank[e],) for e in s]) for name, s in m.unary]
    sections.extend(
        (name, 2, [(rank[x], rank[y]) for x, y in s]) for name, s in m.binary
    )
    for name, kind, tuples in sorted(sections, key=lambda s: (s[0].encode("utf-8"), s[1])):
        nb = name.encode("utf-8")
        out.append(len(nb).to_bytes(2, "big"))
        out.append(nb)
        out.append(bytes([kind]))
        for tup in sorted(tuples):
            out.append(b"\x01")
            for e in tup:
                out.append(e.to_bytes(8, "big"))
        out.append(b"\x00")
    return b"".join(out)


def compare_ordered(a: OrderedStructure, b: OrderedStructure) -> Order:
    """Total preorder on ordered structures; Equal iff the index map is an isomorphism.

    Comparison is by domain size first, then relation name by relation
    name (ascending) comparing sorted order-index tuple lists
    lexicographically with shorter-prefix-first.  Realized as byte
    comparison of :func:`encode_ordered` outputs.
    """
    if a.structure.signature() != b.structure.signature():
        raise SignatureMismatch("ordered structures have different signatures")
    ea, eb = encode_ordered(a), encode_ordered(b)
    if ea < eb:
        return Order.LESS
    if ea > eb:
        return Order.GREATER
    return Order.EQUAL


def structure_from_text(text) -> BinaryStructure:
    """Parse the structure text format; see module docstring."""
    if isinstance(text, bytes):
        text = text.decode("ascii")
    lines = text.splitlines()
    domain = None
    unary = {}
    binary = {}
    constants = {}
    i = 0
    nlines = len(lines)
    while i < nlines:
        raw = lines[i]
        i += 1
        parts = raw.split()
        if not parts:
            continue
        tag = parts[0]
        if tag == "structure":
            if domain is not None:
                raise ParseError("duplicate structure header", line=i)
            if len(parts) != 2:
                raise ParseError("expected 'structure <domain_size>'", line=i)
            try:
                domain = int(parts[1])
            except ValueError:
                raise ParseError("non-integer domain size", line=i) from None
            continue
        if domain is None:
            raise ParseError("missing 'structure' header", line=i)
        if tag == "U":
            if len(parts) < 2:
                raise ParseError("expected 'U <name> <id ...>'", line=i)
            name = parts[1]
            if name in unary:
                raise ParseError(f"duplicate unary {name}", line=i)
            try:
                unary[name] = frozenset(int(t) for t in parts[2:])
            except ValueError:
                raise ParseError("non-integer element id", line=i) from None
        elif tag == "B":
            if len(parts) != 2:
                raise ParseError("expected 'B <name>'", line=i)
            name = parts[1]
            if name in binary:
                raise ParseError(f"duplicate binary {name}", line=i)
            pairs = set()
            closed = False
            while i < nlines:
                row = lines[i].split()
                i += 1
                if not row:
                    continue
                if row == ["end"]:
                    closed = True
                    break
                if len(row) != 2:
                    raise ParseError("expected 'u v' or 'end'", line=i)
                try:
                    pairs.add((int(row[0]), int(row[1])))
                except ValueError:
                    raise ParseError("non-integer pair", line=i) from None
            if not closed:
                raise ParseError(f"unterminated B {name} block", line=nlines)
            binary[name] = frozenset(pairs)
        elif tag == "c":
            if len(parts) != 3:
                raise ParseError("expected 'c <name> <id>'", line=i)
            name = parts[1]
            if name in constants:
                raise ParseError(f"duplicate constant {name}", line=i)
            try:
                constants[name] = int(parts[2])
            except ValueError:
                raise ParseError("non-integer constant", line=i) from None
        else:
            raise ParseError(f"unknown directive {tag!r}", line=i)
    if domain is None:
        raise ParseError("missing 'structure' header", line=1)
    try:
        return BinaryStructure.of(domain, unary, binary, constants)
    except ValueError as exc:
        raise ParseError(str(exc), line=1) from None


def structure_to_text(m: BinaryStructure) -> str:
    out = [f"structure {m.domain_size}"]
    for name, elems in m.unary:
        out.append(" ".join(["U", name, *map(str, sorted(elems))]))
    for name, pairs in m.binary:
        out.append(f"B {name}")
        out.extend(f"  {a} {b}" for a, b in sorted(pairs))
        out.append("end")
    for name, e in m.constants:
        out.append(f"c {name} {e}")
    return "\n".join(out) + "\n"


def graph_as_structure(g, relation: str = "E") -> BinaryStructure:
    """Graph as a structure with one symmetric binary relation."""
    pairs = set()
    for u, v in g.edges:
        pairs.add((u, v))
        pairs.add((v, u))
    return BinaryStructure.of(g.n, binary={relation: pairs})
