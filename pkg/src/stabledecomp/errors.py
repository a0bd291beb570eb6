"""Exception types shared across the library.

Every error that a caller can provoke through bad input or exceeded caps
has its own class, so CLI and tests can map failures to exit codes without
string matching.
"""


class StableDecompError(Exception):
    """Base class for all library errors."""


class ParseError(StableDecompError):
    """Malformed text input; carries a 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidEdge(StableDecompError):
    """Loop, duplicate, unordered, or out-of-range edge in graph input."""


class DomainMismatch(StableDecompError):
    """Two partitions (or a partition and a graph) cover different domains."""


class SignatureMismatch(StableDecompError):
    """Structures do not share the same relation-name sets."""


class TooLarge(StableDecompError):
    """Input exceeds a configured exactness cap."""


class Disconnected(StableDecompError):
    """Operation requires a connected nonempty graph."""


class NotASubset(StableDecompError):
    """A vertex sequence leaves the expected domain."""


class NotALeaf(StableDecompError):
    """A queried vertex is not a leaf of the model tree."""


class LeafMismatch(StableDecompError):
    """Model leaves do not coincide with the graph's vertex set."""


class EmptyFamily(StableDecompError):
    """No dicing qualifies within the configured parameter budget."""


class IndexTooLarge(StableDecompError):
    """A partition's block count exceeds the flip-enumeration cap."""


class Malformed(StableDecompError):
    """A decomposition structure violates a structural invariant."""


class NotInClass(StableDecompError):
    """Graph does not admit a connection model within the given budgets."""
