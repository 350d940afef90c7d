"""Exception types shared across the package."""


class MfembedError(Exception):
    """Base class for all library errors."""


class InvariantViolation(MfembedError):
    """A structural invariant that must hold by construction was violated."""


class DisconnectedGraph(MfembedError):
    """Operation requires a connected graph."""


class NoEdges(MfembedError):
    """Operation requires at least one edge."""


class BadSize(MfembedError):
    """Generator size parameters out of range."""


class ParseError(MfembedError):
    """Malformed graph file. Carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InvalidPartition(MfembedError):
    """Parts are not disjoint, are empty, or do not cover the vertex set."""


class EdgeNotInGraph(MfembedError):
    """A path step refers to a nonexistent edge."""


class PreconditionViolation(MfembedError):
    """Caller violated a documented precondition."""


class BadEpsilon(MfembedError):
    """Accuracy parameter outside (0, 1) or derived parameters degenerate."""


class PairOutOfRange(MfembedError):
    """Evaluation pair is out of range or degenerate."""


class CyclicParentArray(MfembedError):
    """Parent array does not describe a forest."""


class EmptyPacking(MfembedError):
    """No usable balanced cut could be collected."""
