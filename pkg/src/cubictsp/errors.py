"""Exception types shared across the package."""


class CubicTSPError(Exception):
    """Base class for all errors raised by this package."""


class GraphFormatError(CubicTSPError, ValueError):
    """Malformed graph6 / edge-list text.

    ``offset`` is a byte offset (graph6) or a 1-based line number (edge-list).
    """

    def __init__(self, message: str, offset: int | None = None, kind: str = "byte"):
        self.offset = offset
        self.kind = kind
        if offset is not None:
            message = f"{message} (at {kind} {offset})"
        super().__init__(message)


class UnsupportedFormatError(CubicTSPError, ValueError):
    pass


class CapabilityError(CubicTSPError):
    """A desk-scale limit was exceeded."""


class ContractError(CubicTSPError, ValueError):
    """A documented precondition does not hold for the given input."""


class InvariantError(CubicTSPError, AssertionError):
    """Something that should be impossible on valid input happened.

    ``witness`` carries whatever data helps reproduce the failure.
    """

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class StaleCandidateError(CubicTSPError):
    """A swap candidate whose preconditions no longer hold."""
