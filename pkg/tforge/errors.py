"""Exception types raised by the synthesis pipeline."""


class TForgeError(ValueError):
    """Base class for synthesis and verification failures."""


class UnresolvedPlaceholderError(TForgeError):
    """An SQ1 placeholder reached an operation that needs primitives only."""

    def __init__(self, message: str = "unresolved single-qubit placeholder"):
        super().__init__(message)


class CircuitParseError(TForgeError):
    """A text file (circuit, state, table) could not be parsed."""

    def __init__(self, message: str, line: int = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotDiagonalError(TForgeError):
    """A circuit leaked amplitude off the expected basis product."""

    def __init__(self, message: str = "not diagonal"):
        super().__init__(message)


class PrecisionUnreachableError(TForgeError):
    """No word within the search depth meets the requested precision."""

    def __init__(self, message: str = "precision unreachable"):
        super().__init__(message)


class FlatteningFailedError(TForgeError):
    """Randomised sign search did not reach the overlap floor."""

    def __init__(self, message: str = "flattening failed"):
        super().__init__(message)


class FlagAmplitudeError(TForgeError):
    """The flagged amplitude cannot be amplified within the round cap."""

    def __init__(self, message: str = "flag amplitude too small"):
        super().__init__(message)


class WordOverflowError(TForgeError):
    """An H/T word is longer than the padded table width."""
