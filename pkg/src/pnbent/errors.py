"""Exception hierarchy shared across the package."""


class PnBentError(Exception):
    """Base class for every error raised by pnbent."""


class InvalidParameterError(PnBentError, ValueError):
    pass


class NotAGroupError(PnBentError):
    """A Cayley table violates a group axiom; ``witness`` names the culprit."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class WrongKindError(PnBentError):
    """An operation was given a group of the wrong kind (Abelian vs not)."""


class UnsupportedStructureError(PnBentError):
    pass


class DimensionError(PnBentError, ValueError):
    pass


class CompletenessError(PnBentError):
    pass


class TooLargeError(PnBentError):
    pass


class ParseError(PnBentError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DualVerificationError(PnBentError):
    """A dual table failed verification; the full report is attached."""

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report
