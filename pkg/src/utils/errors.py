"""
Exception hierarchy for fptmc

Library code raises these; only the CLI turns them into exit codes.
"""

EXIT_YES = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_GUARD = 3


class FptmcError(Exception):
    """Base class for all fptmc errors."""

    exit_code = EXIT_USAGE


class InputError(FptmcError):
    """Malformed or inconsistent input (structure, formula, file)."""


class ArityMismatch(InputError):
    pass


class ElementOutOfRange(InputError):
    pass


class EmptyUniverse(InputError):
    pass


class NotAGraph(InputError):
    pass


class UnknownRelation(InputError):
    pass


class VocabularyMismatch(InputError):
    pass


class FormatError(InputError):
    """A text file does not follow its line format."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FormulaSyntaxError(InputError):
    """Formula text rejected by the grammar."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class NotPrenex(InputError):
    pass


class NotPrenexNNF(InputError):
    pass


class NotSigma1(InputError):
    pass


class NotPositive(InputError):
    pass


class NotBounded(InputError):
    pass


class NotNormalized(InputError):
    pass


class UnboundVariable(InputError):
    pass


class ArityBoundExceeded(InputError):
    pass


class UnsupportedAlternation(InputError):
    pass


class StuckUniversal(InputError):
    """A universal configuration has no successor."""


class KTooLarge(InputError):
    pass


class InvalidDecomposition(InputError):
    pass


class ElementNotCovered(InvalidDecomposition):
    pass


class TupleNotCovered(InvalidDecomposition):
    pass


class DisconnectedOccurrence(InvalidDecomposition):
    pass


class ResourceGuard(FptmcError):
    """A configured size guard was tripped."""

    exit_code = EXIT_GUARD


class TooLarge(ResourceGuard):
    pass


class DNFBlowup(ResourceGuard):
    pass


class TooManyVariables(ResourceGuard):
    pass


class InfeasibleDeterministic(ResourceGuard):
    pass


def check_guard(count, limit, what):
    """
    Raise TooLarge when a candidate count exceeds its limit

    Args:
        count (int): Number of candidates the caller is about to enumerate
        limit (int | None): Configured ceiling, None when the guard is lifted
        what (str): Short description used in the message
    """
    if limit is not None and count > limit:
        raise TooLarge(f"{what}: {count} candidates exceed the limit of {limit}")
