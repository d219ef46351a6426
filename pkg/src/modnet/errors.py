"""Exception hierarchy shared by every modnet module."""


class ModnetError(Exception):
    """Base class for all modnet errors."""


class InputAgent(ModnetError, ValueError):
    """Raised when asking for the next value of an input (frozen) agent."""


class DuplicateDefinition(ModnetError, ValueError):
    pass


class TooManyAgents(ModnetError, ValueError):
    pass


class LengthMismatch(ModnetError, ValueError):
    pass


class UnknownAgent(ModnetError, KeyError):
    pass


class NetworkSyntaxError(ModnetError, ValueError):
    """Syntax error in network source text.

    Carries the 1-based ``line`` and ``column`` of the offending token and the
    set of token kinds that would have been accepted there.
    """

    def __init__(self, line, column, expected, found=None):
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        self.found = found
        exp = ", ".join(sorted(self.expected))
        msg = f"line {line}, column {column}: expected one of {{{exp}}}"
        if found is not None:
            msg += f", found {found!r}"
        super().__init__(msg)


class CarrierNotClosed(ModnetError, ValueError):
    pass


class NotAPartition(ModnetError, ValueError):
    pass


class IndexOutOfRange(ModnetError, IndexError):
    pass


class OverlappingAgentSets(ModnetError, ValueError):
    pass


class PartitionNotValidated(ModnetError, ValueError):
    pass


class BudgetExceeded(ModnetError, ValueError):
    """A brute-force search was refused because the part is too large."""
