"""Exception hierarchy shared by all modules."""


class ProgExploreError(Exception):
    """Base class for all errors raised by this package."""


class InputError(ProgExploreError, ValueError):
    """Invalid argument or malformed input data."""


class ParseError(InputError):
    """Malformed textual input; carries a location when known."""

    def __init__(self, message, line=None, pointer=None):
        loc = ""
        if line is not None:
            loc = f" (line {line})"
        elif pointer is not None:
            loc = f" (at {pointer})"
        super().__init__(message + loc)
        self.line = line
        self.pointer = pointer


class ResourceBudgetError(ProgExploreError, RuntimeError):
    """A computation exceeded its explicit budget; never a wrong answer."""


class SplitterBudgetError(ResourceBudgetError):
    """The pre-core recursion ran out of splitter-game depth budget."""


class ContractViolationError(ProgExploreError, RuntimeError):
    """A pluggable component (e.g. a splitter strategy) broke its contract."""


class InternalInvariantError(ProgExploreError, RuntimeError):
    """An invariant that should hold by construction was violated."""
