"""Exception hierarchy.

Every error raised on bad input derives from both :class:`SymteError` and
:class:`ValueError`, so callers written against scikit-learn conventions
keep working.
"""


class SymteError(Exception):
    """Base class for all package errors."""


class InvalidParameters(SymteError, ValueError):
    pass


class SeriesTooShort(SymteError, ValueError):
    def __init__(self, length, required):
        self.length = length
        self.required = required
        super().__init__(
            f"series of length {length} is too short; at least {required} samples required"
        )


class AlphabetOverflow(SymteError, OverflowError):
    pass


class NoValidM(SymteError, ValueError):
    pass


class TooFewWindows(SymteError, ValueError):
    pass


class LengthMismatch(SymteError, ValueError):
    pass


class TooShort(SymteError, ValueError):
    pass


class EmptyCounts(SymteError, ValueError):
    pass


class ScheduleMismatch(SymteError, ValueError):
    pass


class WindowTooSmall(SymteError, ValueError):
    pass


class DegenerateDynamics(SymteError, RuntimeError):
    pass


class ColumnNotFound(SymteError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class NoUsableRows(SymteError, ValueError):
    pass
