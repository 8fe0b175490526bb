"""Exception hierarchy shared by the whole engine.

The CLI maps these to exit codes: InputError -> 2, everything else -> 1.
"""


class EngineError(Exception):
    """Base class for all errors raised by supercech."""


class InputError(EngineError):
    """Malformed user input (files, flags, descriptors)."""


class InvariantViolation(EngineError):
    """An internal structural invariant failed; names the violated invariant."""


class NotContained(EngineError):
    """subquotient(Z, B) was called with B not contained in Z."""


class NotUnipotent(EngineError):
    """log() applied to a matrix whose exterior-degree-0 part is not the identity."""


class NotInFiltration(EngineError):
    """A cocycle layer was requested below the filtration level of its log."""


class WindowTooSmall(InputError):
    """A fixed Laurent-exponent window cannot hold the requested complex.

    Raised for explicitly supplied windows only; automatic windows enlarge
    themselves instead.
    """


class NoConnection(EngineError):
    """A connection-dependent construction was applied to an obstructed bundle."""
