"""
Exception hierarchy shared by all modules.
Library code raises these; only the CLI maps them to exit codes.
"""

from typing import Optional


class LassoDensityError(Exception):
    """Base class for every error raised by this project."""


# ─── Input Validation ────────────────────────────────────────────────────────

class InputValidationError(LassoDensityError, ValueError):
    """User-supplied input (formula, automaton, alphabet, schedule) is invalid."""


class AlphabetError(InputValidationError):
    pass


class ScheduleError(InputValidationError):
    pass


class FragmentError(InputValidationError):
    """A formula lies outside the syntactic fragment an operation requires."""


class LtlSyntaxError(InputValidationError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class UnknownPropositionError(LtlSyntaxError):
    def __init__(self, name: str, position: int):
        super().__init__(f"Unknown atomic proposition '{name}'", position)
        self.name = name


class AutomatonFormatError(InputValidationError):
    def __init__(self, message: str, line: Optional[int] = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")
        self.line = line


class IncompleteAutomatonError(InputValidationError):
    def __init__(self, state: int, letter: str):
        super().__init__(
            f"Automaton is incomplete: no transition for ({state}, {letter})"
        )
        self.state = state
        self.letter = letter


class DeterminismError(InputValidationError):
    pass


class UnsupportedModeError(InputValidationError):
    """The operation is not available for the automaton's declared mode."""


class AmbiguityError(InputValidationError):
    """An automaton declared unambiguous has a word with two accepting runs."""


# ─── Resources ───────────────────────────────────────────────────────────────

class ResourceCapExceeded(LassoDensityError, RuntimeError):
    def __init__(self, requested: int, cap: int, what: str = "lassos"):
        super().__init__(
            f"Refusing to enumerate {requested} {what}: cap is {cap}. "
            f"Raise it with --cap or LASSO_DENSITY_CAP."
        )
        self.requested = requested
        self.cap = cap


# ─── Inconsistencies ─────────────────────────────────────────────────────────

class InconsistencyError(LassoDensityError, RuntimeError):
    """Two computations that must agree did not."""


class SingularSystemError(InconsistencyError):
    """The absorption system has no unique solution."""
