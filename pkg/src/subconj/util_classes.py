"""Utility classes, enums and the exception hierarchy."""

from __future__ import annotations

from enum import Enum


class SubconjError(Exception):
    """Base class of every error raised by the package."""


class InvalidInputError(SubconjError, ValueError):
    """Raised when an input is malformed or an option is out of range."""


class ParseError(InvalidInputError):
    """Raised when a substitution or partition string cannot be parsed."""

    def __init__(self, message: str, *, line: int, column: int, token: str) -> None:
        """Initialize the error.

        Args:
            message: What went wrong.
            line: 1-based line of the offending token.
            column: 1-based column of the offending token.
            token: The offending token.

        """
        super().__init__(f"{message} at line {line}, column {column}: {token!r}")
        self.line = line
        self.column = column
        self.token = token


class UnsupportedError(SubconjError):
    """Raised when an input lies outside the domain the procedures handle."""


class Aperiodicity(str, Enum):
    """Outcome of the aperiodicity test."""

    APERIODIC = "aperiodic-certified-up-to-bound"
    PERIODIC = "periodic"
    UNKNOWN = "unknown"


class Direction(str, Enum):
    """Which inclusion a refuting word breaks."""

    SYSTEM_NOT_IN_CANDIDATE = "X-not-in-X_phi"
    CANDIDATE_NOT_IN_SYSTEM = "X_phi-not-in-X"


class Verdict(str, Enum):
    """Answer to a pairwise conjugacy question."""

    CONJUGATE = "conjugate"
    NOT_CONJUGATE = "not_conjugate"
    UNDECIDED = "undecided"


class Commands(str, Enum):
    """List of accepted commands."""

    ANALYZE = "analyze"
    STD = "std"
    INJECTIVIZE = "injectivize"
    NBLOCK = "nblock"
    LANGUAGE = "language"
    GRAPHS = "graphs"
    EPIS = "epis"
    FACTORS = "factors"
    CONJUGACY = "conjugacy"
    CONJUGATE = "conjugate"
    EVIDENCE = "evidence"


class OutputFormat(str, Enum):
    """Rendering of command output."""

    TEXT = "text"
    JSON = "json"
    DOT = "dot"


class ExitStatus(int, Enum):
    """Process exit codes."""

    OK = 0
    INVALID_INPUT = 2
    UNSUPPORTED = 3
    UNDECIDED = 4
