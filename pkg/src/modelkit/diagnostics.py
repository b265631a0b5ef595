"""Diagnostics shared by every layer.

Checks accumulate diagnostics instead of aborting, so one run reports
everything it can find.  Codes are short stable identifiers; the full
catalog is documented in README.md.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class SourceSpan:
    """1-based position of a construct inside an input file."""

    file: str
    line: int
    column: int = 1


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    span: Optional[SourceSpan] = None
    subject: Optional[str] = None  # id/name of the offending element, for tooling

    def format(self) -> str:
        """Render as one report line: `severity code file:line:col message`."""
        if self.span is not None:
            loc = f"{self.span.file}:{self.span.line}:{self.span.column}"
        else:
            loc = "-"
        return f"{self.severity.value} {self.code} {loc} {self.message}"


def error(code: str, message: str, span: SourceSpan | None = None,
          subject: str | None = None) -> Diagnostic:
    return Diagnostic(Severity.ERROR, code, message, span, subject)


def warning(code: str, message: str, span: SourceSpan | None = None,
            subject: str | None = None) -> Diagnostic:
    return Diagnostic(Severity.WARNING, code, message, span, subject)


def has_errors(diagnostics: Iterable[Diagnostic]) -> bool:
    return any(d.severity is Severity.ERROR for d in diagnostics)


# Codes emitted by parsers (as opposed to model-level validation); the CLI
# maps these to its usage/parse exit status.
SYNTAX_CODES = frozenset({
    "syntax",
    "unsupported-construct",
    "bad-value",
    "dup-object",
    "dup-slot",
    "unknown-object",
    "dup-constraint",
})
