"""
Diagnostics printed by the command line.

A diagnostic is built from a ``KernelError`` and renders as
``file:line:col: error[CODE]: message``; a counterexample substitution, when
the error carries one, follows on an indented line.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from cubik.errors import KernelError
from cubik.surface import line_col, pretty


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    file: str
    line: int
    col: int
    code: str
    message: str
    counterexample: Optional[Mapping[str, object]] = None

    @classmethod
    def from_error(cls, error: KernelError, file: str, text: str = "", severity: str = "error"):
        offset = error.span[0] if error.span else 0
        line, col = line_col(text, offset)
        return cls(severity, file, line, col, error.code, error.message, error.substitution or None)

    def format(self):
        head = f"{self.file}:{self.line}:{self.col}: {self.severity}[{self.code}]: {self.message}"
        if not self.counterexample:
            return head
        witness = ", ".join(f"{name} := {pretty(value)}" for name, value in sorted(self.counterexample.items()))
        return f"{head}\n  counterexample: {witness}"

    def __str__(self):
        return self.format()
