"""Append-only diagnostics sink shared by concurrent pipelines.

Failures never abort a run; they are recorded here and surfaced in the
report. scope says what failed: "fetch" and "source" entries are per-URL,
"database" entries mark a database whose retrieval failed outright.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

DATABASE_SCOPE = "database"
FETCH_SCOPE = "fetch"
EXTRACTION_SCOPE = "extraction"


@dataclass(frozen=True)
class Diagnostic:
    scope: str
    subject: str
    reason: str


class Diagnostics:
    def __init__(self):
        self._items: list[Diagnostic] = []
        self._lock = threading.Lock()

    def record(self, scope: str, subject: str, reason: str) -> None:
        with self._lock:
            self._items.append(Diagnostic(scope, subject, reason))

    def items(self) -> list[Diagnostic]:
        with self._lock:
            return list(self._items)

    def failed_databases(self) -> set[str]:
        return {d.subject for d in self.items() if d.scope == DATABASE_SCOPE}

    def __len__(self) -> int:
        with self._lock:
            return len(self._items)
