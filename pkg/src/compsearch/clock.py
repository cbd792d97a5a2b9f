"""Injectable monotonic clock.

Everything time-dependent (rate limiting, completion stamps) goes through
a Clock so tests and timing replays can control the flow of time.
"""

from __future__ import annotations

import time
from typing import Protocol


class Clock(Protocol):
    def now(self) -> float:
        """Seconds on a monotonic axis. Only differences are meaningful."""
        ...

    def sleep(self, seconds: float) -> None:
        ...


class MonotonicClock:
    """Real clock backed by time.monotonic / time.sleep."""

    def now(self) -> float:
        return time.monotonic()

    def sleep(self, seconds: float) -> None:
        if seconds > 0:
            time.sleep(seconds)


class Stopwatch:
    """A clock plus the instant the run started.

    Completion stamps are reported as seconds elapsed since that instant,
    which is the time axis used by all telemetry.
    """

    def __init__(self, clock: Clock):
        self.clock = clock
        self.started_at = clock.now()

    def elapsed(self) -> float:
        return self.clock.now() - self.started_at
