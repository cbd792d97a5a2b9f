import pathlib
import threading

import pytest

REPO_ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"


class FakeClock:
    """Deterministic clock: sleep() advances now() instead of blocking."""

    def __init__(self, start: float = 0.0):
        self._now = start
        self._lock = threading.RLock()
        self.sleeps: list[float] = []

    def now(self) -> float:
        with self._lock:
            return self._now

    def sleep(self, seconds: float) -> None:
        with self._lock:
            self.sleeps.append(seconds)
            self._now += seconds

    def advance(self, seconds: float) -> None:
        with self._lock:
            self._now += seconds


@pytest.fixture
def fake_clock():
    return FakeClock()
