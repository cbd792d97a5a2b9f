"""Page fetching with per-host rate limiting and an injected clock.

http(s) URLs go over the network; file: URLs read local fixture documents
so whole runs can execute offline. Bodies are decoded as UTF-8 with lossy
replacement, never guessed.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from urllib.parse import unquote, urlsplit

import requests

from .clock import Clock, MonotonicClock
from .errors import FetchFailed, FetchTimeout

DEFAULT_USER_AGENT = "compsearch/0.1"
DEFAULT_TIMEOUT_MS = 10_000


@dataclass(frozen=True)
class FetchedPage:
    url: str
    body: str
    fetched_at: float


class HostRateLimiter:
    """Serializes fetch starts per host with a minimum interval.

    acquire() reserves the next slot under the lock, then sleeps outside
    it, so concurrent callers to one host line up without blocking
    callers to other hosts.
    """

    def __init__(self, clock: Clock):
        self._clock = clock
        self._next_free: dict[str, float] = {}
        self._lock = threading.Lock()

    def acquire(self, host: str, interval_seconds: float) -> None:
        if interval_seconds <= 0:
            return
        with self._lock:
            now = self._clock.now()
            start_at = max(now, self._next_free.get(host, now))
            self._next_free[host] = start_at + interval_seconds
            wait = start_at - now
        if wait > 0:
            self._clock.sleep(wait)


class PageFetcher:
    """Fetches pages, enforcing rate limits per host.

    allowed_schemes, when set, rejects any other scheme before contacting
    anything; fixture runs use {"file"} as a no-network guarantee.
    """

    def __init__(
        self,
        clock: Clock | None = None,
        user_agent: str = DEFAULT_USER_AGENT,
        timeout_ms: int = DEFAULT_TIMEOUT_MS,
        allowed_schemes: set[str] | None = None,
    ):
        self.clock = clock or MonotonicClock()
        self.user_agent = user_agent
        self.timeout_ms = timeout_ms
        self.allowed_schemes = allowed_schemes
        self._limiter = HostRateLimiter(self.clock)

    def fetch_page(self, url: str, rate_limit_ms: int = 0, timeout_ms: int | None = None) -> FetchedPage:
        parts = urlsplit(url)
        scheme = parts.scheme.lower()
        if self.allowed_schemes is not None and scheme not in self.allowed_schemes:
            raise FetchFailed(url, f"scheme {scheme!r} not allowed in this mode")
        self._limiter.acquire(f"{scheme}://{parts.netloc}", rate_limit_ms / 1000.0)
        if scheme == "file":
            body = self._read_file(url, parts)
        elif scheme in ("http", "https"):
            body = self._read_http(url, timeout_ms or self.timeout_ms)
        else:
            raise FetchFailed(url, f"unsupported scheme {scheme!r}")
        return FetchedPage(url=url, body=body, fetched_at=self.clock.now())

    def _read_file(self, url: str, parts) -> str:
        if parts.netloc not in ("", "localhost"):
            raise FetchFailed(url, f"file URL with host {parts.netloc!r} is not local")
        path = unquote(parts.path)
        try:
            with open(path, "rb") as fh:
                raw = fh.read()
        except FileNotFoundError:
            raise FetchFailed(url, "file not found", missing=True) from None
        except IsADirectoryError:
            raise FetchFailed(url, "path is a directory", missing=True) from None
        except OSError as exc:
            raise FetchFailed(url, f"cannot read file: {exc}") from exc
        return raw.decode("utf-8", errors="replace")

    def _read_http(self, url: str, timeout_ms: int) -> str:
        try:
            resp = requests.get(
                url,
                headers={"User-Agent": self.user_agent},
                timeout=timeout_ms / 1000.0,
            )
        except requests.Timeout:
            raise FetchTimeout(url, timeout_ms) from None
        except requests.RequestException as exc:
            raise FetchFailed(url, f"transport error: {exc}") from exc
        if resp.status_code in (404, 410):
            raise FetchFailed(url, f"status {resp.status_code}", missing=True)
        if resp.status_code >= 400:
            raise FetchFailed(url, f"status {resp.status_code}")
        return resp.content.decode("utf-8", errors="replace")


class RecordingFetcher(PageFetcher):
    """PageFetcher that keeps every fetched body, keyed by URL.

    The link-graph builder needs the bodies of all analyzed sources
    without fetching anything twice.
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.pages: dict[str, str] = {}
        self._pages_lock = threading.Lock()

    def fetch_page(self, url: str, rate_limit_ms: int = 0, timeout_ms: int | None = None) -> FetchedPage:
        page = super().fetch_page(url, rate_limit_ms, timeout_ms)
        with self._pages_lock:
            self.pages[page.url] = page.body
        return page
