"""Exception types shared across the package.

Naming follows the operation contracts: callers catch these by the
condition they describe, not by module of origin.
"""


class CompsearchError(Exception):
    """Base class for all errors raised by this package."""


class EmptyQuery(CompsearchError):
    """No keyword survived normalization and stop-word filtering."""


class NoDatabaseMatches(CompsearchError):
    """Topic filtering removed every catalog entry."""


class CatalogError(CompsearchError):
    """The catalog file is missing, unreadable, or structurally invalid."""


class InvalidPattern(CompsearchError):
    """A regular expression failed to compile or lacks the required group."""


class FetchError(CompsearchError):
    """Base class for fetch failures. Never aborts a run by itself."""

    def __init__(self, url: str, reason: str, missing: bool = False):
        super().__init__(f"{url}: {reason}")
        self.url = url
        self.reason = reason
        # missing=True means the resource does not exist (404 or absent
        # fixture file), as opposed to a transport or server error.
        self.missing = missing


class FetchFailed(FetchError):
    """The fetch completed abnormally: bad status, unreadable file, transport error."""


class FetchTimeout(FetchError):
    """The fetch exceeded its timeout."""

    def __init__(self, url: str, timeout_ms: int):
        super().__init__(url, f"timed out after {timeout_ms} ms")
        self.timeout_ms = timeout_ms


class EmptyGraph(CompsearchError):
    """A rank operation was asked to work on a graph with no nodes."""


class DuplicateAbscissa(CompsearchError):
    """Two telemetry points share the same time value; the fit is undefined."""


class InsufficientPoints(CompsearchError):
    """Fewer than two points were supplied to an interpolation fit."""


class DegenerateInterval(CompsearchError):
    """An interval or duration with non-positive length."""


class UnknownDatabase(CompsearchError):
    """A timing replay names a database absent from the catalog."""
