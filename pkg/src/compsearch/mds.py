"""Concurrent dispatch of one query across every selected database.

Each database gets a worker thread that walks its result pages, harvests
source links, and stamps a completion time from the shared stopwatch.
Output order always matches catalog order regardless of which worker
finishes first.
"""

from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from urllib.parse import quote, urljoin

from .catalog import PAGE_PLACEHOLDER, QUERY_PLACEHOLDER, DatabaseDescriptor
from .clock import Stopwatch
from .diagnostics import DATABASE_SCOPE, FETCH_SCOPE, Diagnostics
from .errors import FetchError, InvalidPattern
from .fetch import PageFetcher
from .query import Query


@dataclass(frozen=True)
class LinkSet:
    """All source links one database produced for a query."""

    database_name: str
    urls: tuple[str, ...]
    completed_at_seconds: float


def format_search_url(descriptor: DatabaseDescriptor, query: Query, page: int | None = None) -> str:
    """Builds the concrete results URL for one database.

    Keywords are percent-encoded individually and joined with '+'. A page
    number may only be supplied when the template carries the page
    placeholder.
    """
    encoded = "+".join(quote(kw, safe="") for kw in query.keywords)
    url = descriptor.query_url_template.replace(QUERY_PLACEHOLDER, encoded)
    if page is not None:
        if not descriptor.paginated():
            raise ValueError(f"database {descriptor.name!r} has no page placeholder")
        url = url.replace(PAGE_PLACEHOLDER, str(page))
    return url


def harvest_links(body: str, link_pattern: str, base_url: str) -> tuple[str, ...]:
    """Pulls source URLs out of a result page body.

    Every match contributes capture group 1, resolved against the page
    URL. Order of first appearance is kept; repeats are dropped.
    """
    try:
        compiled = re.compile(link_pattern)
    except re.error as exc:
        raise InvalidPattern(f"link pattern does not compile: {exc}") from exc
    if compiled.groups < 1:
        raise InvalidPattern("link pattern needs a capture group for the URL")
    seen: dict[str, None] = {}
    for match in compiled.finditer(body):
        href = match.group(1)
        if not href:
            continue
        seen.setdefault(urljoin(base_url, href), None)
    return tuple(seen)


def extract_links(page, link_pattern: str, base_url: str | None = None) -> tuple[str, ...]:
    return harvest_links(page.body, link_pattern, base_url if base_url is not None else page.url)


def _collect_database(
    descriptor: DatabaseDescriptor,
    query: Query,
    fetcher: PageFetcher,
    stopwatch: Stopwatch,
    diagnostics: Diagnostics,
) -> LinkSet:
    pages = descriptor.result_page_limit if descriptor.paginated() else 1
    seen: dict[str, None] = {}
    for page_number in range(1, pages + 1):
        page_arg = page_number if descriptor.paginated() else None
        url = format_search_url(descriptor, query, page_arg)
        try:
            page = fetcher.fetch_page(url, rate_limit_ms=descriptor.rate_limit_ms)
        except FetchError as exc:
            if page_number == 1 and not exc.missing:
                diagnostics.record(DATABASE_SCOPE, descriptor.name, str(exc))
            else:
                diagnostics.record(FETCH_SCOPE, url, str(exc))
            break
        links = harvest_links(page.body, descriptor.link_pattern, page.url)
        if not links:
            break
        for link in links:
            seen.setdefault(link, None)
    return LinkSet(
        database_name=descriptor.name,
        urls=tuple(seen),
        completed_at_seconds=stopwatch.elapsed(),
    )


def run_mds(
    query: Query,
    descriptors: list[DatabaseDescriptor],
    fetcher: PageFetcher,
    stopwatch: Stopwatch | None = None,
    diagnostics: Diagnostics | None = None,
) -> list[LinkSet]:
    """Searches every database concurrently, returning catalog-order results.

    A database whose first result page is missing contributes an empty
    link set and a fetch diagnostic; one whose first page fails outright
    is flagged at database scope so callers can tell degradation from
    total loss.
    """
    if stopwatch is None:
        stopwatch = Stopwatch(fetcher.clock)
    if diagnostics is None:
        diagnostics = Diagnostics()
    if not descriptors:
        return []
    with ThreadPoolExecutor(max_workers=len(descriptors)) as pool:
        futures = [
            pool.submit(_collect_database, d, query, fetcher, stopwatch, diagnostics)
            for d in descriptors
        ]
        return [f.result() for f in futures]
