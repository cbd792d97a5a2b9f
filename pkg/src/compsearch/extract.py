"""Source analysis: open every harvested link, score it, pull components.

Scoring tokenizes document bodies exactly the way queries are tokenized,
so a keyword matches only as a whole word (a substring switch exists for
databases whose markup glues words together). Extraction itself is pure
regex work driven by per-database rules.
"""

from __future__ import annotations

import re
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from urllib.parse import urljoin

from .catalog import DatabaseDescriptor, ExtractionRule
from .clock import Stopwatch
from .diagnostics import EXTRACTION_SCOPE, FETCH_SCOPE, Diagnostics
from .errors import FetchError, InvalidPattern, UnknownDatabase
from .fetch import FetchedPage, PageFetcher
from .mds import LinkSet
from .query import Query, tokenize
from .telemetry import TelemetryPoint


@dataclass(frozen=True)
class SourceRecord:
    """One analyzed source that survived the relevance filter."""

    url: str
    database_name: str
    relevance_score: float
    proximity_score: float
    components: tuple[tuple[str, str], ...]
    citation: str | None

    def combined_score(self) -> float:
        # proximity is at most 1, so it refines ties between equal
        # keyword counts without ever outranking a higher count
        return self.relevance_score + self.proximity_score


def relevance_score(body: str, query: Query, whole_words: bool = True) -> float:
    """Total number of keyword hits in the body, all keywords weighted equally."""
    if whole_words:
        counts = Counter(tokenize(body))
        return float(sum(counts[kw] for kw in query.keywords))
    lowered = body.lower()
    return float(sum(lowered.count(kw) for kw in query.keywords))


def proximity_score(body: str, query: Query) -> float:
    """1 / w for the smallest token window holding every keyword, 0 if none does."""
    keywords = set(query.keywords)
    if not keywords:
        return 0.0
    tokens = tokenize(body)
    need = len(keywords)
    counts: Counter[str] = Counter()
    have = 0
    best: int | None = None
    left = 0
    for right, token in enumerate(tokens):
        if token in keywords:
            counts[token] += 1
            if counts[token] == 1:
                have += 1
        while have == need:
            width = right - left + 1
            if best is None or width < best:
                best = width
            dropped = tokens[left]
            left += 1
            if dropped in keywords:
                counts[dropped] -= 1
                if counts[dropped] == 0:
                    have -= 1
    return 0.0 if best is None else 1.0 / best


def apply_rule(body: str, rule: ExtractionRule, base_url: str) -> list[tuple[str, str]]:
    """Runs one extraction rule, returning (kind, value) pairs in document order.

    Image values are resolved to absolute URLs against base_url; text
    values are whitespace-normalized. Matches that normalize to nothing
    are skipped and do not count toward max_matches.
    """
    try:
        compiled = re.compile(rule.pattern)
    except re.error as exc:
        raise InvalidPattern(f"extraction pattern does not compile: {exc}") from exc
    if compiled.groups < rule.capture_group:
        raise InvalidPattern(
            f"extraction pattern has {compiled.groups} groups, needs {rule.capture_group}"
        )
    out: list[tuple[str, str]] = []
    for match in compiled.finditer(body):
        value = match.group(rule.capture_group)
        if value is None:
            continue
        if rule.target_kind == "image":
            value = value.strip()
            if not value:
                continue
            value = urljoin(base_url, value)
        else:
            value = " ".join(value.split())
            if not value:
                continue
        out.append((rule.target_kind, value))
        if rule.max_matches is not None and len(out) >= rule.max_matches:
            break
    return out


def extract_citation(body: str, citation_pattern: str) -> str | None:
    try:
        compiled = re.compile(citation_pattern)
    except re.error as exc:
        raise InvalidPattern(f"citation pattern does not compile: {exc}") from exc
    if compiled.groups < 1:
        raise InvalidPattern("citation pattern needs a capture group")
    match = compiled.search(body)
    if match is None:
        return None
    value = " ".join((match.group(1) or "").split())
    return value or None


def analyze_source(
    page: FetchedPage,
    descriptor: DatabaseDescriptor,
    query: Query,
    requested_kinds: set[str],
    min_relevance: float,
    diagnostics: Diagnostics | None = None,
    whole_words: bool = True,
) -> SourceRecord | None:
    """Scores one fetched source and extracts the requested components.

    Returns None when the source is filtered: relevance below threshold,
    nothing extractable, or a broken pattern (recorded as a diagnostic).
    """
    relevance = relevance_score(page.body, query, whole_words)
    if relevance < min_relevance:
        return None
    try:
        components: list[tuple[str, str]] = []
        for rule in descriptor.extraction_rules:
            if rule.target_kind in requested_kinds:
                components.extend(apply_rule(page.body, rule, page.url))
        citation = None
        if descriptor.citation_pattern is not None:
            citation = extract_citation(page.body, descriptor.citation_pattern)
    except InvalidPattern as exc:
        if diagnostics is not None:
            diagnostics.record(EXTRACTION_SCOPE, page.url, str(exc))
        return None
    if not components:
        return None
    return SourceRecord(
        url=page.url,
        database_name=descriptor.name,
        relevance_score=relevance,
        proximity_score=proximity_score(page.body, query),
        components=tuple(components),
        citation=citation,
    )


def _process_link_set(
    link_set: LinkSet,
    descriptor: DatabaseDescriptor,
    query: Query,
    requested_kinds: set[str],
    min_relevance: float,
    fetcher: PageFetcher,
    stopwatch: Stopwatch,
    schedule: dict[str, float] | None,
    diagnostics: Diagnostics,
    whole_words: bool,
) -> tuple[list[SourceRecord], TelemetryPoint]:
    records: list[SourceRecord] = []
    for url in link_set.urls:
        try:
            page = fetcher.fetch_page(url, rate_limit_ms=descriptor.rate_limit_ms)
        except FetchError as exc:
            diagnostics.record(FETCH_SCOPE, url, str(exc))
            continue
        record = analyze_source(
            page, descriptor, query, requested_kinds, min_relevance, diagnostics, whole_words
        )
        if record is not None:
            records.append(record)
    if schedule is not None and link_set.database_name in schedule:
        seconds = schedule[link_set.database_name]
    else:
        seconds = stopwatch.elapsed()
    return records, TelemetryPoint(seconds=seconds, sources=len(records))


def run_saea(
    link_sets: list[LinkSet],
    descriptors: list[DatabaseDescriptor],
    query: Query,
    requested_kinds: set[str],
    min_relevance: float,
    fetcher: PageFetcher,
    stopwatch: Stopwatch | None = None,
    schedule: dict[str, float] | None = None,
    diagnostics: Diagnostics | None = None,
    whole_words: bool = True,
) -> tuple[list[SourceRecord], list[TelemetryPoint]]:
    """Analyzes every harvested link, one worker per database.

    Links within a database are processed sequentially in harvest order;
    each database contributes one telemetry point (completion second,
    emitted record count). A timing schedule, when given, replaces the
    live completion stamp for the databases it names.
    """
    if stopwatch is None:
        stopwatch = Stopwatch(fetcher.clock)
    if diagnostics is None:
        diagnostics = Diagnostics()
    if not link_sets:
        return [], []
    by_name = {d.name: d for d in descriptors}
    for link_set in link_sets:
        if link_set.database_name not in by_name:
            raise UnknownDatabase(f"no descriptor named {link_set.database_name!r}")
    with ThreadPoolExecutor(max_workers=len(link_sets)) as pool:
        futures = [
            pool.submit(
                _process_link_set,
                ls,
                by_name[ls.database_name],
                query,
                requested_kinds,
                min_relevance,
                fetcher,
                stopwatch,
                schedule,
                diagnostics,
                whole_words,
            )
            for ls in link_sets
        ]
        results = [f.result() for f in futures]
    records = [record for per_db, _ in results for record in per_db]
    points = [point for _, point in results]
    return records, points
