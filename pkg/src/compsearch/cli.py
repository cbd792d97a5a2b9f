"""Command-line driver: query -> search -> extraction -> rank -> report.

Fixture mode (the default) restricts fetching to file: URLs, stamps the
report with a constant timestamp, and optionally replays recorded
completion offsets, so whole runs are reproducible byte for byte.
"""

from __future__ import annotations

import argparse
import json
import os
import pathlib
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .catalog import TARGET_KINDS, load_catalog
from .clock import Stopwatch
from .diagnostics import Diagnostics
from .errors import (
    CatalogError,
    DuplicateAbscissa,
    EmptyQuery,
    InsufficientPoints,
    InvalidPattern,
    NoDatabaseMatches,
    UnknownDatabase,
)
from .extract import run_saea
from .fetch import DEFAULT_USER_AGENT, RecordingFetcher
from .mds import run_mds
from .pagerank import build_link_graph, pagerank, rank_by_url
from .plotting import render_plot
from .query import load_stop_words, parse_query, select_databases
from .report import compile_report, render_html, render_json
from .telemetry import degraded_metrics, run_metrics

FIXTURE_TIMESTAMP = "1970-01-01T00:00:00Z"


@dataclass
class RunConfig:
    query_text: str
    catalog_path: str
    out_path: str = "report"
    topics: frozenset[str] = field(default_factory=frozenset)
    extract_kinds: frozenset[str] = frozenset({"citation", "excerpt", "image"})
    min_relevance: float = 1.0
    damping: float = 0.85
    mode: str = "fixture"
    replay_timings_path: str | None = None
    plot_path: str | None = None
    stop_words_path: str | None = None
    timeout_ms: int = 10_000
    match_substrings: bool = False


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def replay_timings(path: str, catalog_names: set[str]) -> dict[str, float]:
    """Loads {database name: completion seconds} from a JSON file.

    An empty mapping is legal (callers fall back to the live clock);
    a name the catalog does not know is a hard error.
    """
    raw = pathlib.Path(path).read_text(encoding="utf-8")
    data = json.loads(raw) if raw.strip() else {}
    if not isinstance(data, dict):
        raise CatalogError(f"replay file {path} must hold one JSON object")
    schedule: dict[str, float] = {}
    for name, seconds in data.items():
        if name not in catalog_names:
            raise UnknownDatabase(f"replay entry {name!r} is not in the catalog")
        if not isinstance(seconds, (int, float)) or isinstance(seconds, bool) or seconds <= 0:
            raise CatalogError(f"replay entry {name!r} needs a positive number of seconds")
        schedule[name] = float(seconds)
    return schedule


def run(config: RunConfig) -> int:
    if config.mode not in ("live", "fixture"):
        return _fail(f"unknown mode {config.mode!r}")
    if not 0.0 <= config.damping < 1.0:
        return _fail(f"damping must be in [0, 1), got {config.damping}")
    if config.min_relevance < 0.0:
        return _fail(f"min-relevance must be non-negative, got {config.min_relevance}")
    if config.timeout_ms <= 0:
        return _fail(f"timeout-ms must be positive, got {config.timeout_ms}")
    unknown_kinds = set(config.extract_kinds) - set(TARGET_KINDS)
    if unknown_kinds:
        return _fail(f"unknown extract kinds: {', '.join(sorted(unknown_kinds))}")
    if not config.extract_kinds:
        return _fail("nothing to extract: the extract list is empty")

    try:
        catalog = load_catalog(config.catalog_path)
    except (CatalogError, InvalidPattern) as exc:
        return _fail(str(exc))

    try:
        stop_words = load_stop_words(config.stop_words_path)
    except OSError as exc:
        return _fail(f"cannot read stop words: {exc}")

    try:
        query = parse_query(config.query_text, config.topics, stop_words)
        selected = select_databases(query, catalog)
    except (EmptyQuery, NoDatabaseMatches) as exc:
        return _fail(str(exc))

    if config.mode == "fixture":
        offenders = [d.name for d in selected if not d.query_url_template.startswith("file:")]
        if offenders:
            return _fail(
                "fixture mode needs file: URL templates; offending databases: "
                + ", ".join(offenders)
            )

    schedule: dict[str, float] | None = None
    if config.replay_timings_path is not None:
        try:
            schedule = replay_timings(config.replay_timings_path, {d.name for d in catalog})
        except (OSError, json.JSONDecodeError, CatalogError, UnknownDatabase) as exc:
            return _fail(f"bad replay timings: {exc}")
        if not schedule:
            print("warning: replay file has no entries; using the live clock", file=sys.stderr)
            schedule = None
        else:
            for d in selected:
                if d.name not in schedule:
                    print(f"warning: no replay entry for {d.name!r}", file=sys.stderr)

    fetcher = RecordingFetcher(
        user_agent=os.environ.get("COMPSEARCH_USER_AGENT", DEFAULT_USER_AGENT),
        timeout_ms=config.timeout_ms,
        allowed_schemes={"file"} if config.mode == "fixture" else None,
    )
    stopwatch = Stopwatch(fetcher.clock)
    diagnostics = Diagnostics()

    link_sets = run_mds(query, selected, fetcher, stopwatch, diagnostics)

    failed = diagnostics.failed_databases()
    if failed >= {d.name for d in selected}:
        for item in diagnostics.items():
            print(f"failed: {item.subject}: {item.reason}", file=sys.stderr)
        print("error: every selected database failed", file=sys.stderr)
        return 3

    records, points = run_saea(
        link_sets,
        selected,
        query,
        set(config.extract_kinds),
        config.min_relevance,
        fetcher,
        stopwatch,
        schedule,
        diagnostics,
        whole_words=not config.match_substrings,
    )

    try:
        metrics = run_metrics(points)
    except (InsufficientPoints, DuplicateAbscissa) as exc:
        diagnostics.record("telemetry", "run", f"curve not fitted: {exc}")
        metrics = degraded_metrics(points)

    url_ranks: dict[str, float] = {}
    if records:
        graph = build_link_graph(
            records, fetcher.pages, {d.name: d.link_pattern for d in selected}
        )
        ranks = pagerank(graph, damping=config.damping)
        url_ranks = rank_by_url(graph, ranks)

    generated_at = (
        FIXTURE_TIMESTAMP
        if config.mode == "fixture"
        else datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    )
    report = compile_report(
        query,
        records,
        url_ranks,
        metrics,
        points,
        [(item.subject, item.reason) for item in diagnostics.items()],
        generated_at,
    )

    out = pathlib.Path(config.out_path)
    if out.parent != pathlib.Path("."):
        out.parent.mkdir(parents=True, exist_ok=True)
    json_path = out.with_name(out.name + ".json")
    html_path = out.with_name(out.name + ".html")
    json_path.write_text(render_json(report), encoding="utf-8")
    html_path.write_text(render_html(report), encoding="utf-8")

    if config.plot_path is not None:
        if metrics.s_of_t is None:
            print("warning: no fitted curve; skipping plot", file=sys.stderr)
        else:
            render_plot(metrics, list(points), config.plot_path)

    note = f" ({len(diagnostics)} diagnostics)" if len(diagnostics) else ""
    print(
        f"compiled {len(records)} sources from {len(selected)} databases "
        f"-> {json_path}, {html_path}{note}"
    )
    return 0


def _parse_csv(text: str) -> frozenset[str]:
    return frozenset(part.strip() for part in text.split(",") if part.strip())


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="compile-search",
        description="Search every catalogued database for one query and compile "
        "the extracted sources into an HTML + JSON report.",
    )
    parser.add_argument("query", nargs="+", help="query text (multiple words allowed)")
    parser.add_argument("--topics", default="", help="comma-separated topic filter")
    parser.add_argument(
        "--catalog", default="fixtures/catalog.json", help="database catalog JSON path"
    )
    parser.add_argument(
        "--extract",
        default="citation,excerpt,image",
        help=f"comma-separated component kinds ({', '.join(TARGET_KINDS)})",
    )
    parser.add_argument("--min-relevance", type=float, default=1.0)
    parser.add_argument("--damping", type=float, default=0.85)
    parser.add_argument("--out", default="report", help="output path stem")
    parser.add_argument("--mode", choices=("live", "fixture"), default="fixture")
    parser.add_argument(
        "--replay-timings", default=None, help="JSON file of recorded completion offsets"
    )
    parser.add_argument(
        "--plot",
        nargs="?",
        const="",
        default=None,
        help="write an SVG of the fitted curves (default <out>.svg)",
    )
    parser.add_argument("--stop-words", default=None, help="stop-word list file")
    parser.add_argument("--timeout-ms", type=int, default=10_000)
    parser.add_argument(
        "--match-substrings",
        action="store_true",
        help="count keyword substrings instead of whole words",
    )
    args = parser.parse_args(argv)

    plot_path = args.plot
    if plot_path == "":
        plot_path = args.out + ".svg"

    config = RunConfig(
        query_text=" ".join(args.query),
        catalog_path=args.catalog,
        out_path=args.out,
        topics=_parse_csv(args.topics),
        extract_kinds=_parse_csv(args.extract),
        min_relevance=args.min_relevance,
        damping=args.damping,
        mode=args.mode,
        replay_timings_path=args.replay_timings,
        plot_path=plot_path,
        stop_words_path=args.stop_words,
        timeout_ms=args.timeout_ms,
        match_substrings=args.match_substrings,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
