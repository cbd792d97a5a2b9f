"""Federated metasearch and source compilation with run telemetry."""

from .catalog import TARGET_KINDS, DatabaseDescriptor, ExtractionRule, load_catalog
from .diagnostics import Diagnostics
from .errors import (
    CatalogError,
    CompsearchError,
    DegenerateInterval,
    DuplicateAbscissa,
    EmptyGraph,
    EmptyQuery,
    FetchError,
    FetchFailed,
    FetchTimeout,
    InsufficientPoints,
    InvalidPattern,
    NoDatabaseMatches,
    UnknownDatabase,
)
from .extract import (
    SourceRecord,
    analyze_source,
    apply_rule,
    extract_citation,
    proximity_score,
    relevance_score,
    run_saea,
)
from .fetch import FetchedPage, PageFetcher, RecordingFetcher
from .mds import LinkSet, extract_links, format_search_url, harvest_links, run_mds
from .pagerank import LinkGraph, RankVector, build_link_graph, normalized_percent, pagerank, rank_by_url
from .query import Query, load_stop_words, parse_query, select_databases, tokenize
from .report import CompiledReport, RankedRecord, canonical_json, compile_report, order_records, render_html, render_json
from .telemetry import (
    Polynomial,
    RunMetrics,
    TelemetryPoint,
    average_value,
    cumulative_series,
    differentiate,
    evaluate,
    fit_ipf,
    format_polynomial,
    manual_comparison_rate,
    mean_sources_per_search,
    run_metrics,
)

__version__ = "0.1.0"
