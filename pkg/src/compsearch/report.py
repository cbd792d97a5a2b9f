"""Final deliverables: a canonical JSON document and a local HTML page.

Everything extracted from crawled pages is untrusted text and gets
escaped on the way into HTML. JSON output is canonical (sorted keys,
17-significant-digit floats) so identical runs are byte-identical.
"""

from __future__ import annotations

import html
import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .extract import SourceRecord
from .query import Query
from .telemetry import Polynomial, RunMetrics, TelemetryPoint, cumulative_series, format_polynomial

_STYLE = """
body { font-family: Georgia, serif; margin: 2rem auto; max-width: 52rem; color: #222; }
header, footer { border-bottom: 1px solid #999; padding-bottom: 0.8rem; }
footer { border-bottom: none; border-top: 1px solid #999; margin-top: 2rem; padding-top: 0.8rem; }
section.source { margin: 1.2rem 0; padding-bottom: 0.8rem; border-bottom: 1px dotted #bbb; }
section.source h3 { margin: 0 0 0.3rem 0; }
p.meta { font-size: 0.85rem; color: #555; }
blockquote { margin: 0.4rem 1rem; font-style: italic; }
img { max-width: 100%; }
p.note { font-size: 0.85rem; color: #555; }
""".strip()


@dataclass(frozen=True)
class RankedRecord:
    """A source record paired with the rank data used to order it."""

    record: SourceRecord
    pagerank: float
    combined_score: float


@dataclass(frozen=True)
class CompiledReport:
    query: Query
    records: tuple[RankedRecord, ...]
    metrics: RunMetrics
    points: tuple[TelemetryPoint, ...]
    diagnostics: tuple[tuple[str, str], ...]
    generated_at: str


def order_records(
    records: Iterable[SourceRecord], url_ranks: Mapping[str, float]
) -> list[RankedRecord]:
    """Sorts by combined relevance desc, then PageRank desc, then URL asc.

    Records whose URL the rank vector never saw score 0 popularity.
    """
    ranked = [
        RankedRecord(
            record=r,
            pagerank=url_ranks.get(r.url, 0.0),
            combined_score=r.combined_score(),
        )
        for r in records
    ]
    ranked.sort(key=lambda rr: (-rr.combined_score, -rr.pagerank, rr.record.url))
    return ranked


def compile_report(
    query: Query,
    records: Iterable[SourceRecord],
    url_ranks: Mapping[str, float],
    metrics: RunMetrics,
    points: Iterable[TelemetryPoint],
    diagnostics: Iterable[tuple[str, str]],
    generated_at: str,
) -> CompiledReport:
    return CompiledReport(
        query=query,
        records=tuple(order_records(records, url_ranks)),
        metrics=metrics,
        points=tuple(points),
        diagnostics=tuple(sorted(diagnostics)),
        generated_at=generated_at,
    )


# --- canonical JSON ---


def _canonical(value) -> str:
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"cannot serialize non-finite float {value}")
        return format(value, ".17g")
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_canonical(v) for v in value) + "]"
    if isinstance(value, dict):
        for key in value:
            if not isinstance(key, str):
                raise ValueError(f"object keys must be strings, got {key!r}")
        items = sorted(value.items())
        return "{" + ",".join(f"{json.dumps(k, ensure_ascii=False)}:{_canonical(v)}" for k, v in items) + "}"
    raise ValueError(f"cannot serialize {type(value).__name__}")


def canonical_json(value) -> str:
    """Deterministic JSON: sorted keys, compact, floats at 17 significant
    digits so they parse back to the same double."""
    return _canonical(value)


def _coefficients(p: Polynomial | None):
    return None if p is None else list(p.coefficients)


def report_as_data(report: CompiledReport) -> dict:
    m = report.metrics
    return {
        "query": {
            "raw_text": report.query.raw_text,
            "keywords": list(report.query.keywords),
            "topics": sorted(report.query.topics),
        },
        "generated_at": report.generated_at,
        "records": [
            {
                "url": rr.record.url,
                "database": rr.record.database_name,
                "relevance_score": rr.record.relevance_score,
                "proximity_score": rr.record.proximity_score,
                "combined_score": rr.combined_score,
                "pagerank": rr.pagerank,
                "citation": rr.record.citation,
                "components": [
                    {"kind": kind, "value": value} for kind, value in rr.record.components
                ],
            }
            for rr in report.records
        ],
        "diagnostics": [
            {"subject": subject, "reason": reason} for subject, reason in report.diagnostics
        ],
        "telemetry": {
            "points": [{"seconds": p.seconds, "sources": p.sources} for p in report.points],
            "cumulative_points": [
                {"seconds": p.seconds, "sources": p.sources}
                for p in (cumulative_series(list(report.points)) if report.points else [])
            ],
            "s_coefficients": _coefficients(m.s_of_t),
            "e_coefficients": _coefficients(m.e_of_t),
            "average_value": m.average_value,
            "domain": list(m.domain) if m.domain is not None else None,
            "total_sources": m.total_sources,
            "total_time_seconds": m.total_time_seconds,
            "average_efficiency": m.average_efficiency,
            "overall_rate": m.overall_rate,
        },
    }


def render_json(report: CompiledReport) -> str:
    return canonical_json(report_as_data(report)) + "\n"


# --- HTML ---


def _esc(text: str) -> str:
    return html.escape(text, quote=True)


def _fmt(x: float) -> str:
    return format(x, ".6g")


def _record_section(rr: RankedRecord) -> list[str]:
    r = rr.record
    lines = ['<section class="source">']
    title = r.citation if r.citation else r.url
    lines.append(f'<h3><a href="{_esc(r.url)}">{_esc(title)}</a></h3>')
    lines.append(
        '<p class="meta">'
        + _esc(
            f"{r.database_name} | relevance {_fmt(r.relevance_score)} | "
            f"proximity {_fmt(r.proximity_score)} | pagerank {_fmt(rr.pagerank)} | "
            f"combined {_fmt(rr.combined_score)}"
        )
        + "</p>"
    )
    for kind, value in r.components:
        if kind == "image":
            lines.append(f'<img src="{_esc(value)}" alt="extracted image">')
        else:
            lines.append(f"<blockquote>{_esc(value)}</blockquote>")
    lines.append(f'<p class="url"><a href="{_esc(r.url)}">{_esc(r.url)}</a></p>')
    lines.append("</section>")
    return lines


def _telemetry_footer(report: CompiledReport) -> list[str]:
    m = report.metrics
    lines = ["<footer>", "<h2>Run telemetry</h2>"]
    lines.append(
        "<p>"
        + _esc(
            f"Total: {m.total_sources} sources in {_fmt(m.total_time_seconds)} seconds."
        )
        + "</p>"
    )
    if m.s_of_t is not None and m.domain is not None:
        t0, t1 = m.domain
        lines.append("<p>" + _esc(f"S(t) = {format_polynomial(m.s_of_t)}") + "</p>")
        lines.append("<p>" + _esc(f"E(t) = {format_polynomial(m.e_of_t)}") + "</p>")
        lines.append(
            "<p>"
            + _esc(
                f"Average of S(t) over the restricted domain "
                f"[{_fmt(t0)}, {_fmt(t1)}]: {_fmt(m.average_value)} sources."
            )
            + "</p>"
        )
        lines.append(
            "<p>"
            + _esc(
                f"Average efficiency over the domain: {_fmt(m.average_efficiency)} "
                f"sources/second (mean of E; the secant slope of S). "
                f"Overall rate: {_fmt(m.overall_rate)} sources/second (total over total time)."
            )
            + "</p>"
        )
        lines.append(
            '<p class="note">'
            + _esc(
                "Outside the restricted domain the fitted curves are extrapolation "
                "and carry no meaning."
            )
            + "</p>"
        )
    else:
        lines.append(
            "<p>"
            + _esc("No curve fitted: fewer than two databases completed with distinct times.")
            + "</p>"
        )
    if report.diagnostics:
        lines.append("<h2>Diagnostics</h2>")
        lines.append("<ul>")
        for subject, reason in report.diagnostics:
            lines.append(f"<li>{_esc(subject)}: {_esc(reason)}</li>")
        lines.append("</ul>")
    lines.append(f'<p class="generated">{_esc("Generated at " + report.generated_at)}</p>')
    lines.append("</footer>")
    return lines


def render_html(report: CompiledReport) -> str:
    q = report.query
    n = len(report.records)
    lines = [
        "<!DOCTYPE html>",
        '<html lang="en">',
        "<head>",
        '<meta charset="utf-8">',
        f"<title>{_esc('Compiled sources: ' + q.raw_text)}</title>",
        f"<style>{_STYLE}</style>",
        "</head>",
        "<body>",
        "<header>",
        "<h1>Compiled source report</h1>",
        f"<p>{_esc('Query: ' + q.raw_text)}</p>",
        f"<p>{_esc('Keywords: ' + ', '.join(q.keywords))}</p>",
        f"<p>{_esc(f'{n} sources compiled.')}</p>",
        "</header>",
        "<main>",
    ]
    for rr in report.records:
        lines.extend(_record_section(rr))
    lines.append("</main>")
    lines.extend(_telemetry_footer(report))
    lines.append("</body>")
    lines.append("</html>")
    return "\n".join(lines) + "\n"
