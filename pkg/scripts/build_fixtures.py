#!/usr/bin/env python3
"""Generates the committed fixture corpus under fixtures/.

Four mock historical databases, each with its own markup dialect, plus
result pages, per-query source documents, timing replay files, and the
catalog that describes them. Output is fully deterministic (fixed seed),
so rerunning this script reproduces the corpus byte for byte.
"""

from __future__ import annotations

import json
import pathlib
import random
import shutil
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
SEED = 20080601
PAGE_SIZE = 20

FILLER = (
    "archive ledger voyage harbor letter winter crossing merchant vessel "
    "crew journal account treaty decree province chronicle manuscript "
    "testimony port cargo settlement expedition parchment passage soldier "
    "frontier dispatch garrison monastery census charter famine plague "
    "parliament envoy翻 cathedral".replace("翻", "")
).split()

ADJECTIVES = "brief notable disputed faded annotated recovered partial sealed".split()

DATABASES = [
    {
        "name": "eyewitness",
        "display": "Eyewitness Archive",
        "page_limit": 2,
        "topic_tags": ["history", "exploration", "atlantic", "ww1-era", "ww2-era"],
        "link_pattern": '<a class="result" href="([^"]+)">',
        "anchor": '<a class="result" href="{href}">{label}</a>',
        "citation_pattern": '<p class="source">([^<]+)</p>',
        "citation_text": "Eyewitness Archive, vol. {vol}, entry {idx:03d} ({year})",
        "extraction_rules": [
            {"target_kind": "excerpt", "pattern": '<p class="excerpt">([^<]+)</p>', "max_matches": 3},
            {"target_kind": "image", "pattern": '<img class="illustration" src="([^"]+)">'},
            {"target_kind": "heading", "pattern": '<h2 class="headline">([^<]+)</h2>', "max_matches": 1},
        ],
    },
    {
        "name": "avalon",
        "display": "Avalon Collection",
        "page_limit": 3,
        "topic_tags": ["history", "exploration", "atlantic", "ww1-era", "ww2-era"],
        "link_pattern": '<a href="([^"]+)" class="entry">',
        "anchor": '<a href="{href}" class="entry">{label}</a>',
        "citation_pattern": '<div class="cite">([^<]+)</div>',
        "citation_text": "Avalon Collection doc. {idx:03d}, {year}",
        "extraction_rules": [
            {"target_kind": "excerpt", "pattern": '<blockquote class="doc">([^<]+)</blockquote>'},
            {"target_kind": "image", "pattern": '<img src="([^"]+)" class="plate">'},
            {"target_kind": "heading", "pattern": '<h1 class="doc-title">([^<]+)</h1>', "max_matches": 1},
        ],
    },
    {
        "name": "ancient-encyclopedia",
        "display": "Ancient Encyclopedia",
        "page_limit": 1,
        "topic_tags": ["history", "exploration", "atlantic", "ancient"],
        "link_pattern": '<a class="ref" href="([^"]+)">',
        "anchor": '<a class="ref" href="{href}">{label}</a>',
        "citation_pattern": '<span class="attribution">([^<]+)</span>',
        "citation_text": "Ancient Encyclopedia entry {idx:03d} ({year})",
        "extraction_rules": [
            {"target_kind": "excerpt", "pattern": '<div class="summary">([^<]+)</div>'},
            {"target_kind": "image", "pattern": '<img class="relief" src="([^"]+)">'},
        ],
    },
    {
        "name": "john-carter-brown",
        "display": "Carter Brown Library",
        "page_limit": 3,
        "topic_tags": ["history", "exploration", "atlantic", "ww1-era", "ww2-era"],
        "link_pattern": '<a href="([^"]+)" class="item">',
        "anchor": '<a href="{href}" class="item">{label}</a>',
        "citation_pattern": '<p class="citation">([^<]+)</p>',
        "citation_text": "Carter Brown Library, item {idx:03d}, {year}",
        "extraction_rules": [
            {"target_kind": "excerpt", "pattern": '<td class="note">([^<]+)</td>', "max_matches": 2},
            {"target_kind": "image", "pattern": '<img src="([^"]+)" class="scan">'},
        ],
    },
]

# per query: keyword phrase (as typed downstream of stop-word filtering),
# per-database source counts, and the replayed completion offsets
QUERIES = [
    {
        "slug": "christopher+columbus",
        "phrase": ["christopher", "columbus"],
        "timing_file": "columbus.json",
        "counts": {"eyewitness": 33, "avalon": 46, "ancient-encyclopedia": 8, "john-carter-brown": 54},
        "timings": {"eyewitness": 2.88, "avalon": 3.78, "ancient-encyclopedia": 4.75, "john-carter-brown": 5.21},
    },
    {
        "slug": "slave+trade",
        "phrase": ["slave", "trade"],
        "timing_file": "slave-trade.json",
        "counts": {"eyewitness": 27, "avalon": 56, "ancient-encyclopedia": 13, "john-carter-brown": 43},
        "timings": {"eyewitness": 5.84, "avalon": 4.36, "ancient-encyclopedia": 5.35, "john-carter-brown": 3.37},
    },
    {
        "slug": "wwi",
        "phrase": ["wwi"],
        "timing_file": "wwi.json",
        "counts": {"eyewitness": 32, "avalon": 45, "john-carter-brown": 36},
        "timings": {"eyewitness": 7.34, "avalon": 5.74, "john-carter-brown": 4.18},
    },
    {
        "slug": "wwii",
        "phrase": ["wwii"],
        "timing_file": "wwii.json",
        "counts": {"eyewitness": 31, "avalon": 37, "john-carter-brown": 41},
        "timings": {"eyewitness": 7.28, "avalon": 6.35, "john-carter-brown": 4.72},
    },
]


def sentence(rng, words_lo=6, words_hi=13):
    return " ".join(rng.choice(FILLER) for _ in range(rng.randint(words_lo, words_hi)))


def paragraph_with_phrase(rng, phrase, insertions):
    """Filler text with the keyword phrase dropped in whole, space-separated."""
    words = [rng.choice(FILLER) for _ in range(rng.randint(14, 30))]
    for _ in range(insertions):
        at = rng.randint(0, len(words))
        rendered = " ".join(phrase)
        if rng.random() < 0.3:
            rendered = rendered.title()
        words.insert(at, rendered)
    # occasionally an extra lone keyword for frequency variety
    if len(phrase) > 1 and rng.random() < 0.5:
        words.insert(rng.randint(0, len(words)), rng.choice(phrase))
    return " ".join(words)


def title_of(rng):
    return f"A {rng.choice(ADJECTIVES)} {rng.choice(FILLER)} of the {rng.choice(FILLER)}"


def source_body(rng, db, query, idx, group_size):
    phrase = query["phrase"]
    title = title_of(rng)
    para1 = paragraph_with_phrase(rng, phrase, rng.randint(1, 3))
    para2 = paragraph_with_phrase(rng, phrase, rng.randint(0, 2))
    excerpts = [sentence(rng).capitalize() + "." for _ in range(rng.randint(1, 3))]
    year = rng.randint(1490, 1950)
    citation = db["citation_text"].format(idx=idx, year=year, vol=rng.randint(1, 9))

    images = []
    if rng.random() < 0.4:
        for _ in range(rng.randint(1, 2)):
            images.append(f"img/plate_{rng.randint(1, 60):02d}.png")

    cross = []
    others = [n for n in range(1, group_size + 1) if n != idx]
    for target in rng.sample(others, k=min(len(others), rng.choice([0, 1, 1, 2, 3]))):
        cross.append(f"src_{target:03d}.html")

    name = db["name"]
    lines = ["<html>", f"<head><title>{title}</title></head>", "<body>"]
    if name == "eyewitness":
        lines.append(f'<h2 class="headline">{title}</h2>')
        lines.append(f"<p> {para1} </p>")
        lines.extend(f'<p class="excerpt">{e}</p>' for e in excerpts)
        lines.append(f"<p> {para2} </p>")
        lines.extend(f'<img class="illustration" src="{i}">' for i in images)
        for href in cross:
            anchor = db["anchor"].format(href=href, label="a related account")
            lines.append(f"<p> see also {anchor} </p>")
        lines.append(f'<p class="source">{citation}</p>')
    elif name == "avalon":
        lines.append(f'<h1 class="doc-title">{title}</h1>')
        lines.append(f"<p> {para1} </p>")
        lines.extend(f'<blockquote class="doc">{e}</blockquote>' for e in excerpts)
        lines.extend(f'<img src="{i}" class="plate">' for i in images)
        lines.append(f"<p> {para2} </p>")
        for href in cross:
            anchor = db["anchor"].format(href=href, label="companion document")
            lines.append(f"<p> {anchor} </p>")
        lines.append(f'<div class="cite">{citation}</div>')
    elif name == "ancient-encyclopedia":
        lines.append(f"<h1>{title}</h1>")
        lines.extend(f'<div class="summary">{e}</div>' for e in excerpts)
        lines.append(f"<p> {para1} </p>")
        lines.extend(f'<img class="relief" src="{i}">' for i in images)
        for href in cross:
            anchor = db["anchor"].format(href=href, label="cross reference")
            lines.append(f"<p> {anchor} </p>")
        lines.append(f'<span class="attribution">{citation}</span>')
    else:
        lines.append(f"<h1>{title}</h1>")
        lines.append(f"<p> {para1} </p>")
        lines.append("<table>")
        lines.extend(f'<tr><td class="note">{e}</td></tr>' for e in excerpts)
        lines.append("</table>")
        lines.extend(f'<img src="{i}" class="scan">' for i in images)
        lines.append(f"<p> {para2} </p>")
        for href in cross:
            anchor = db["anchor"].format(href=href, label="shelf neighbor")
            lines.append(f"<p> {anchor} </p>")
        lines.append(f'<p class="citation">{citation}</p>')
    lines.extend(["</body>", "</html>"])
    return "\n".join(lines) + "\n"


def result_page(db, query, page_number, hrefs):
    lines = [
        "<html>",
        f"<head><title>{db['display']}: results page {page_number}</title></head>",
        "<body>",
        f"<h1>{db['display']} search</h1>",
        "<ol>",
    ]
    for n, href in hrefs:
        anchor = db["anchor"].format(href=href, label=f"source {n:03d}")
        lines.append(f"<li>{anchor}</li>")
    lines.extend(["</ol>", "</body>", "</html>"])
    return "\n".join(lines) + "\n"


def build_database(rng, db):
    db_dir = FIXTURES / db["name"]
    db_dir.mkdir(parents=True)
    for query in QUERIES:
        count = query["counts"].get(db["name"])
        if count is None:
            continue
        group_dir = db_dir / query["slug"]
        group_dir.mkdir()
        for idx in range(1, count + 1):
            body = source_body(rng, db, query, idx, count)
            (group_dir / f"src_{idx:03d}.html").write_text(body, encoding="utf-8")
        numbered = [(n, f"{query['slug']}/src_{n:03d}.html") for n in range(1, count + 1)]
        for page_number in range(1, db["page_limit"] + 1):
            chunk = numbered[(page_number - 1) * PAGE_SIZE : page_number * PAGE_SIZE]
            page = result_page(db, query, page_number, chunk)
            (db_dir / f"results_{query['slug']}_p{page_number}.html").write_text(
                page, encoding="utf-8"
            )


def build_catalog():
    entries = []
    for db in DATABASES:
        entries.append(
            {
                "name": db["name"],
                "query_url_template": f"file:{db['name']}/results_{{QUERY}}_p{{PAGE}}.html",
                "link_pattern": db["link_pattern"],
                "result_page_limit": db["page_limit"],
                "topic_tags": db["topic_tags"],
                "extraction_rules": db["extraction_rules"],
                "citation_pattern": db["citation_pattern"],
                "rate_limit_ms": 0,
            }
        )
    (FIXTURES / "catalog.json").write_text(
        json.dumps(entries, indent=2) + "\n", encoding="utf-8"
    )


def build_timings():
    timings_dir = FIXTURES / "timings"
    timings_dir.mkdir()
    for query in QUERIES:
        (timings_dir / query["timing_file"]).write_text(
            json.dumps(query["timings"], indent=2) + "\n", encoding="utf-8"
        )


def main():
    if FIXTURES.exists():
        shutil.rmtree(FIXTURES)
    rng = random.Random(SEED)
    for db in DATABASES:
        build_database(rng, db)
    build_catalog()
    build_timings()
    total_docs = sum(sum(q["counts"].values()) for q in QUERIES)
    print(f"wrote fixture corpus: {total_docs} source documents under {FIXTURES}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
