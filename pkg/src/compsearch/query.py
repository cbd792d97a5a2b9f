"""Query parsing and database selection.

Keywords are the query's whitespace tokens, lowercased, with punctuation
stripped from both ends (interior punctuation such as hyphens survives),
minus configured stop words, first occurrence order preserved. The same
tokenizer is reused for document scoring so word boundaries agree
everywhere.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from .errors import EmptyQuery, NoDatabaseMatches

_EDGE_CHARS = string.punctuation + "“”‘’«»‹›–—―…·¡¿"


def tokenize(text: str) -> list[str]:
    """Lowercased whitespace tokens with edge punctuation removed."""
    out = []
    for raw in text.split():
        tok = raw.lower().strip(_EDGE_CHARS)
        if tok:
            out.append(tok)
    return out


@dataclass(frozen=True)
class Query:
    raw_text: str
    keywords: tuple[str, ...]
    topics: frozenset[str]


def load_stop_words(path: str | Path | None = None) -> frozenset[str]:
    """Stop words from the given file, or the list shipped with the package.

    One word per line; blank lines and lines starting with '#' are skipped.
    """
    if path is None:
        text = resources.files("compsearch").joinpath("data/stop_words.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    words = set()
    for line in text.splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


def parse_query(
    raw_text: str,
    topics: Iterable[str] = (),
    stop_words: Iterable[str] | None = None,
) -> Query:
    """Normalize raw query text into a Query.

    Raises EmptyQuery when nothing survives tokenization and stop-word
    filtering. Passing stop_words=None applies the packaged default list;
    pass an empty set to disable filtering.
    """
    if stop_words is None:
        stops = load_stop_words()
    else:
        stops = {w.lower() for w in stop_words}
    seen = dict.fromkeys(tokenize(raw_text))
    keywords = tuple(t for t in seen if t not in stops)
    if not keywords:
        raise EmptyQuery(f"no keywords survive filtering in {raw_text!r}")
    return Query(raw_text=raw_text, keywords=keywords, topics=frozenset(topics))


def select_databases(query: Query, catalog: list) -> list:
    """Catalog entries whose topic tags intersect the query's topics.

    Catalog order is preserved. An empty topic set selects everything;
    a non-empty one that matches nothing raises NoDatabaseMatches.
    """
    if not query.topics:
        return list(catalog)
    selected = [d for d in catalog if d.topic_tags & query.topics]
    if not selected:
        raise NoDatabaseMatches(f"no catalog entry tagged with any of {sorted(query.topics)}")
    return selected
