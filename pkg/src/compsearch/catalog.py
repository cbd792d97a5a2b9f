"""Database descriptors and the catalog file.

Each searchable database is described entirely by data: where to send the
query, how to recognize result links, and which extraction rules pull
components out of its documents. Adding a database means adding a catalog
entry, not code.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from posixpath import normpath
from typing import Any

from .errors import CatalogError, InvalidPattern

TARGET_KINDS = ("image", "citation", "excerpt", "heading", "full_text")

QUERY_PLACEHOLDER = "{QUERY}"
PAGE_PLACEHOLDER = "{PAGE}"


def _compile(pattern: str, where: str, min_groups: int = 1) -> re.Pattern:
    try:
        compiled = re.compile(pattern)
    except re.error as exc:
        raise InvalidPattern(f"{where}: {pattern!r} does not compile: {exc}") from exc
    if compiled.groups < min_groups:
        raise InvalidPattern(f"{where}: {pattern!r} needs at least {min_groups} capture group(s)")
    return compiled


@dataclass(frozen=True)
class ExtractionRule:
    """One component-harvesting rule: which kind of content, found where."""

    target_kind: str
    pattern: str
    capture_group: int = 1
    max_matches: int | None = None

    def __post_init__(self):
        if self.target_kind not in TARGET_KINDS:
            raise CatalogError(
                f"unknown target_kind {self.target_kind!r}; expected one of {TARGET_KINDS}"
            )
        if self.capture_group < 1:
            raise CatalogError("capture_group must be a positive integer")
        if self.max_matches is not None and self.max_matches < 1:
            raise CatalogError("max_matches must be a positive integer or null")
        _compile(self.pattern, f"rule[{self.target_kind}]", self.capture_group)


@dataclass(frozen=True)
class DatabaseDescriptor:
    name: str
    query_url_template: str
    link_pattern: str
    result_page_limit: int
    topic_tags: frozenset[str]
    extraction_rules: tuple[ExtractionRule, ...] = field(default=())
    citation_pattern: str | None = None
    rate_limit_ms: int = 0

    def __post_init__(self):
        if not self.name:
            raise CatalogError("database name must be non-empty")
        if self.query_url_template.count(QUERY_PLACEHOLDER) != 1:
            raise CatalogError(
                f"{self.name}: query_url_template must contain {QUERY_PLACEHOLDER} exactly once"
            )
        if self.query_url_template.count(PAGE_PLACEHOLDER) > 1:
            raise CatalogError(f"{self.name}: at most one {PAGE_PLACEHOLDER} placeholder allowed")
        if self.result_page_limit < 1:
            raise CatalogError(f"{self.name}: result_page_limit must be >= 1")
        if not self.topic_tags:
            raise CatalogError(f"{self.name}: topic_tags must be non-empty")
        if self.rate_limit_ms < 0:
            raise CatalogError(f"{self.name}: rate_limit_ms must be >= 0")
        _compile(self.link_pattern, f"{self.name}: link_pattern")
        if self.citation_pattern is not None:
            _compile(self.citation_pattern, f"{self.name}: citation_pattern")

    def paginated(self) -> bool:
        return PAGE_PLACEHOLDER in self.query_url_template


_DESCRIPTOR_FIELDS = {
    "name", "query_url_template", "link_pattern", "result_page_limit",
    "topic_tags", "extraction_rules", "citation_pattern", "rate_limit_ms",
}
_RULE_FIELDS = {"target_kind", "pattern", "capture_group", "max_matches"}


def _resolve_file_template(template: str, base_dir: Path) -> str:
    """Anchor a relative file: template at the catalog's directory.

    Catalog entries may say file:ew/results_{QUERY}.html; runs must not
    depend on the process working directory, so the path is made absolute
    here. Absolute file: URLs and http(s) templates pass through.
    """
    if not template.startswith("file:"):
        return template
    rest = template[len("file:"):]
    if rest.startswith("//"):
        return template
    if rest.startswith("/"):
        return "file://" + rest
    return "file://" + normpath(str(base_dir / rest))


def _build_rule(obj: Any, where: str) -> ExtractionRule:
    if not isinstance(obj, dict):
        raise CatalogError(f"{where}: extraction rule must be an object")
    unknown = set(obj) - _RULE_FIELDS
    if unknown:
        raise CatalogError(f"{where}: unknown rule field(s) {sorted(unknown)}")
    try:
        return ExtractionRule(
            target_kind=obj["target_kind"],
            pattern=obj["pattern"],
            capture_group=obj.get("capture_group", 1),
            max_matches=obj.get("max_matches"),
        )
    except KeyError as exc:
        raise CatalogError(f"{where}: rule missing field {exc}") from exc


def load_catalog(path: str | Path) -> list[DatabaseDescriptor]:
    """Parse and validate a catalog file (UTF-8 JSON array of descriptors)."""
    path = Path(path)
    try:
        text = path.read_text("utf-8")
    except OSError as exc:
        raise CatalogError(f"cannot read catalog {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"catalog {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, list):
        raise CatalogError(f"catalog {path} must be a top-level array")
    if not doc:
        raise CatalogError(f"catalog {path} is empty")

    base_dir = path.resolve().parent
    out = []
    for idx, entry in enumerate(doc):
        where = f"catalog entry {idx}"
        if not isinstance(entry, dict):
            raise CatalogError(f"{where}: must be an object")
        unknown = set(entry) - _DESCRIPTOR_FIELDS
        if unknown:
            raise CatalogError(f"{where}: unknown field(s) {sorted(unknown)}")
        missing = _DESCRIPTOR_FIELDS - set(entry)
        if missing:
            raise CatalogError(f"{where}: missing field(s) {sorted(missing)}")
        rules = tuple(
            _build_rule(r, f"{where} ({entry.get('name', '?')})")
            for r in entry["extraction_rules"]
        )
        tags = entry["topic_tags"]
        if not isinstance(tags, list) or not all(isinstance(t, str) for t in tags):
            raise CatalogError(f"{where}: topic_tags must be an array of strings")
        out.append(DatabaseDescriptor(
            name=entry["name"],
            query_url_template=_resolve_file_template(entry["query_url_template"], base_dir),
            link_pattern=entry["link_pattern"],
            result_page_limit=entry["result_page_limit"],
            topic_tags=frozenset(tags),
            extraction_rules=rules,
            citation_pattern=entry["citation_pattern"],
            rate_limit_ms=entry["rate_limit_ms"],
        ))
    names = [d.name for d in out]
    if len(set(names)) != len(names):
        raise CatalogError("catalog contains duplicate database names")
    return out
