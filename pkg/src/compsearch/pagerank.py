"""Link-popularity ranking over the analyzed sources.

The iteration is the (1-d)-normalized fixed point

    PR(u) = (1 - d) + d * sum over referencing pages i of PR(i) / L(i)

so converged scores sum to the node count, not to 1. Nodes without
outbound links spread their rank uniformly over the whole graph each
step, which preserves that sum.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyGraph
from .mds import harvest_links


@dataclass(frozen=True)
class LinkGraph:
    nodes: tuple[str, ...]
    out_edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.nodes) != len(self.out_edges):
            raise ValueError("out_edges must align with nodes")
        n = len(self.nodes)
        for targets in self.out_edges:
            for v in targets:
                if not 0 <= v < n:
                    raise ValueError(f"edge target {v} out of range")


@dataclass(frozen=True)
class RankVector:
    scores: tuple[float, ...]
    damping: float
    iterations_used: int
    converged: bool


def build_link_graph(
    records,
    pages: dict[str, str],
    link_patterns: dict[str, str],
) -> LinkGraph:
    """One node per record URL; an edge wherever one source links to another.

    Each body is scanned with its own database's link pattern. Links that
    resolve outside the record set are dropped; parallel edges collapse.
    """
    index: dict[str, int] = {}
    databases: list[str] = []
    for record in records:
        if record.url not in index:
            index[record.url] = len(index)
            databases.append(record.database_name)
    nodes = tuple(index)
    edges = []
    for url, database_name in zip(nodes, databases):
        body = pages.get(url, "")
        pattern = link_patterns[database_name]
        targets: dict[int, None] = {}
        for link in harvest_links(body, pattern, url):
            v = index.get(link)
            if v is not None:
                targets.setdefault(v, None)
        edges.append(tuple(targets))
    return LinkGraph(nodes=nodes, out_edges=tuple(edges))


def pagerank(
    graph: LinkGraph,
    damping: float = 0.85,
    max_iterations: int = 100,
    tolerance: float = 1e-9,
) -> RankVector:
    """Power iteration from all-ones until the largest per-node change
    drops to the tolerance or the iteration budget runs out."""
    n = len(graph.nodes)
    if n == 0:
        raise EmptyGraph("cannot rank an empty graph")
    if not 0.0 <= damping < 1.0:
        raise ValueError(f"damping must be in [0, 1), got {damping}")
    if max_iterations < 1:
        raise ValueError("max_iterations must be at least 1")
    if tolerance <= 0.0:
        raise ValueError("tolerance must be positive")
    out_degree = [len(targets) for targets in graph.out_edges]
    incoming: list[list[int]] = [[] for _ in range(n)]
    for u, targets in enumerate(graph.out_edges):
        for v in targets:
            incoming[v].append(u)
    dangling = [u for u in range(n) if out_degree[u] == 0]
    scores = [1.0] * n
    converged = False
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        dangling_share = sum(scores[u] for u in dangling) / n
        fresh = [
            (1.0 - damping)
            + damping * (sum(scores[u] / out_degree[u] for u in incoming[v]) + dangling_share)
            for v in range(n)
        ]
        delta = max(abs(a - b) for a, b in zip(fresh, scores))
        scores = fresh
        if delta <= tolerance:
            converged = True
            break
    return RankVector(
        scores=tuple(scores),
        damping=damping,
        iterations_used=iterations,
        converged=converged,
    )


def normalized_percent(ranks: RankVector) -> list[float]:
    """Scores rescaled to percentages that sum to 100."""
    if not ranks.scores:
        raise EmptyGraph("no scores to normalize")
    total = sum(ranks.scores)
    if total <= 0.0:
        raise ValueError("rank sum must be positive")
    return [100.0 * s / total for s in ranks.scores]


def rank_by_url(graph: LinkGraph, ranks: RankVector) -> dict[str, float]:
    return dict(zip(graph.nodes, ranks.scores))
