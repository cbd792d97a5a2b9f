"""Run-performance modeling.

Each database that completes contributes one (seconds, sources) point.
The source curve S(t) is the Lagrange interpolating polynomial through the
running total of those points ordered by completion time; its derivative
E(t) is the instantaneous retrieval rate. Both are carried as dense
ascending coefficient vectors so they can be compared, differentiated,
and integrated in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DegenerateInterval,
    DuplicateAbscissa,
    InsufficientPoints,
)

__all__ = [
    "TelemetryPoint",
    "Polynomial",
    "RunMetrics",
    "fit_ipf",
    "evaluate",
    "differentiate",
    "average_value",
    "cumulative_series",
    "run_metrics",
    "degraded_metrics",
    "mean_sources_per_search",
    "manual_comparison_rate",
    "format_polynomial",
]


@dataclass(frozen=True)
class TelemetryPoint:
    """One database-completion event."""

    seconds: float
    sources: int


@dataclass(frozen=True)
class Polynomial:
    """Dense coefficient vector, ascending degree: c0 + c1*t + c2*t^2 + ...

    The empty tuple is the zero polynomial. Trailing zero coefficients are
    trimmed by the constructors in this module.
    """

    coefficients: tuple[float, ...]

    def degree(self) -> int:
        return len(self.coefficients) - 1


@dataclass(frozen=True)
class RunMetrics:
    """Aggregates for one full run.

    average_efficiency is the mean of E(t) over the restricted domain,
    which by the fundamental theorem equals the secant slope of S between
    the first and last completion. overall_rate is total sources divided
    by total elapsed time. The two deliberately remain separate fields:
    they answer different questions and generally disagree.
    """

    total_sources: int
    total_time_seconds: float
    s_of_t: Polynomial | None
    e_of_t: Polynomial | None
    average_value: float | None
    domain: tuple[float, float] | None
    average_efficiency: float | None
    overall_rate: float | None


def _trim(coeffs: list[float]) -> tuple[float, ...]:
    while coeffs and coeffs[-1] == 0.0:
        coeffs.pop()
    return tuple(coeffs)


def _check_distinct(points: list[TelemetryPoint]) -> None:
    for a, b in zip(points, points[1:]):
        if a.seconds == b.seconds:
            raise DuplicateAbscissa(f"two points share t={a.seconds}")


def fit_ipf(points: list[TelemetryPoint]) -> Polynomial:
    """Lagrange interpolating polynomial through the given points.

    The basis product for node i runs over every other node (k != i).
    Input order is irrelevant; points are sorted by time first so equal
    point sets produce bit-identical coefficients.
    """
    if len(points) < 2:
        raise InsufficientPoints(f"need at least 2 points, got {len(points)}")
    pts = sorted(points, key=lambda p: p.seconds)
    _check_distinct(pts)

    n = len(pts)
    coeffs = [0.0] * n
    for i, node in enumerate(pts):
        basis = [1.0]
        denom = 1.0
        for k, other in enumerate(pts):
            if k == i:
                continue
            # multiply the running basis by (t - t_k)
            shifted = [0.0] + basis
            for j, c in enumerate(basis):
                shifted[j] -= other.seconds * c
            basis = shifted
            denom *= node.seconds - other.seconds
        scale = node.sources / denom
        for j, c in enumerate(basis):
            coeffs[j] += scale * c
    return Polynomial(_trim(coeffs))


def evaluate(p: Polynomial, t: float) -> float:
    """Horner evaluation; the zero polynomial evaluates to 0."""
    acc = 0.0
    for c in reversed(p.coefficients):
        acc = acc * t + c
    return acc


def differentiate(p: Polynomial) -> Polynomial:
    return Polynomial(_trim(
        [k * c for k, c in enumerate(p.coefficients)][1:]
    ))


def average_value(p: Polynomial, t_i: float, t_f: float) -> float:
    """Mean of p over [t_i, t_f] via the closed-form antiderivative."""
    if t_f <= t_i:
        raise DegenerateInterval(f"need t_f > t_i, got [{t_i}, {t_f}]")
    anti = [c / (k + 1) for k, c in enumerate(p.coefficients)]

    def F(t: float) -> float:
        acc = 0.0
        for c in reversed(anti):
            acc = acc * t + c
        return acc * t

    return (F(t_f) - F(t_i)) / (t_f - t_i)


def cumulative_series(points: list[TelemetryPoint]) -> list[TelemetryPoint]:
    """Running total of sources in completion order.

    This is the series S(t) actually interpolates: by each completion
    instant, how many sources the whole run has compiled so far.
    """
    pts = sorted(points, key=lambda p: p.seconds)
    _check_distinct(pts)
    out = []
    total = 0
    for p in pts:
        total += p.sources
        out.append(TelemetryPoint(p.seconds, total))
    return out


def run_metrics(points: list[TelemetryPoint]) -> RunMetrics:
    """Full metrics for a completed run; needs at least two points."""
    if len(points) < 2:
        raise InsufficientPoints(f"need at least 2 points, got {len(points)}")
    series = cumulative_series(points)
    s = fit_ipf(series)
    e = differentiate(s)
    t_min = series[0].seconds
    t_max = series[-1].seconds
    total = series[-1].sources
    return RunMetrics(
        total_sources=total,
        total_time_seconds=t_max,
        s_of_t=s,
        e_of_t=e,
        average_value=average_value(s, t_min, t_max),
        domain=(t_min, t_max),
        average_efficiency=(series[-1].sources - series[0].sources) / (t_max - t_min),
        overall_rate=total / t_max,
    )


def degraded_metrics(points: list[TelemetryPoint]) -> RunMetrics:
    """Totals-only metrics for runs where no curve can be fitted
    (fewer than two completions, or clashing completion stamps)."""
    total = sum(p.sources for p in points)
    t_max = max((p.seconds for p in points), default=0.0)
    return RunMetrics(
        total_sources=total,
        total_time_seconds=t_max,
        s_of_t=None,
        e_of_t=None,
        average_value=None,
        domain=None,
        average_efficiency=None,
        overall_rate=total / t_max if t_max > 0 else None,
    )


def mean_sources_per_search(runs: list[RunMetrics]) -> float:
    if not runs:
        raise InsufficientPoints("no runs to average")
    return sum(r.total_sources for r in runs) / len(runs)


def manual_comparison_rate(sources_used: int, compilation_seconds: float) -> float:
    """Sources per second for a manually compiled baseline."""
    if compilation_seconds <= 0:
        raise DegenerateInterval("compilation_seconds must be positive")
    return sources_used / compilation_seconds


def format_polynomial(p: Polynomial | None, var: str = "t") -> str:
    """Human-readable form, highest power first, e.g. '3t^2 - t + 4.5'."""
    if p is None or not p.coefficients:
        return "0"
    parts = []
    for k in range(len(p.coefficients) - 1, -1, -1):
        c = p.coefficients[k]
        if c == 0.0:
            continue
        mag = format(abs(c), ".6g")
        if k == 0:
            term = mag
        else:
            term = f"{'' if mag == '1' else mag}{var}" + (f"^{k}" if k > 1 else "")
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(f"+ {term}" if c > 0 else f"- {term}")
    return " ".join(parts) if parts else "0"
