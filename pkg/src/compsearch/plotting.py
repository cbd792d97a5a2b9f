"""Renders the fitted source and efficiency curves to an image file.

The format follows the output path's extension (SVG is the intended
default). Curves are drawn over the restricted domain only; the dotted
verticals mark its edges.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .telemetry import RunMetrics, TelemetryPoint, cumulative_series, evaluate


def render_plot(metrics: RunMetrics, points: list[TelemetryPoint], out_path: str) -> None:
    if metrics.s_of_t is None or metrics.domain is None:
        raise ValueError("no fitted curve to plot; run produced fewer than two points")
    t0, t1 = metrics.domain
    ts = [t0 + (t1 - t0) * i / 400 for i in range(401)]
    s_values = [evaluate(metrics.s_of_t, t) for t in ts]
    e_values = [evaluate(metrics.e_of_t, t) for t in ts]
    series = cumulative_series(points)

    fig, (ax_s, ax_e) = plt.subplots(2, 1, figsize=(7.0, 7.5), sharex=True)
    ax_s.plot(ts, s_values, color="#2a5d8f", label="S(t) fitted")
    ax_s.scatter(
        [p.seconds for p in series],
        [p.sources for p in series],
        color="#b4452c",
        zorder=3,
        label="completion points",
    )
    ax_s.set_ylabel("sources compiled")
    ax_s.legend()

    ax_e.plot(ts, e_values, color="#3d7a4f", label="E(t) = S'(t)")
    ax_e.set_ylabel("sources / second")
    ax_e.set_xlabel("seconds since run start")
    ax_e.legend()

    for ax in (ax_s, ax_e):
        ax.axvline(t0, linestyle=":", color="#888")
        ax.axvline(t1, linestyle=":", color="#888")
        ax.grid(True, alpha=0.3)

    fig.suptitle("Retrieval telemetry (restricted domain)")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
