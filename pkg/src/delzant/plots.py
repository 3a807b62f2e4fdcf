"""Figure rendering for exported reports.

Figures are written next to the delimited sample data: a residual
histogram always, the sampled moment image over the polytope outline
in dimensions 1 and 2, and the fan rays in dimension 2.  Headless
backend; nothing here affects the exact pipeline.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _polygon_edges(polytope):
    """Vertex pairs forming the edges of a 2d polytope."""
    verts = [tuple(float(c) for c in v) for v in polytope.vertices]
    edges = []
    for i in range(polytope.num_facets):
        tight = [v for v, exact in zip(verts, polytope.vertices)
                 if polytope.slack(exact, i) == 0]
        if len(tight) == 2:
            edges.append(tight)
    return edges


def render_residual_histogram(path, rows) -> Path:
    residuals = np.array([r for _, r in rows])
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(np.log10(np.maximum(residuals, 1e-18)), bins=40, color="#336699")
    ax.set_xlabel("log10 roundtrip residual")
    ax.set_ylabel("samples")
    ax.set_title("moment roundtrip residuals")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return Path(path)


def render_moment_image(path, polytope, rows) -> Path | None:
    n = polytope.dim
    if n > 2:
        return None
    xs = np.array([coords for coords, _ in rows])
    residuals = np.array([r for _, r in rows])
    fig, ax = plt.subplots(figsize=(6, 4.5))
    if n == 1:
        ax.scatter(xs[:, 0], residuals, s=4, alpha=0.5, color="#336699")
        for v in polytope.vertices:
            ax.axvline(float(v[0]), color="#993333", lw=1)
        ax.set_xlabel("x")
        ax.set_ylabel("residual")
        ax.set_yscale("symlog", linthresh=1e-16)
    else:
        sc = ax.scatter(
            xs[:, 0], xs[:, 1], c=np.log10(np.maximum(residuals, 1e-18)),
            s=5, alpha=0.6, cmap="viridis",
        )
        for a, b in _polygon_edges(polytope):
            ax.plot([a[0], b[0]], [a[1], b[1]], color="#993333", lw=1.5)
        fig.colorbar(sc, ax=ax, label="log10 residual")
        ax.set_aspect("equal")
        ax.set_xlabel("x0")
        ax.set_ylabel("x1")
    ax.set_title("sampled moment image")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return Path(path)


def render_fan(path, fan) -> Path | None:
    if fan.data.dim != 2:
        return None
    fig, ax = plt.subplots(figsize=(5, 5))
    rays = set()
    for _, cone in fan.cones:
        rays.update(cone.rays)
    for r in sorted(rays):
        v = np.array(r, dtype=float)
        v = v / np.linalg.norm(v)
        ax.annotate(
            "", xy=v, xytext=(0, 0),
            arrowprops=dict(arrowstyle="->", color="#336699", lw=1.6),
        )
        ax.annotate(str(tuple(r)), xy=v * 1.12, ha="center", va="center", fontsize=8)
    ax.set_xlim(-1.4, 1.4)
    ax.set_ylim(-1.4, 1.4)
    ax.set_aspect("equal")
    ax.axhline(0, color="0.8", lw=0.5)
    ax.axvline(0, color="0.8", lw=0.5)
    ax.set_title("fan rays")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return Path(path)


def render_report_figures(outdir, polytope, fan, rows) -> list[Path]:
    outdir = Path(outdir)
    written = []
    written.append(render_residual_histogram(outdir / "fig_residuals.png", rows))
    p = render_moment_image(outdir / "fig_moment_image.png", polytope, rows)
    if p:
        written.append(p)
    p = render_fan(outdir / "fig_fan.png", fan)
    if p:
        written.append(p)
    return written
