"""Matplotlib renderings of the delimited CLI outputs.

Import is deferred to call time elsewhere in the package; importing this
module selects the Agg backend so figures render headlessly to files.
PNG metadata that would vary between runs is suppressed so rendered bytes
replay deterministically.
"""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .density import empirical_slope  # noqa: E402

_PNG_META = {"Software": None}


def _save(fig, path: str) -> str:
    fig.savefig(path, dpi=130, bbox_inches="tight", metadata=_PNG_META)
    plt.close(fig)
    return path


def render_classgroup(rows: Sequence[dict], path: str) -> str:
    """Class number against |delta| on log-log axes; 2-rank as color."""
    xs = [abs(int(r["delta"])) for r in rows]
    ys = [int(r["class_number"]) for r in rows]
    cs = [int(r["two_rank"]) for r in rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    sc = ax.scatter(xs, ys, c=cs, s=4, cmap="viridis", alpha=0.7)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("|discriminant|")
    ax.set_ylabel("class number")
    fig.colorbar(sc, ax=ax, label="2-rank")
    return _save(fig, path)


def render_rank2(rows: Sequence[dict], path: str) -> str:
    """Produced discriminants by scan index, split by admissibility."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for label, keep, marker in (
        ("admissible", True, "o"),
        ("rejected", False, "x"),
    ):
        pts = [
            (i, r["disc"])
            for i, r in enumerate(rows)
            if bool(r["admissible"]) is keep and int(r["disc"]) > 0
        ]
        if pts:
            ax.scatter(
                [p[0] for p in pts],
                [float(p[1]) for p in pts],
                s=14,
                marker=marker,
                label=label,
            )
    ax.set_yscale("log")
    ax.set_xlabel("scan index (lexicographic a, b, n)")
    ax.set_ylabel("discriminant D")
    ax.legend(loc="best")
    return _save(fig, path)


def render_tworank(rows: Sequence[dict], path: str) -> str:
    """Emitted d per solution triple, verified triples highlighted."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    xs = list(range(len(rows)))
    ys = [float(r["d"]) for r in rows]
    ok = [r.get("verified") is True for r in rows]
    ax.scatter(
        [x for x, o in zip(xs, ok) if o],
        [y for y, o in zip(ys, ok) if o],
        s=16, marker="o", label="verified",
    )
    ax.scatter(
        [x for x, o in zip(xs, ok) if not o],
        [y for y, o in zip(ys, ok) if not o],
        s=16, marker="x", label="other",
    )
    ax.set_yscale("log")
    ax.set_xlabel("triple index")
    ax.set_ylabel("d")
    ax.legend(loc="best")
    return _save(fig, path)


def render_density(rows: Sequence[dict], path: str) -> str:
    """Partial Euler products against the truncation prime."""
    xs = [int(r["p"]) for r in rows]
    ys = [float(r["partial"]) for r in rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.step(xs, ys, where="post", marker="o")
    ax.set_xlabel("truncation prime p")
    ax.set_ylabel("partial product")
    ax.set_ylim(0, 1.05)
    ax.grid(True, alpha=0.3)
    return _save(fig, path)


def render_census(rows: Sequence[dict], path: str) -> str:
    """Census counts on log-log axes with the empirical slope annotated."""
    pts = [(int(r["bound"]), int(r["count"])) for r in rows if int(r["count"]) > 0]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    if pts:
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o")
        ax.set_xscale("log")
        ax.set_yscale("log")
        slope = empirical_slope(pts)
        if slope is not None:
            ax.set_title(f"empirical log-log slope {slope:.3f}")
    ax.set_xlabel("bound X")
    ax.set_ylabel("count")
    ax.grid(True, which="both", alpha=0.3)
    return _save(fig, path)


def render_witness(rows: Sequence[dict], path: str) -> str:
    """Histogram of gcd degrees across line specializations."""
    degs = [int(r["gcd_degree"]) for r in rows]
    top = max(degs) if degs else 0
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.hist(degs, bins=range(0, top + 2), align="left", rwidth=0.8)
    ax.set_xlabel("deg gcd(u, u')")
    ax.set_ylabel("trials")
    ax.set_xticks(range(0, top + 1))
    return _save(fig, path)
