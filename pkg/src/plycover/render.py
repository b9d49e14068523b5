"""Matplotlib rendering of instances and solutions to vector files.

Output is deterministic: artists are added in a fixed order with stable
gids, the SVG hash salt is pinned, and no timestamps are embedded, so
rendering the same inputs twice produces byte-identical files.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Rectangle

from .instances import Instance, Solution

__all__ = ["render_instance", "save_figure"]

_RC = {"svg.hashsalt": "plycover", "svg.fonttype": "path"}


def save_figure(fig, path) -> None:
    path = str(path)
    if path.endswith(".svg"):
        fig.savefig(path, metadata={"Date": None})
    else:
        fig.savefig(path)
    plt.close(fig)


def _bounds(inst: Instance) -> tuple[float, float, float, float]:
    xs = [v for s in inst.squares for v in (s.x_left, s.x_right)]
    ys = [v for s in inst.squares for v in (s.y_top, s.y_bottom)]
    xs += [p.x for p in inst.points]
    ys += [p.y for p in inst.points]
    if inst.line_y is not None:
        ys.append(inst.line_y)
    if inst.slab_y is not None:
        ys.extend(inst.slab_y)
    if not xs:
        xs = [0.0, 1.0]
    if not ys:
        ys = [0.0, 1.0]
    pad = 0.3
    return min(xs) - pad, max(xs) + pad, min(ys) - pad, max(ys) + pad


def render_instance(inst: Instance, solution: Solution | None = None, path=None):
    """Draw squares as outlines, points as dots, guide lines for the
    line/slab mode, and the solution's witness ply region shaded with a
    depth label.  Writes to path when given, else returns the figure."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(7.0, 5.0))
        x_lo, x_hi, y_lo, y_hi = _bounds(inst)

        guides = []
        if inst.mode == "line" and inst.line_y is not None:
            guides = [("stab-line", inst.line_y)]
        elif inst.mode == "slab" and inst.slab_y is not None:
            guides = [("slab-low", inst.slab_y[0]), ("slab-high", inst.slab_y[1])]
        for gid, y in guides:
            line = ax.axhline(y, color="#444444", lw=1.0, ls="--")
            line.set_gid(gid)

        chosen = set(solution.square_ids) if solution is not None else set()
        for s in sorted(inst.squares, key=lambda s: s.id):
            picked = s.id in chosen
            patch = Rectangle(
                (s.x_left, s.y_bottom),
                1.0,
                1.0,
                fill=False,
                edgecolor="#b03030" if picked else "#3465a4",
                lw=1.8 if picked else 1.0,
            )
            patch.set_gid(f"square-{s.id}")
            ax.add_patch(patch)

        for p in sorted(inst.points, key=lambda p: p.id):
            (dot,) = ax.plot(p.x, p.y, marker="o", ms=4.0, color="black", ls="")
            dot.set_gid(f"point-{p.id}")

        if solution is not None and solution.witness is not None:
            w = solution.witness
            rx_lo, rx_hi, ry_lo, ry_hi = w["rect"]
            patch = Rectangle(
                (rx_lo, ry_lo),
                rx_hi - rx_lo,
                ry_hi - ry_lo,
                facecolor="#f4a6a6",
                edgecolor="none",
                alpha=0.8,
                zorder=0,
            )
            patch.set_gid("region-0")
            ax.add_patch(patch)
            label = ax.annotate(
                str(w["depth"]),
                ((rx_lo + rx_hi) / 2.0, (ry_lo + ry_hi) / 2.0),
                ha="center",
                va="center",
                fontsize=9,
                color="#801515",
            )
            label.set_gid("region-0-label")

        ax.set_xlim(x_lo, x_hi)
        ax.set_ylim(y_lo, y_hi)
        ax.set_aspect("equal")
        ax.set_title(inst.name, fontsize=10)
        if path is not None:
            save_figure(fig, path)
            return None
        return fig


def render_ratio_histogram(ratios, path, title="solver / optimum ply ratio"):
    """Histogram figure for the compare report path."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        if ratios:
            ax.hist(ratios, bins=20, color="#3465a4", edgecolor="white")
        ax.set_xlabel("ratio")
        ax.set_ylabel("instances")
        ax.set_title(title, fontsize=10)
        save_figure(fig, path)


def render_scaling(rows, path):
    """Log-log wall-time plot for the bench report path.

    rows: iterable of (n, m, median_ms) tuples.
    """
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        by_n: dict[int, list[tuple[int, float]]] = {}
        for n, m, ms in rows:
            by_n.setdefault(n, []).append((m, ms))
        for n in sorted(by_n):
            series = sorted(by_n[n])
            ax.loglog(
                [m for m, _ in series],
                [ms for _, ms in series],
                marker="o",
                label=f"n={n}",
            )
        ax.set_xlabel("m (squares)")
        ax.set_ylabel("median solve time [ms]")
        ax.legend(fontsize=8)
        ax.set_title("solve time scaling", fontsize=10)
        save_figure(fig, path)
