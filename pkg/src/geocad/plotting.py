"""SVG rendering of two-dimensional cell decompositions.

Every drawn cell is one matplotlib artist whose ``gid`` is ``cell-<path>``,
so the SVG text carries one ``id="cell-..."`` group per region.
"""

from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from gmpy2 import mpq  # noqa: E402

from .cadlift import Cell, CellTree, fiber_sections  # noqa: E402
from .realalg import RealAlgebraicNumber  # noqa: E402

__all__ = ["emit_svg", "default_bounds"]

_PALETTE = plt.get_cmap("tab10").colors
_COLUMN_SAMPLES = 48


def _color(cell: Cell):
    bits = sum(1 << k for k, v in sorted(cell.membership.items()) if v)
    return _PALETTE[bits % len(_PALETTE)]


def _gid(cell: Cell) -> str:
    return "cell-" + "-".join(map(str, cell.path))


def default_bounds(tree: CellTree) -> tuple[tuple[float, float], tuple[float, float]]:
    """Box around every level-1 and level-2 sample, with a unit margin."""
    xs = [float(c.sample[0]) for c in tree.level(1)] or [0.0]
    ys = [float(c.sample[1]) for c in tree.level(2)] or [0.0]
    return (min(xs) - 1, max(xs) + 1), (min(ys) - 1, max(ys) + 1)


def _column_sections(tree: CellTree, x: float) -> list[float]:
    pt = [RealAlgebraicNumber.rational(x)]
    return [float(r) for r, _ in fiber_sections(tree.precells[2], pt)]


def _band_limits(secs: list[float], index: int, ylim) -> tuple[float, float]:
    k = index // 2
    lo = secs[k - 1] if k >= 1 and k - 1 < len(secs) else ylim[0]
    hi = secs[k] if k < len(secs) else ylim[1]
    return lo, hi


def _draw_column(ax, tree: CellTree, parent: Cell, xlim, ylim) -> int:
    drawn = 0
    if parent.is_section:
        x = float(parent.sample[0])
        if not xlim[0] <= x <= xlim[1]:
            return 0
        secs = [float(c.sample[1]) for c in parent.children if c.is_section]
        for c in parent.children:
            if c.is_section:
                ax.plot([x], [float(c.sample[1])], "o", color=_color(c), markersize=4, gid=_gid(c))
            else:
                lo, hi = _band_limits(secs, c.index, ylim)
                ax.plot([x, x], [lo, hi], "-", color=_color(c), linewidth=2, gid=_gid(c))
            drawn += 1
        return drawn
    line = tree.line[parent.index]
    left = xlim[0] if line.lower is None else max(xlim[0], float(line.lower))
    right = xlim[1] if line.upper is None else min(xlim[1], float(line.upper))
    if left >= right:
        return 0
    a, b = mpq(left), mpq(right)
    xs = [a + (b - a) * k / (_COLUMN_SAMPLES + 1) for k in range(1, _COLUMN_SAMPLES + 1)]
    columns = [_column_sections(tree, x) for x in xs]
    nsec = sum(1 for c in parent.children if c.is_section)
    for c in parent.children:
        k = c.index // 2
        pts = [(float(x), s) for x, s in zip(xs, columns) if len(s) == nsec]
        if not pts:
            continue
        px = [x for x, _ in pts]
        if c.is_section:
            ax.plot(px, [s[k] for _, s in pts], "-", color=_color(c), linewidth=1.5, gid=_gid(c))
        else:
            lows = [_band_limits(s, c.index, ylim)[0] for _, s in pts]
            highs = [_band_limits(s, c.index, ylim)[1] for _, s in pts]
            ax.fill_between(px, lows, highs, color=_color(c), alpha=0.35, linewidth=0, gid=_gid(c))
        drawn += 1
    return drawn


def emit_svg(tree: CellTree, bounds=None, path: str | None = None, level: int = 2) -> str:
    """SVG of the level-2 cells of a decomposition: shaded regions plus section curves."""
    if level != 2:
        raise ValueError("only two-dimensional decompositions can be drawn")
    if tree.nvars < 2:
        raise ValueError("the decomposition has fewer than two variables")
    fig, ax = plt.subplots(figsize=(6, 6))
    if not tree.is_empty():
        xlim, ylim = bounds or default_bounds(tree)
        for parent in tree.level(1):
            _draw_column(ax, tree, parent, xlim, ylim)
        ax.set_xlim(*xlim)
        ax.set_ylim(*ylim)
        ax.set_xlabel(tree.ring.vars[0])
        ax.set_ylabel(tree.ring.vars[1])
    else:
        ax.set_axis_off()
    buf = io.StringIO()
    # fixed salt and no date keep the output byte-stable
    with matplotlib.rc_context({"svg.hashsalt": "geocad"}):
        fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
