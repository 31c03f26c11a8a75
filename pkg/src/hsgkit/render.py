"""Plain-text rendering of a grid as a two-axis table."""
from __future__ import annotations

import unicodedata

from .errors import NotFoundError
from .grid import Grid

COLLISION = "‼"


def _width(s: str) -> int:
    # combining marks take no column; east-asian wide glyphs take two
    w = 0
    for ch in s:
        if unicodedata.combining(ch):
            continue
        w += 2 if unicodedata.east_asian_width(ch) in ("W", "F") else 1
    return w


def _pad(s: str, n: int) -> str:
    return s + " " * (n - _width(s))


def _cell(g: Grid, tokens: list) -> str:
    """Labels of the tokens in one cell; undefined tokens are bracketed."""
    parts = []
    for t in tokens:
        lab = g.labels.get(t, t)
        parts.append(lab if g.delta[t] else f"[{lab}]")
    defined = [t for t in tokens if g.delta[t]]
    text = " / ".join(parts)
    return f"{COLLISION} {text}" if len(defined) > 1 else text


def render_grid_table(g: Grid, rows: str, cols: str, corner: str = "", caption: str = "") -> str:
    """Rows follow the row axis order (reversed when it is descending).

    Every token must have coordinates on both axes; other axes are ignored,
    so tokens differing only there share a cell.
    """
    for name in (rows, cols):
        if name not in g.axis_names:
            raise NotFoundError(f"grid has no axis {name!r}")
    ra, ca = g.axis(rows), g.axis(cols)
    r_idx = list(reversed(ra.indices)) if ra.descending else list(ra.indices)
    c_idx = list(ca.indices)
    cells: dict = {}
    for t in g.tokens:
        cells.setdefault((g.coords[(t, rows)], g.coords[(t, cols)]), []).append(t)
    header = [corner or f"{rows} \\ {cols}", *(ca.label(i) for i in c_idx)]
    body = [] if not g.tokens else [
        [ra.label(r), *(_cell(g, cells.get((r, c), [])) for c in c_idx)] for r in r_idx
    ]
    widths = [max(_width(row[k]) for row in [header, *body]) for k in range(len(header))]

    def line(row):
        return ("| " + " | ".join(_pad(v, w) for v, w in zip(row, widths)) + " |").rstrip() + "\n"

    rule = "|" + "|".join("-" * (w + 2) for w in widths) + "|\n"
    out = line(header) + rule + "".join(line(r) for r in body)
    if caption:
        out += "\n" + caption + "\n"
    return out
