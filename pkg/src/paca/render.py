"""Text and SVG renderings of space-time diagrams."""

from __future__ import annotations

from html import escape

from .core import SpaceTimeDiagram


def state_label(q, width: int = 14) -> str:
    """A short printable name for a state; structured states are abbreviated."""
    if isinstance(q, str):
        text = q
    elif isinstance(q, tuple):
        text = ":".join(state_label(x, width) for x in q if x is not None and x != ())
    else:
        text = str(q)
    return text if len(text) <= width else text[: width - 1] + "~"


def render_text(d: SpaceTimeDiagram) -> str:
    """One row per line; accepting cells carry a ``*``, the accepting row an arrow."""
    if not d.rows:
        raise ValueError("empty diagram")
    labels = [[state_label(q) + ("*" if f else "") for q, f in zip(row, flags)]
              for row, flags in zip(d.rows, d.accepting)]
    width = max(len(x) for row in labels for x in row)
    lines = []
    for t, row in enumerate(labels):
        line = (f"{t:>3} | " + " ".join(x.ljust(width) for x in row)).rstrip()
        if t == d.accept_step:
            line += "  <- all accepting"
        lines.append(line)
    return "\n".join(lines) + "\n"


CELL_W = 56
CELL_H = 24
MARGIN = 40


def render_svg(d: SpaceTimeDiagram) -> str:
    """A grid with one labelled cell per state; accepting cells are shaded and
    the first all-accepting row is outlined."""
    if not d.rows:
        raise ValueError("empty diagram")
    n, h = d.width, len(d.rows)
    W = MARGIN + n * CELL_W + 10
    H = MARGIN + h * CELL_H + 10
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}" font-family="monospace" font-size="11">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
    ]
    for i in range(n):
        x = MARGIN + i * CELL_W + CELL_W // 2
        out.append(f'<text x="{x}" y="{MARGIN - 8}" text-anchor="middle" fill="#555">{i}</text>')
    for t, (row, flags) in enumerate(zip(d.rows, d.accepting)):
        y = MARGIN + t * CELL_H
        out.append(f'<text x="{MARGIN - 6}" y="{y + 16}" text-anchor="end" fill="#555">{t}</text>')
        for i, (q, f) in enumerate(zip(row, flags)):
            x = MARGIN + i * CELL_W
            fill = "#b7e4b0" if f else "#f4f4f4"
            out.append(f'<rect x="{x}" y="{y}" width="{CELL_W}" height="{CELL_H}" '
                       f'fill="{fill}" stroke="#999"/>')
            out.append(f'<text x="{x + CELL_W // 2}" y="{y + 16}" text-anchor="middle">'
                       f'{escape(state_label(q, 8))}</text>')
    if d.accept_step is not None:
        y = MARGIN + d.accept_step * CELL_H
        out.append(f'<rect x="{MARGIN}" y="{y}" width="{n * CELL_W}" height="{CELL_H}" '
                   f'fill="none" stroke="#1a7f37" stroke-width="3"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render(d: SpaceTimeDiagram, fmt: str = "text") -> str:
    if fmt == "text":
        return render_text(d)
    if fmt == "svg":
        return render_svg(d)
    raise ValueError(f"unknown format {fmt!r}")
