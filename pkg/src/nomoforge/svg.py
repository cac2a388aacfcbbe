"""Deterministic SVG 1.1 emission for nomogram layouts.

Pure string building: every numeric attribute is formatted to exactly two
decimals and elements are written in layout order, so identical layouts
produce byte-identical documents on every run and every machine.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .layout import (
    Marker,
    NomogramLayout,
    Panel,
    PolyLine,
    ReferenceLine,
    ROW_HEIGHT,
    Text,
    Tile,
)

_PAD = 16.0
_TITLE_BAND = 32.0
_PANEL_TITLE_DY = -8.0
_TICK_LEN = 4.0
_AXIS_BAND = 40.0
_GUTTER_LABELED = 118.0
_GUTTER_PLAIN = 34.0
_TILE_INSET = 1.0
_MARKER_R = 3.5

_FONT = "Helvetica, Arial, sans-serif"
_GRID_COLOR = "#CCCCCC"
_TEXT_COLOR = "#333333"
_REFLINE_COLOR = "#555555"


def _f(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _text(x, y, content, anchor="middle", size=11.0, color=_TEXT_COLOR) -> str:
    return (
        f'<text x="{_f(x)}" y="{_f(y)}" text-anchor="{anchor}" '
        f'font-family="{_FONT}" font-size="{_f(size)}" fill="{color}">'
        f"{escape(content)}</text>"
    )


class _PanelBox:
    """Pixel frame of one panel: label gutter plus plot rectangle."""

    def __init__(self, panel: Panel, x: float, gutter: float, plot_w: float, y: float, plot_h: float):
        self.panel = panel
        self.x = x + gutter
        self.w = plot_w
        self.y = y
        self.h = plot_h

    def map_x(self, v: float) -> float:
        lo, hi = self.panel.x_domain
        span = (hi - lo) or 1.0
        return self.x + (v - lo) / span * self.w

    def row_y(self, row: float) -> float:
        return self.y + (row + 0.5) * ROW_HEIGHT

    def col_x(self, col: float) -> float:
        return self.x + col * (self.w / max(self.panel.n_cols, 1))

    @property
    def col_w(self) -> float:
        return self.w / max(self.panel.n_cols, 1)


def _emit_element(box: _PanelBox, element) -> list[str]:
    out = []
    if isinstance(element, Tile):
        x = box.col_x(element.col) + _TILE_INSET
        y = box.y + element.row * ROW_HEIGHT + _TILE_INSET
        w = box.col_w - 2 * _TILE_INSET
        h = ROW_HEIGHT - 2 * _TILE_INSET
        out.append(
            f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" fill="{element.color}"/>'
        )
    elif isinstance(element, Marker):
        out.append(
            f'<circle cx="{_f(box.map_x(element.x))}" cy="{_f(box.row_y(element.row))}" '
            f'r="{_f(_MARKER_R)}" fill="{element.color}"/>'
        )
    elif isinstance(element, PolyLine):
        pts = " ".join(f"{_f(box.map_x(x))},{_f(box.row_y(r))}" for x, r in element.points)
        out.append(f'<polyline points="{pts}" fill="none" stroke="{element.color}" stroke-width="1.00"/>')
    elif isinstance(element, ReferenceLine):
        x = box.map_x(element.x)
        out.append(
            f'<line x1="{_f(x)}" y1="{_f(box.y)}" x2="{_f(x)}" y2="{_f(box.y + box.h)}" '
            f'stroke="{_REFLINE_COLOR}" stroke-width="1.00" stroke-dasharray="2,3"/>'
        )
    elif isinstance(element, Text):
        x = box.map_x(element.x) if box.panel.n_cols == 0 else box.col_x(element.x)
        out.append(_text(x, box.row_y(element.row) + 4.0, element.text, size=11.0))
    else:
        raise TypeError(f"unknown layout element {element!r}")
    return out


def _emit_panel(box: _PanelBox) -> list[str]:
    p = box.panel
    out = [f'<g data-role="{p.role}">']
    out.append(
        f'<rect x="{_f(box.x)}" y="{_f(box.y)}" width="{_f(box.w)}" height="{_f(box.h)}" '
        f'fill="none" stroke="{_GRID_COLOR}" stroke-width="1.00"/>'
    )
    out.append(_text(box.x + box.w / 2, box.y + _PANEL_TITLE_DY, p.title, size=12.0))
    for row, label in p.y_ticks:
        out.append(_text(box.x - 6.0, box.row_y(row) + 4.0, label, anchor="end", size=10.0))
    for value, label in p.x_ticks:
        x = box.col_x(value) if p.n_cols > 0 else box.map_x(value)
        y0 = box.y + box.h
        out.append(
            f'<line x1="{_f(x)}" y1="{_f(y0)}" x2="{_f(x)}" y2="{_f(y0 + _TICK_LEN)}" '
            f'stroke="{_GRID_COLOR}" stroke-width="1.00"/>'
        )
        out.append(_text(x, y0 + 16.0, label, size=10.0))
    out.append(_text(box.x + box.w / 2, box.y + box.h + 32.0, p.x_label, size=11.0))
    for element in p.elements:
        out.extend(_emit_element(box, element))
    out.append("</g>")
    return out


def _boxes(layout: NomogramLayout) -> list[_PanelBox]:
    plot_h = max(layout.n_rows, 1) * ROW_HEIGHT
    plot_y = _PAD + _TITLE_BAND
    gutters = [_GUTTER_LABELED if p.y_ticks else _GUTTER_PLAIN for p in layout.panels]
    avail = layout.width - 2 * _PAD - sum(gutters)
    plot_w = avail / len(layout.panels)
    boxes = []
    x = _PAD
    for panel, gutter in zip(layout.panels, gutters):
        boxes.append(_PanelBox(panel, x, gutter, plot_w, plot_y, plot_h))
        x += gutter + plot_w
    return boxes


def panel_frames(layout: NomogramLayout) -> list[dict]:
    """Pixel frame per panel, for overlay drawing on top of the SVG.

    Shares the geometry of render_svg, so client-side highlights computed
    from these frames line up with the rendered tiles and markers.
    """
    return [
        {
            "role": box.panel.role,
            "x": box.x,
            "y": box.y,
            "width": box.w,
            "height": box.h,
            "row_height": ROW_HEIGHT,
            "n_cols": box.panel.n_cols,
            "col_width": box.col_w if box.panel.n_cols > 0 else None,
            "x_domain": list(box.panel.x_domain),
        }
        for box in _boxes(layout)
    ]


def render_svg(layout: NomogramLayout) -> bytes:
    """Standalone SVG document for a layout; byte-identical for equal layouts."""
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_f(layout.width)}" height="{_f(layout.height)}" '
        f'viewBox="0 0 {_f(layout.width)} {_f(layout.height)}">',
        f'<rect x="0.00" y="0.00" width="{_f(layout.width)}" height="{_f(layout.height)}" fill="#FFFFFF"/>',
        _text(layout.width / 2, _PAD + 14.0, layout.title, size=14.0),
    ]

    boxes = _boxes(layout)
    plot_y = boxes[0].y
    plot_h = boxes[0].h
    for box in boxes:
        out.extend(_emit_panel(box))

    legend_y = plot_y + plot_h + _AXIS_BAND
    lx = _PAD
    for label, color in layout.legend:
        out.append(
            f'<rect x="{_f(lx)}" y="{_f(legend_y)}" width="12.00" height="12.00" fill="{color}"/>'
        )
        out.append(_text(lx + 16.0, legend_y + 10.0, label, anchor="start", size=10.0))
        lx += 16.0 + 7.0 * len(label) + 18.0
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")
