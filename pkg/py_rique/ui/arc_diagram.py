"""
SVG arc diagrams of linear layouts.

Vertices sit on a horizontal spine in layout order; every edge is a
half-circle above the spine, coloured by its page.
"""

import logging

import drawsvg as draw

from py_rique.rique_layout import LinearLayout

log = logging.getLogger("arc_diagram")

PAGE_COLOURS = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#ff7f0e",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#17becf",
)


class ArcDiagram:
    """Renders a `LinearLayout`.

    Attributes:
        spacing: distance between neighbouring vertices on the spine
        margin: blank border around the drawing
        font_size: size of the vertex labels
    """

    def __init__(self, spacing: float = 40.0, margin: float = 20.0, font_size: float = 12.0):
        self.spacing = spacing
        self.margin = margin
        self.font_size = font_size

    def x(self, position: int) -> float:
        return self.margin + position * self.spacing

    def render(self, layout: LinearLayout) -> draw.Drawing:
        n = layout.n
        width = 2 * self.margin + self.spacing * max(n - 1, 0)
        height = 2 * self.margin + self.spacing * max(n - 1, 0) / 2 + 2 * self.font_size
        baseline = height - self.margin - self.font_size

        d = draw.Drawing(width, height)
        d.append(draw.Rectangle(0, 0, width, height, fill="white"))
        d.append(draw.Line(self.x(0), baseline, self.x(max(n - 1, 0)), baseline, stroke="black"))

        for p, page in enumerate(layout.pages):
            colour = PAGE_COLOURS[p % len(PAGE_COLOURS)]
            for u, v in sorted(page):
                x1, x2 = sorted((self.x(layout.position(u)), self.x(layout.position(v))))
                r = (x2 - x1) / 2
                arc = draw.Path(stroke=colour, stroke_width=1.5, fill="none")
                arc.M(x1, baseline).A(r, r, 0, 0, 1, x2, baseline)
                d.append(arc)

        for i, v in enumerate(layout.order):
            d.append(draw.Circle(self.x(i), baseline, 3, fill="black"))
            d.append(
                draw.Text(str(v), self.font_size, self.x(i), baseline + self.font_size + 2, text_anchor="middle")
            )
        log.debug(f"{n} vertices, {layout.page_count} pages, {width}x{height}")
        return d


def save_arc_diagram(layout: LinearLayout, path: str) -> None:
    ArcDiagram().render(layout).save_svg(path)
