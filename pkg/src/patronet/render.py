"""DOT and SVG output for network maps.

Edges point from subordinate to Ordinary and are styled by weight level,
lightest/thinnest for 1 through heaviest for 3. Active actors are drawn as
circles and retired ones as squares, sized by (weighted) indegree.
"""

from __future__ import annotations

from collections.abc import Collection, Mapping
from dataclasses import dataclass, field
from xml.sax.saxutils import escape, quoteattr

from .centrality import DegreeKey, DegreeRow
from .errors import InvalidParams, MissingCoordinates, UncoveredNode
from .model import PatronageNetwork, Status

Coordinates = Mapping[str, tuple[float, float]]


def _default_edges() -> dict[int, tuple[float, str]]:
    return {1: (1.0, "#000000"), 2: (2.0, "#1f5fbf"), 3: (3.5, "#c0392b")}


@dataclass(frozen=True)
class RenderStyle:
    min_px: float = 4.0
    px_per_indegree: float = 1.0
    size_key: DegreeKey = DegreeKey.IN_WEIGHTED
    edges: Mapping[int, tuple[float, str]] = field(default_factory=_default_edges)
    canvas: float = 1000.0
    margin: float = 0.05
    labels: bool = True
    faded_opacity: float = 0.2

    def __post_init__(self) -> None:
        if set(self.edges) != {1, 2, 3}:
            raise InvalidParams("edge styles must cover weights 1, 2 and 3")
        widths = [self.edges[w][0] for w in (1, 2, 3)]
        if not widths[0] < widths[1] < widths[2]:
            raise InvalidParams("edge widths must strictly increase with weight")
        if self.min_px <= 0 or self.px_per_indegree < 0:
            raise InvalidParams("node sizes must be positive")
        if not 0 <= self.margin < 0.5:
            raise InvalidParams("margin must be in [0, 0.5)")

    def radius(self, indegree: float) -> float:
        return self.min_px + self.px_per_indegree * indegree


def _check_layout(network: PatronageNetwork, layout: Coordinates) -> None:
    for a in sorted(network.actor_ids()):
        if a not in layout:
            raise MissingCoordinates(f"no coordinates for {a!r}")


def _dot_id(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(
    network: PatronageNetwork,
    layout: Coordinates | None = None,
    style: RenderStyle | None = None,
    name: str = "patronage",
) -> str:
    style = style or RenderStyle()
    if layout is not None:
        _check_layout(network, layout)
    lines = [f"digraph {_dot_id(name)} {{", "  node [style=filled, fillcolor=\"#dddddd\"];"]
    for a in sorted(network.actor_ids()):
        actor = network.actor(a)
        attrs = [
            f"label={_dot_id(actor.name)}",
            f"shape={'ellipse' if actor.status is Status.ACTIVE else 'box'}",
        ]
        if layout is not None:
            x, y = layout[a]
            attrs.append(f'pos="{x:.4f},{y:.4f}!"')
        lines.append(f"  {_dot_id(a)} [{', '.join(attrs)}];")
    for t in sorted(network.ties()):
        width, color = style.edges[t.weight]
        lines.append(
            f"  {_dot_id(t.source)} -> {_dot_id(t.target)} "
            f"[weight={t.weight}, penwidth={width:g}, color=\"{color}\"];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def _fit(layout: Coordinates, ids: list[str], style: RenderStyle) -> dict[str, tuple[float, float]]:
    """Uniformly rescale coordinates into the canvas, keeping the aspect ratio."""
    if not ids:
        return {}
    xs = [layout[a][0] for a in ids]
    ys = [layout[a][1] for a in ids]
    lo_x, lo_y = min(xs), min(ys)
    span = max(max(xs) - lo_x, max(ys) - lo_y)
    inner = style.canvas * (1 - 2 * style.margin)
    pad = style.canvas * style.margin
    if span == 0:
        mid = style.canvas / 2
        return {a: (mid, mid) for a in ids}
    s = inner / span
    off_x = pad + (inner - (max(xs) - lo_x) * s) / 2
    off_y = pad + (inner - (max(ys) - lo_y) * s) / 2
    # SVG y grows downwards
    return {
        a: (off_x + (layout[a][0] - lo_x) * s, style.canvas - (off_y + (layout[a][1] - lo_y) * s))
        for a in ids
    }


def render_svg(
    network: PatronageNetwork,
    layout: Coordinates,
    degrees: Collection[DegreeRow] | Mapping[str, DegreeRow],
    style: RenderStyle | None = None,
    highlight: Collection[str] | None = None,
) -> str:
    """Draw the network; nodes outside ``highlight`` (when given) are faded."""
    style = style or RenderStyle()
    _check_layout(network, layout)
    table = degrees if isinstance(degrees, Mapping) else {r.actor: r for r in degrees}
    ids = sorted(network.actor_ids())
    for a in ids:
        if a not in table:
            raise UncoveredNode(f"degree table has no row for {a!r}")
    pos = _fit(layout, ids, style)
    radius = {a: style.radius(table[a].value(style.size_key)) for a in ids}
    keep = None if highlight is None else set(highlight)

    def opacity(*nodes: str) -> str:
        if keep is None or all(n in keep for n in nodes):
            return ""
        return f' opacity="{style.faded_opacity:g}"'

    c = style.canvas
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {c:g} {c:g}" '
        f'width="{c:g}" height="{c:g}">',
        "<defs>",
    ]
    for w in (1, 2, 3):
        _, color = style.edges[w]
        out.append(
            f'<marker id="arrow-w{w}" viewBox="0 0 10 10" refX="10" refY="5" '
            f'markerWidth="4" markerHeight="4" orient="auto-start-reverse">'
            f'<path d="M 0 0 L 10 5 L 0 10 z" fill="{color}"/></marker>'
        )
    out.append("</defs>")
    out.append('<g class="ties">')
    for t in sorted(network.ties()):
        (x1, y1), (x2, y2) = pos[t.source], pos[t.target]
        dx, dy = x2 - x1, y2 - y1
        length = (dx * dx + dy * dy) ** 0.5
        if length > 0:
            # stop the line at the target's boundary so the arrowhead shows
            cut = min(radius[t.target], length) / length
            x2, y2 = x2 - dx * cut, y2 - dy * cut
        width, color = style.edges[t.weight]
        out.append(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
            f'stroke="{color}" stroke-width="{width:g}" marker-end="url(#arrow-w{t.weight})" '
            f'data-weight="{t.weight}" data-from={quoteattr(t.source)} '
            f"data-to={quoteattr(t.target)}{opacity(t.source, t.target)}/>"
        )
    out.append("</g>")
    out.append('<g class="actors">')
    for a in ids:
        actor = network.actor(a)
        x, y = pos[a]
        r = radius[a]
        title = f"<title>{escape(actor.name)}</title>"
        common = f'fill="#f2f2f2" stroke="#333333" data-id={quoteattr(a)}{opacity(a)}'
        if actor.status is Status.ACTIVE:
            out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{r:.2f}" {common}>{title}</circle>')
        else:
            out.append(
                f'<rect x="{x - r:.2f}" y="{y - r:.2f}" width="{2 * r:.2f}" height="{2 * r:.2f}" '
                f"{common}>{title}</rect>"
            )
    out.append("</g>")
    if style.labels:
        out.append('<g class="labels" font-family="sans-serif" font-size="10">')
        for a in ids:
            x, y = pos[a]
            label = network.actor(a).name
            if network.actor(a).status is not Status.ACTIVE:
                label = f"({label})"
            out.append(
                f'<text x="{x + radius[a] + 2:.2f}" y="{y + 3:.2f}"{opacity(a)}>{escape(label)}</text>'
            )
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
