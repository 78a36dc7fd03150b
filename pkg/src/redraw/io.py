"""File formats: cover-edge lists, diagram documents and SVG/TikZ rendering.

The JSON diagram document (schema version 1) is the interchange format
between CLI commands; all writers are deterministic functions of their input.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .drawing import Drawing
from .order import OrderedSet, cover_relation, order_from_covers

SVG_MARGIN = 0.05
SVG_NODE_RADIUS = 0.04  # times the bounding-box height


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


def parse_cover_edges(text: str) -> OrderedSet:
    """Parse a cover-edge list: one `lower TAB upper` pair per line, lone
    tokens declare isolated elements, `#` starts a comment line."""
    elements: set[str] = set()
    pairs: set[tuple[str, str]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split("\t") if f.strip()]
        if len(fields) == 1:
            elements.add(fields[0])
        elif len(fields) == 2:
            elements.update(fields)
            if fields[0] != fields[1]:
                pairs.add((fields[0], fields[1]))
        else:
            raise ParseError(f"expected `lower TAB upper` or a lone element, got {raw!r}", lineno)
    return order_from_covers(elements, pairs)


def write_cover_edges(order: OrderedSet) -> str:
    """Inverse of parse_cover_edges, with isolated elements as lone tokens."""
    covers = cover_relation(order).pairs
    touched = {e for pair in covers for e in pair}
    lines = [f"{a}\t{b}" for a, b in covers]
    lines.extend(e for e in order.elements if e not in touched)
    return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class DiagramDocument:
    """A 2-d diagram ready for rendering: the order, coordinates keyed exactly
    by the elements, and run metadata (algorithm, params, seed)."""

    elements: tuple[str, ...]
    covers: tuple[tuple[str, str], ...]
    coordinates: dict[str, tuple[float, float]] = field(compare=True)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if set(self.coordinates) != set(self.elements):
            raise ValueError("coordinates must be keyed exactly by the elements")

    def order(self) -> OrderedSet:
        return order_from_covers(self.elements, self.covers)

    def drawing(self) -> Drawing:
        elements = tuple(sorted(self.elements))
        pts = np.array([self.coordinates[e] for e in elements], dtype=float)
        return Drawing(elements, pts.reshape(len(elements), 2))


def document_from_drawing(
    order: OrderedSet, drawing: Drawing, algorithm: str, params: dict, seed
) -> DiagramDocument:
    if drawing.dim != 2:
        raise ValueError("documents hold 2-d drawings")
    coords = {
        e: (float(p[0]), float(p[1])) for e, p in zip(drawing.elements, drawing.positions)
    }
    return DiagramDocument(
        elements=tuple(sorted(order.elements)),
        covers=cover_relation(order).pairs,
        coordinates=coords,
        metadata={"algorithm": algorithm, "params": dict(params), "seed": seed},
    )


def write_json(doc: DiagramDocument) -> str:
    payload = {
        "version": 1,
        "order": {
            "elements": sorted(doc.elements),
            "covers": [list(p) for p in sorted(doc.covers)],
        },
        "coordinates": {e: [doc.coordinates[e][0], doc.coordinates[e][1]] for e in sorted(doc.elements)},
        "metadata": doc.metadata,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def read_json(text: str) -> DiagramDocument:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(payload, dict) or payload.get("version") != 1:
        raise ParseError("expected a diagram document with version 1")
    try:
        elements = tuple(sorted(payload["order"]["elements"]))
        covers = tuple(sorted((a, b) for a, b in payload["order"]["covers"]))
        coordinates = {
            e: (float(x), float(y)) for e, (x, y) in payload["coordinates"].items()
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed diagram document: {exc}") from None
    return DiagramDocument(
        elements=elements,
        covers=covers,
        coordinates=coordinates,
        metadata=payload.get("metadata", {}),
    )


def _bounds(doc: DiagramDocument):
    xs = [c[0] for c in doc.coordinates.values()] or [0.0]
    ys = [c[1] for c in doc.coordinates.values()] or [0.0]
    return min(xs), min(ys), max(xs), max(ys)


def write_svg(doc: DiagramDocument) -> str:
    """SVG 1.1 text: cover lines under node circles, y axis flipped so greater
    elements render higher."""
    xmin, ymin, xmax, ymax = _bounds(doc)
    # degenerate extents (single node, one level) get a unit box
    width = max(xmax - xmin, 1.0e-6) if xmax - xmin > 1.0e-6 else 1.0
    height = max(ymax - ymin, 1.0e-6) if ymax - ymin > 1.0e-6 else 1.0
    pad_x = SVG_MARGIN * width
    pad_y = SVG_MARGIN * height
    radius = SVG_NODE_RADIUS * height

    def sx(x: float) -> str:
        return f"{x - xmin + pad_x:.6f}"

    def sy(y: float) -> str:
        return f"{ymax - y + pad_y:.6f}"

    view_w = f"{width + 2 * pad_x:.6f}"
    view_h = f"{height + 2 * pad_y:.6f}"
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="0 0 {view_w} {view_h}">',
        f'  <g stroke="black" stroke-width="{radius / 4:.6f}">',
    ]
    for a, b in sorted(doc.covers):
        xa, ya = doc.coordinates[a]
        xb, yb = doc.coordinates[b]
        out.append(
            f'    <line x1="{sx(xa)}" y1="{sy(ya)}" x2="{sx(xb)}" y2="{sy(yb)}" />'
        )
    out.append("  </g>")
    out.append('  <g fill="black">')
    for e in sorted(doc.elements):
        x, y = doc.coordinates[e]
        out.append(
            f'    <circle cx="{sx(x)}" cy="{sy(y)}" r="{radius:.6f}">'
            f"<title>{_xml_escape(e)}</title></circle>"
        )
    out.append("  </g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _xml_escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )


def write_tikz(doc: DiagramDocument) -> str:
    """TikZ fragment: one \\node per element, one \\draw per cover pair.
    Node names are sanitized; a comment header maps them to element ids."""
    names = {e: f"n{k}" for k, e in enumerate(sorted(doc.elements))}
    out = ["% node name -> element"]
    for e in sorted(doc.elements):
        out.append(f"% {names[e]} = {e}")
    out.append("\\begin{tikzpicture}")
    for e in sorted(doc.elements):
        x, y = doc.coordinates[e]
        out.append(
            f"  \\node[circle,fill,inner sep=1.5pt] ({names[e]}) at ({x:.6f},{y:.6f}) {{}};"
        )
    for a, b in sorted(doc.covers):
        out.append(f"  \\draw ({names[a]}) -- ({names[b]});")
    out.append("\\end{tikzpicture}")
    return "\n".join(out) + "\n"
