"""Readability metrics for 2-d diagrams and the truncated relative
distributivity of lattices."""

import json
from dataclasses import dataclass

import numpy as np

from .drawing import Drawing, satisfies_vertical_constraint
from .geometry import point_segment_distance
from .order import NotALattice, OrderedSet, bottom, is_lattice, _glb_index, _lub_index

COINCIDENCE_TOL = 1e-9
NODE_LINE_TOL = 1e-9
DIRECTION_BUCKET = 1e-6


@dataclass(frozen=True)
class Violation:
    """One failed hard constraint of a diagram."""

    kind: str  # "VerticalOrder" | "CoincidentNodes" | "NodeOnLine"
    members: tuple[str, ...]

    def __str__(self):
        return f"{self.kind}{self.members!r}"


@dataclass(frozen=True)
class MetricsReport:
    crossings: int
    min_node_line_distance: float | None
    distinct_edge_directions: int
    vertical_ok: bool
    coincident_nodes: int
    rtd: float | None

    def to_dict(self) -> dict:
        return {
            "crossings": self.crossings,
            "min_node_line_distance": self.min_node_line_distance,
            "distinct_edge_directions": self.distinct_edge_directions,
            "vertical_ok": self.vertical_ok,
            "coincident_nodes": self.coincident_nodes,
            "rtd": self.rtd,
        }

    def to_text(self) -> str:
        lines = []
        for key, value in self.to_dict().items():
            if value is None:
                rendered = "n/a"
            elif isinstance(value, bool):
                rendered = "true" if value else "false"
            elif isinstance(value, float):
                rendered = repr(value)
            else:
                rendered = str(value)
            lines.append(f"{key}: {rendered}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True) + "\n"


def _segments(order: OrderedSet, drawing: Drawing):
    pts = drawing.positions
    return [
        (int(i), int(j), pts[i], pts[j])
        for i, j in order.cover_index_pairs
    ]


def _orient(p: np.ndarray, q: np.ndarray, r: np.ndarray) -> float:
    return float((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))


def _proper_crossing(p1, p2, p3, p4) -> bool:
    """Open segments intersect in a single interior point; collinear overlap
    does not count."""
    d1 = _orient(p3, p4, p1)
    d2 = _orient(p3, p4, p2)
    d3 = _orient(p1, p2, p3)
    d4 = _orient(p1, p2, p4)
    return d1 * d2 < 0 and d3 * d4 < 0


def crossing_count(order: OrderedSet, drawing: Drawing) -> int:
    """Number of unordered cover-edge pairs whose open segments properly
    intersect; pairs sharing an element never count."""
    _require_2d(drawing)
    segments = _segments(order, drawing)
    count = 0
    for a in range(len(segments)):
        i1, j1, p1, p2 = segments[a]
        for b in range(a + 1, len(segments)):
            i2, j2, p3, p4 = segments[b]
            if len({i1, j1, i2, j2}) < 4:
                continue
            if _proper_crossing(p1, p2, p3, p4):
                count += 1
    return count


def validate_drawing(order: OrderedSet, drawing: Drawing) -> list[Violation]:
    """Check the hard constraints: vertical order, no coincident nodes, no
    node touching a non-incident line.  Empty list means all hold."""
    _require_2d(drawing)
    violations: list[Violation] = []
    pts = drawing.positions
    y = pts[:, -1]
    for i, j in np.argwhere(order.strict & (y[:, None] >= y[None, :])):
        violations.append(Violation("VerticalOrder", (order.elements[i], order.elements[j])))
    for i in range(order.n):
        for j in range(i + 1, order.n):
            if np.linalg.norm(pts[i] - pts[j]) < COINCIDENCE_TOL:
                violations.append(
                    Violation("CoincidentNodes", (order.elements[i], order.elements[j]))
                )
    for i, j, pa, pb in _segments(order, drawing):
        for k in range(order.n):
            if k == i or k == j:
                continue
            if point_segment_distance(pts[k], (pa, pb)) < NODE_LINE_TOL:
                violations.append(
                    Violation(
                        "NodeOnLine",
                        (order.elements[k], order.elements[i], order.elements[j]),
                    )
                )
    return violations


def _coincident_pairs(drawing: Drawing) -> int:
    pts = drawing.positions
    count = 0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if np.linalg.norm(pts[i] - pts[j]) < COINCIDENCE_TOL:
                count += 1
    return count


def _min_node_line_distance(order: OrderedSet, drawing: Drawing) -> float | None:
    pts = drawing.positions
    best = None
    for i, j, pa, pb in _segments(order, drawing):
        for k in range(order.n):
            if k == i or k == j:
                continue
            d = point_segment_distance(pts[k], (pa, pb))
            if best is None or d < best:
                best = d
    return best


def _distinct_directions(order: OrderedSet, drawing: Drawing) -> int:
    buckets = set()
    for _, _, pa, pb in _segments(order, drawing):
        v = pb - pa
        norm = np.linalg.norm(v)
        if norm == 0.0:
            buckets.add(("degenerate",))
            continue
        u = v / norm
        buckets.add(tuple(round(float(c) / DIRECTION_BUCKET) for c in u))
    return len(buckets)


def rtd(order: OrderedSet) -> float:
    """Share of distributive ordered triples x&(y|z) == (x&y)|(x&z) among all
    pairwise-distinct triples, excluding triples whose evaluated term x&(y|z)
    is the bottom element (from numerator and denominator alike).

    Vacuously 1.0 when no triple survives the exclusion.
    """
    if not is_lattice(order):
        raise NotALattice("rtd is only defined for lattices")
    n = order.n
    bot = bottom(order)
    bot_idx = order.index(bot) if bot is not None else -1
    meet_t = np.full((n, n), -1, dtype=int)
    join_t = np.full((n, n), -1, dtype=int)
    for i in range(n):
        for j in range(i, n):
            m = _glb_index(order, i, j)
            jn = _lub_index(order, i, j)
            meet_t[i, j] = meet_t[j, i] = m
            join_t[i, j] = join_t[j, i] = jn
    total = 0
    good = 0
    for x in range(n):
        for y_ in range(n):
            if y_ == x:
                continue
            for z in range(n):
                if z == x or z == y_:
                    continue
                left = meet_t[x, join_t[y_, z]]
                if left == bot_idx:
                    continue
                total += 1
                if left == join_t[meet_t[x, y_], meet_t[x, z]]:
                    good += 1
    return good / total if total else 1.0


def metrics_report(order: OrderedSet, drawing: Drawing) -> MetricsReport:
    _require_2d(drawing)
    lattice = is_lattice(order)
    return MetricsReport(
        crossings=crossing_count(order, drawing),
        min_node_line_distance=_min_node_line_distance(order, drawing),
        distinct_edge_directions=_distinct_directions(order, drawing),
        vertical_ok=satisfies_vertical_constraint(order, drawing),
        coincident_nodes=_coincident_pairs(drawing),
        rtd=rtd(order) if lattice else None,
    )


def _require_2d(drawing: Drawing) -> None:
    if drawing.dim != 2:
        raise ValueError("metrics operate on 2-d drawings")
