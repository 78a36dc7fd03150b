"""Force-directed layout of order diagrams with dimension reduction.

The pipeline embeds an order in ``initial_dim`` dimensions, then runs cycles
of a node step (vertical spacing plus comparable attraction / incomparable
repulsion) and a line step (slope coupling between near-parallel lines and
between lines sharing an endpoint, plus node-from-line repulsion), reducing
the dimension by one after each cycle until a 2-d drawing remains.  Every
intermediate drawing keeps the vertical invariant: a < b implies y_a < y_b.

A run mutates only its own position array and returns fresh immutable
drawings, so distinct runs may execute concurrently; forces within one
iteration read a frozen snapshot, positions update in a fixed element order.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .drawing import Drawing, satisfies_vertical_constraint
from .geometry import (
    DegenerateGeometry,
    cosine_distance,
    distance_x,
    distance_y,
    horizontal,
    point_segment_distance,
    rejection,
    unit_x,
)
from .order import OrderedSet, random_linear_extension
from .pca import principal_axes


class InfeasibleClamp(RuntimeError):
    """The overshoot clamp interval for an element is empty (corrupted state)."""


@dataclass(frozen=True)
class LayoutParams:
    """Tunable constants of the layout pipeline.

    The defaults are the recommended ones: up to 1000 iterations per step,
    stopping when the maximum force drops to 0.0025, damping 0.001, vertical
    constant 1, horizontal constant 5, line-step thresholds 0.005 / 0.05 / 1,
    five initial dimensions and a final horizontal scale of 0.5.
    """

    max_iterations: int = 1000
    epsilon: float = 0.0025
    delta: float = 0.001
    c_vert: float = 1.0
    c_hor: float = 5.0
    c_par: float = 0.005
    c_ang: float = 0.05
    c_dist: float = 1.0
    initial_dim: int = 5
    horizontal_scale: float = 0.5
    seed: int = 0
    cache_interval: int = 1

    def __post_init__(self):
        positive = {
            "epsilon": self.epsilon,
            "delta": self.delta,
            "c_vert": self.c_vert,
            "c_hor": self.c_hor,
            "c_par": self.c_par,
            "c_ang": self.c_ang,
            "c_dist": self.c_dist,
            "horizontal_scale": self.horizontal_scale,
        }
        for name, value in positive.items():
            if not value > 0:
                raise ValueError(f"{name} must be strictly positive, got {value}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.initial_dim < 2:
            raise ValueError("initial_dim must be at least 2")
        if self.cache_interval < 1:
            raise ValueError("cache_interval must be at least 1")


@dataclass(frozen=True)
class ProgressEvent:
    """Per-iteration report passed to the optional progress hook."""

    cycle: int
    dim: int
    step: str  # "node" | "line" | "reduce"
    iteration: int
    max_force: float
    positions: np.ndarray


ProgressHook = Callable[[ProgressEvent], None]

_JITTER = 1e-6


# ---------------------------------------------------------------------------
# Scalar force formulas.  These are the reference definitions; the step
# implementations below vectorize exactly these expressions.
# ---------------------------------------------------------------------------


def f_vert(p_a: np.ndarray, p_b: np.ndarray, c_vert: float) -> np.ndarray:
    """Vertical spacing force on the lower element of a cover pair a < b; the
    upper element receives the negation.  Zero at d_y = 1 + d_x."""
    dy = distance_y(p_a, p_b)
    if dy == 0.0:
        raise DegenerateGeometry("vertical force between elements at equal height")
    out = np.zeros(len(p_a))
    out[-1] = -c_vert * ((1.0 + distance_x(p_a, p_b)) / dy - 1.0)
    return out


def f_attr_node(p_a: np.ndarray, p_b: np.ndarray, c_hor: float) -> np.ndarray:
    """Horizontal attraction between comparable elements, clamped at c_hor.
    Zero vector when the pair is horizontally coincident."""
    dx = distance_x(p_a, p_b)
    if dx == 0.0:
        return np.zeros(len(p_a))
    return -min(dx**3, c_hor) * unit_x(p_a, p_b)


def f_rep_node(p_a: np.ndarray, p_b: np.ndarray, c_hor: float) -> np.ndarray:
    """Horizontal repulsion between incomparable elements; singular at
    horizontal coincidence (callers jitter)."""
    dx = distance_x(p_a, p_b)
    if dx == 0.0:
        raise DegenerateGeometry("repulsion between horizontally coincident elements")
    return (c_hor / dx) * unit_x(p_a, p_b)


def f_par(
    edge_a: tuple[np.ndarray, np.ndarray],
    edge_b: tuple[np.ndarray, np.ndarray],
    c_par: float,
) -> np.ndarray:
    """Slope-coupling force on the lower end of edge_a for a near-parallel
    edge pair; the upper end receives the negation.  The weight grows as the
    pair approaches exact parallelism and vanishes at the c_par threshold."""
    (pa, pb), (pc, pd) = edge_a, edge_b
    weight = 1.0 - cosine_distance(edge_a, edge_b) / c_par
    slope_ab = horizontal(np.asarray(pb, float) - np.asarray(pa, float)) / (pb[-1] - pa[-1])
    slope_cd = horizontal(np.asarray(pd, float) - np.asarray(pc, float)) / (pd[-1] - pc[-1])
    return -weight * (slope_ab - slope_cd)


def f_ang(
    edge_a: tuple[np.ndarray, np.ndarray],
    edge_b: tuple[np.ndarray, np.ndarray],
    c_ang: float,
) -> np.ndarray:
    """Slope-coupling force, opposite in sign to f_par, on the far end of
    edge_a for two edges meeting at a shared endpoint at a small angle; both
    edges are passed as (far point, shared point)."""
    (pa, ps), (pb, ps2) = edge_a, edge_b
    weight = 1.0 - cosine_distance(edge_a, edge_b) / c_ang
    term_a = horizontal(np.asarray(ps, float) - np.asarray(pa, float)) / (ps[-1] - pa[-1])
    term_b = horizontal(np.asarray(ps2, float) - np.asarray(pb, float)) / (ps2[-1] - pb[-1])
    return weight * (term_a - term_b)


def f_dist(p_a: np.ndarray, segment: tuple[np.ndarray, np.ndarray]) -> np.ndarray:
    """Repulsion of a dot from a nearby line, perpendicular to the line; the
    segment endpoints each receive minus half of it."""
    dist = point_segment_distance(p_a, segment)
    rej = rejection(p_a, segment)
    norm = float(np.linalg.norm(rej))
    if dist == 0.0 or norm == 0.0:
        raise DegenerateGeometry("dot exactly on the line")
    return rej / dist


# ---------------------------------------------------------------------------
# Initialization and the overshoot clamp.
# ---------------------------------------------------------------------------


def initial_drawing(order: OrderedSet, dim: int, rng: np.random.Generator) -> Drawing:
    """Random start: y from a random linear extension (0-based positions),
    horizontal coordinates uniform in [-1, 1]."""
    if dim < 2:
        raise ValueError("dim must be at least 2")
    extension = random_linear_extension(order, rng)
    position = {e: k for k, e in enumerate(extension.sequence)}
    y = np.array([position[e] for e in order.elements], dtype=float)
    x = rng.uniform(-1.0, 1.0, size=(order.n, dim - 1))
    return Drawing(order.elements, np.hstack([x, y[:, None]]))


def overshooting_protection(
    order: OrderedSet,
    element: str,
    drawing: Drawing,
    proposed: np.ndarray,
    c_vert: float = 1.0,
) -> np.ndarray:
    """Clamp the proposed vertical coordinate at least c_vert/10 away from the
    element's cover neighbours; horizontal coordinates pass through."""
    return _clamp_row(
        order, order.index(element), drawing.positions, np.asarray(proposed, float), c_vert
    )


def _clamp_row(
    order: OrderedSet, i: int, positions: np.ndarray, proposed: np.ndarray, c_vert: float
) -> np.ndarray:
    gap = c_vert / 10.0
    lower = order._lower_covers[i]
    upper = order._upper_covers[i]
    low = positions[lower, -1].max() + gap if lower.size else -np.inf
    high = positions[upper, -1].min() - gap if upper.size else np.inf
    if low > high:
        raise InfeasibleClamp(
            f"empty clamp interval [{low}, {high}] for element {order.elements[i]!r}"
        )
    out = np.array(proposed, dtype=float)
    out[-1] = min(max(out[-1], low), high)
    return out


def _pair_jitter(salt: int, i: int, j: int, dims: int) -> np.ndarray:
    """Deterministic jitter of magnitude 1e-6, keyed by seed and pair."""
    rng = np.random.default_rng((int(salt) & 0xFFFFFFFF, int(i), int(j)))
    v = rng.standard_normal(dims)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        v = np.zeros(dims)
        v[0] = 1.0
        norm = 1.0
    return v * (_JITTER / norm)


def _max_norm(forces: np.ndarray) -> float:
    if forces.shape[0] == 0:
        return 0.0
    return float(np.sqrt((forces * forces).sum(axis=1)).max())


def _apply_moves(order: OrderedSet, positions: np.ndarray, forces: np.ndarray, params) -> None:
    """Move every element by delta * force, clamping vertical coordinates
    against the live positions of its covers.  Sequential clamping keeps the
    vertical invariant exact: the later-updated element of every cover pair
    re-establishes the c_vert/10 gap against the other's final position."""
    targets = positions + params.delta * forces
    for i in range(positions.shape[0]):
        positions[i] = _clamp_row(order, i, positions, targets[i], params.c_vert)


# ---------------------------------------------------------------------------
# Node step.
# ---------------------------------------------------------------------------


def _node_forces(order: OrderedSet, positions: np.ndarray, params: LayoutParams) -> np.ndarray:
    n, d = positions.shape
    forces = np.zeros((n, d))
    if n > 1:
        h = positions[:, :-1]
        gram = h @ h.T
        sq = np.einsum("ij,ij->i", h, h)
        dx2 = sq[:, None] + sq[None, :] - 2.0 * gram
        np.maximum(dx2, 0.0, out=dx2)
        dx = np.sqrt(dx2)

        weights = np.zeros((n, n))
        attract = order.comparable & (dx > 0.0)
        weights[attract] = -np.minimum(dx[attract] ** 3, params.c_hor) / dx[attract]
        repel = order.incomparable & (dx > 0.0)
        weights[repel] += params.c_hor / dx2[repel]
        forces[:, :-1] = h * weights.sum(axis=1)[:, None] - weights @ h

        coincident = order.incomparable & (dx2 == 0.0)
        if coincident.any():
            for i, j in np.argwhere(coincident):
                if i < j:
                    jit = _pair_jitter(params.seed, i, j, d - 1)
                    kick = params.c_hor * jit / (_JITTER * _JITTER)
                    forces[i, :-1] += kick
                    forces[j, :-1] -= kick

    edges = order.cover_index_pairs
    if len(edges):
        lo, up = edges[:, 0], edges[:, 1]
        dxe = np.linalg.norm(positions[lo, :-1] - positions[up, :-1], axis=1)
        dye = positions[up, -1] - positions[lo, -1]
        if not (dye > 0.0).all():
            raise DegenerateGeometry("cover pair without positive vertical distance")
        pull = -params.c_vert * ((1.0 + dxe) / dye - 1.0)
        np.add.at(forces[:, -1], lo, pull)
        np.add.at(forces[:, -1], up, -pull)
    return forces


def node_step(
    order: OrderedSet,
    drawing: Drawing,
    params: LayoutParams,
    hook: ProgressHook | None = None,
    cycle: int = 1,
) -> Drawing:
    """Iterate the node forces until the maximum force drops to epsilon or
    max_iterations is reached (non-convergence is normal termination)."""
    _require_vertical(order, drawing)
    positions = drawing.positions.copy()
    for t in range(1, params.max_iterations + 1):
        forces = _node_forces(order, positions, params)
        max_force = _max_norm(forces)
        if max_force <= params.epsilon:
            break
        _apply_moves(order, positions, forces, params)
        if hook is not None:
            hook(ProgressEvent(cycle, positions.shape[1], "node", t, max_force, positions.copy()))
    return drawing.with_positions(positions)


# ---------------------------------------------------------------------------
# Line step.
# ---------------------------------------------------------------------------


@dataclass
class _LineSets:
    par_pairs: np.ndarray  # (k, 2) indices into the cover edge list, i < j
    ang_pairs: np.ndarray  # (k, 2) same-role shared-endpoint edge pairs, i < j
    ang_shared_upper: np.ndarray  # (k,) True when the shared endpoint is the upper one
    dist_members: np.ndarray  # (k, 2) node index, edge index


def _edge_frames(order: OrderedSet, positions: np.ndarray):
    edges = order.cover_index_pairs
    lo, up = edges[:, 0], edges[:, 1]
    direction = positions[up] - positions[lo]
    dy = direction[:, -1]
    if len(edges) and not (dy > 0.0).all():
        raise DegenerateGeometry("cover pair without positive vertical distance")
    length = np.linalg.norm(direction, axis=1)
    return lo, up, direction, length, dy


def _cos_matrix(direction: np.ndarray, length: np.ndarray) -> np.ndarray:
    return 1.0 - (direction @ direction.T) / np.outer(length, length)


def _line_sets(order: OrderedSet, positions: np.ndarray, params: LayoutParams) -> _LineSets:
    lo, up, direction, length, _ = _edge_frames(order, positions)
    m = len(lo)
    n = positions.shape[0]
    empty = np.empty((0, 2), dtype=int)
    if m == 0:
        return _LineSets(empty, empty, np.empty(0, dtype=bool), empty)

    cos = _cos_matrix(direction, length)
    upper_tri = np.triu(np.ones((m, m), dtype=bool), 1)
    shared_lower = lo[:, None] == lo[None, :]
    shared_upper = up[:, None] == up[None, :]
    crossed = (lo[:, None] == up[None, :]) | (up[:, None] == lo[None, :])
    any_shared = shared_lower | shared_upper | crossed

    par_pairs = np.argwhere(upper_tri & ~any_shared & (cos < params.c_par))
    ang_mask = upper_tri & (shared_lower | shared_upper) & (cos < params.c_ang)
    ang_pairs = np.argwhere(ang_mask)
    ang_shared_upper = shared_upper[ang_pairs[:, 0], ang_pairs[:, 1]] if len(ang_pairs) else np.empty(0, dtype=bool)

    # point-to-segment distances for all (node, edge) pairs
    offset = positions[:, None, :] - positions[lo][None, :, :]  # (n, m, d)
    t = np.einsum("nmd,md->nm", offset, direction) / (length * length)[None, :]
    np.clip(t, 0.0, 1.0, out=t)
    nearest = offset - t[:, :, None] * direction[None, :, :]
    dists = np.linalg.norm(nearest, axis=2)
    incident = (np.arange(n)[:, None] == lo[None, :]) | (np.arange(n)[:, None] == up[None, :])
    dist_members = np.argwhere(~incident & (dists < params.c_dist))

    return _LineSets(par_pairs, ang_pairs, ang_shared_upper, dist_members)


def candidate_sets(order: OrderedSet, drawing: Drawing, params: LayoutParams):
    """The three line-step candidate sets, at the element-id level.

    Returns (A, B, C): A and B are sets of frozensets of two cover edges
    (edges as (lower, upper) id pairs); C is a set of (element, edge) pairs.
    """
    _require_vertical(order, drawing)
    sets = _line_sets(order, drawing.positions, params)
    edges = [
        (order.elements[i], order.elements[j]) for i, j in order.cover_index_pairs
    ]
    a = {frozenset((edges[i], edges[j])) for i, j in sets.par_pairs}
    b = {frozenset((edges[i], edges[j])) for i, j in sets.ang_pairs}
    c = {(order.elements[i], edges[e]) for i, e in sets.dist_members}
    return a, b, c


def _line_forces(
    order: OrderedSet, positions: np.ndarray, params: LayoutParams, sets: _LineSets
) -> np.ndarray:
    n, d = positions.shape
    forces = np.zeros((n, d))
    lo, up, direction, length, dy = _edge_frames(order, positions)
    if len(lo) == 0:
        return forces
    slope = direction.copy()
    slope[:, -1] = 0.0
    slope /= dy[:, None]

    if len(sets.par_pairs):
        i, j = sets.par_pairs[:, 0], sets.par_pairs[:, 1]
        cos = 1.0 - np.einsum("kd,kd->k", direction[i], direction[j]) / (length[i] * length[j])
        weight = 1.0 - cos / params.c_par
        force = -weight[:, None] * (slope[i] - slope[j])
        np.add.at(forces, lo[i], force)
        np.add.at(forces, up[i], -force)
        np.add.at(forces, lo[j], -force)
        np.add.at(forces, up[j], force)

    if len(sets.ang_pairs):
        i, j = sets.ang_pairs[:, 0], sets.ang_pairs[:, 1]
        cos = 1.0 - np.einsum("kd,kd->k", direction[i], direction[j]) / (length[i] * length[j])
        weight = 1.0 - cos / params.c_ang
        force = weight[:, None] * (slope[i] - slope[j])
        far_i = np.where(sets.ang_shared_upper, lo[i], up[i])
        far_j = np.where(sets.ang_shared_upper, lo[j], up[j])
        np.add.at(forces, far_i, force)
        np.add.at(forces, far_j, -force)

    if len(sets.dist_members):
        nodes, eidx = sets.dist_members[:, 0], sets.dist_members[:, 1]
        anchor = positions[up[eidx]]
        axis = positions[lo[eidx]] - anchor
        w = positions[nodes] - anchor
        coeff = np.einsum("kd,kd->k", w, axis) / np.einsum("kd,kd->k", axis, axis)
        rej = w - coeff[:, None] * axis
        rej_norm = np.linalg.norm(rej, axis=1)

        offset = positions[nodes] - positions[lo[eidx]]
        t = np.einsum("kd,kd->k", offset, direction[eidx]) / (length[eidx] ** 2)
        np.clip(t, 0.0, 1.0, out=t)
        seg_dist = np.linalg.norm(offset - t[:, None] * direction[eidx], axis=1)

        good = (rej_norm > 0.0) & (seg_dist > 0.0)
        if good.any():
            force = rej[good] / seg_dist[good][:, None]
            np.add.at(forces, nodes[good], force)
            np.add.at(forces, lo[eidx[good]], -force / 2.0)
            np.add.at(forces, up[eidx[good]], -force / 2.0)
        for k in np.flatnonzero(~good):
            # dot exactly on the line: jitter the dot to recover a direction
            node, e = int(nodes[k]), int(eidx[k])
            jit = _pair_jitter(params.seed, node, n + e, d)
            p = positions[node] + jit
            seg = (positions[lo[e]], positions[up[e]])
            dist = point_segment_distance(p, seg)
            rej_k = rejection(p, seg)
            if dist == 0.0 or not np.linalg.norm(rej_k) > 0.0:
                continue
            force = rej_k / dist
            forces[node] += force
            forces[lo[e]] -= force / 2.0
            forces[up[e]] -= force / 2.0
    return forces


def line_step(
    order: OrderedSet,
    drawing: Drawing,
    params: LayoutParams,
    hook: ProgressHook | None = None,
    cycle: int = 1,
) -> Drawing:
    """Iterate the line forces; candidate sets are recomputed every
    cache_interval-th iteration and reused (stale) in between."""
    _require_vertical(order, drawing)
    positions = drawing.positions.copy()
    sets = None
    for t in range(1, params.max_iterations + 1):
        if sets is None or (t - 1) % params.cache_interval == 0:
            sets = _line_sets(order, positions, params)
        forces = _line_forces(order, positions, params, sets)
        max_force = _max_norm(forces)
        if max_force <= params.epsilon:
            break
        _apply_moves(order, positions, forces, params)
        if hook is not None:
            hook(ProgressEvent(cycle, positions.shape[1], "line", t, max_force, positions.copy()))
    return drawing.with_positions(positions)


# ---------------------------------------------------------------------------
# Dimension reduction and the full pipeline.
# ---------------------------------------------------------------------------


def dimension_reduction(drawing: Drawing) -> Drawing:
    """Center the drawing, project the horizontal coordinates onto their top
    d-2 principal axes and keep the vertical coordinate."""
    if drawing.dim < 3:
        raise ValueError("dimension reduction needs at least 3 dimensions")
    positions = drawing.positions
    if positions.shape[0] == 0:
        return Drawing(drawing.elements, np.zeros((0, drawing.dim - 1)))
    centered = positions - positions.mean(axis=0)
    h = centered[:, :-1]
    _, axes = principal_axes(h)
    projected = h @ axes[:, : drawing.dim - 2]
    return Drawing(drawing.elements, np.hstack([projected, centered[:, -1:]]))


def redraw(
    order: OrderedSet,
    params: LayoutParams | None = None,
    hook: ProgressHook | None = None,
) -> Drawing:
    """Run the full pipeline and return a 2-d drawing satisfying the vertical
    constraint, horizontally scaled by horizontal_scale."""
    params = params if params is not None else LayoutParams()
    rng = np.random.default_rng(params.seed)
    drawing = initial_drawing(order, params.initial_dim, rng)
    dim = params.initial_dim
    cycle = 1
    while True:
        drawing = node_step(order, drawing, params, hook, cycle)
        drawing = line_step(order, drawing, params, hook, cycle)
        if dim > 2:
            drawing = dimension_reduction(drawing)
            if hook is not None:
                hook(
                    ProgressEvent(
                        cycle, drawing.dim, "reduce", 0, 0.0, drawing.positions.copy()
                    )
                )
            dim -= 1
            cycle += 1
        else:
            break
    positions = drawing.positions.copy()
    positions[:, :-1] *= params.horizontal_scale
    return drawing.with_positions(positions)


def _require_vertical(order: OrderedSet, drawing: Drawing) -> None:
    if not satisfies_vertical_constraint(order, drawing):
        raise ValueError("input drawing violates the vertical constraint")
