"""Rank-based three-dimensional force layout, the classic comparison baseline.

Vertical coordinates are fixed by rank(a) = height(a) - depth(a), the two
horizontal coordinates are relaxed by a comparable-attraction /
incomparable-repulsion force pair, and the result is projected to 2-d by a
parallel projection that keeps the vertical axis.
"""

from dataclasses import dataclass

import numpy as np

from .drawing import Drawing
from .engine import _max_norm, _pair_jitter
from .geometry import DegenerateGeometry, horizontal
from .order import OrderedSet
from .pca import principal_axes

_JITTER = 1e-6


@dataclass(frozen=True)
class FreeseParams:
    c_attr: float = 1.0
    c_rep: float = 1.0
    max_iterations: int = 1000
    epsilon: float = 0.0025
    delta: float = 0.001

    def __post_init__(self):
        for name in ("c_attr", "c_rep", "epsilon", "delta"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


def f_attr(p_a: np.ndarray, p_b: np.ndarray, c_attr: float) -> np.ndarray:
    """Linear horizontal attraction between comparable elements."""
    return -c_attr * horizontal(np.asarray(p_a, float) - np.asarray(p_b, float))


def f_rep(p_a: np.ndarray, p_b: np.ndarray, c_rep: float) -> np.ndarray:
    """Horizontal repulsion between incomparable elements, decaying with the
    cubed coordinate differences."""
    p_a = np.asarray(p_a, float)
    p_b = np.asarray(p_b, float)
    den = float(np.sum(np.abs(p_a - p_b) ** 3))
    if den == 0.0:
        raise DegenerateGeometry("repulsion between coincident elements")
    return c_rep * horizontal(p_a - p_b) / den


def rank_assignment(order: OrderedSet) -> dict[str, int]:
    """rank(a) = height(a) - depth(a), where height is the longest chain up
    from a minimal element and depth the longest chain down from a maximal
    one.  Strictly monotone along the order."""
    n = order.n
    height = np.zeros(n, dtype=int)
    for i in _topological(order):
        below = order._lower_covers[i]
        if below.size:
            height[i] = height[below].max() + 1
    depth = np.zeros(n, dtype=int)
    for i in reversed(_topological(order)):
        above = order._upper_covers[i]
        if above.size:
            depth[i] = depth[above].max() + 1
    return {e: int(height[i] - depth[i]) for i, e in enumerate(order.elements)}


def _topological(order: OrderedSet) -> list[int]:
    # sorted by number of strict predecessors; ties broken by canonical index
    counts = order.strict.sum(axis=0)
    return sorted(range(order.n), key=lambda i: (counts[i], i))


def _freese_forces(order: OrderedSet, positions: np.ndarray, params: FreeseParams, salt: int):
    n = positions.shape[0]
    forces = np.zeros((n, 2))
    if n < 2:
        return forces
    h = positions[:, :2]
    diff0 = h[:, 0][:, None] - h[:, 0][None, :]
    diff1 = h[:, 1][:, None] - h[:, 1][None, :]
    diffy = positions[:, 2][:, None] - positions[:, 2][None, :]
    den = np.abs(diffy) ** 3 + np.abs(diff0) ** 3 + np.abs(diff1) ** 3

    weights = np.where(order.comparable, -params.c_attr, 0.0)
    repel = order.incomparable & (den > 0.0)
    weights = weights + np.where(repel, params.c_rep / np.where(den > 0, den, 1.0), 0.0)
    forces = h * weights.sum(axis=1)[:, None] - weights @ h

    coincident = order.incomparable & (den == 0.0)
    if coincident.any():
        for i, j in np.argwhere(coincident):
            if i < j:
                jit = _pair_jitter(salt, i, j, 2)
                kick = params.c_rep * jit / float(np.sum(np.abs(jit) ** 3))
                forces[i] += kick
                forces[j] -= kick
    return forces


def freese_layout(
    order: OrderedSet,
    params: FreeseParams | None = None,
    rng: np.random.Generator | None = None,
) -> Drawing:
    """Relax the horizontal coordinates at rank-fixed heights, then project
    the two horizontal dimensions to one by PCA.  Vertical coordinates equal
    the rank values exactly."""
    params = params if params is not None else FreeseParams()
    rng = rng if rng is not None else np.random.default_rng(0)
    salt = int(rng.integers(2**32))
    ranks = rank_assignment(order)
    n = order.n
    positions = np.zeros((n, 3))
    positions[:, :2] = rng.uniform(-1.0, 1.0, size=(n, 2))
    positions[:, 2] = [ranks[e] for e in order.elements]

    for _ in range(params.max_iterations):
        forces = _freese_forces(order, positions, params, salt)
        if _max_norm(forces) <= params.epsilon:
            break
        positions[:, :2] += params.delta * forces

    if n:
        centered = positions[:, :2] - positions[:, :2].mean(axis=0)
    else:
        centered = positions[:, :2]
    _, axes = principal_axes(centered)
    flat = centered @ axes[:, :1]
    return Drawing(order.elements, np.hstack([flat, positions[:, 2:3]]))
