"""The drawing type shared by the layout engines, metrics and writers."""

from dataclasses import dataclass, field

import numpy as np

from .order import OrderedSet


@dataclass(frozen=True, eq=False)
class Drawing:
    """Positions in R^d for a fixed element tuple; the last coordinate is vertical."""

    elements: tuple[str, ...]
    positions: np.ndarray

    _index: dict = field(init=False, repr=False)

    def __post_init__(self):
        elements = tuple(self.elements)
        positions = np.array(self.positions, dtype=float)
        if positions.ndim != 2 or positions.shape[0] != len(elements):
            raise ValueError("positions must be an (n, dim) array matching the elements")
        if positions.shape[1] < 2:
            raise ValueError("drawings need at least 2 dimensions")
        if positions.size and not np.isfinite(positions).all():
            raise ValueError("drawing contains non-finite coordinates")
        positions.setflags(write=False)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(elements)})

    @property
    def dim(self) -> int:
        return self.positions.shape[1]

    @property
    def n(self) -> int:
        return len(self.elements)

    def point(self, element: str) -> np.ndarray:
        return self.positions[self._index[element]]

    def points(self) -> dict[str, np.ndarray]:
        return {e: self.positions[i] for i, e in enumerate(self.elements)}

    def with_positions(self, positions: np.ndarray) -> "Drawing":
        return Drawing(self.elements, positions)


def satisfies_vertical_constraint(order: OrderedSet, drawing: Drawing) -> bool:
    """True iff y_a < y_b for every strict pair a < b (exact comparison)."""
    if drawing.elements != order.elements:
        raise ValueError("drawing elements do not match the order")
    y = drawing.positions[:, -1]
    return not bool((order.strict & (y[:, None] >= y[None, :])).any())
