"""Small vector helpers shared by the layout engines and the metrics.

Points are 1-d numpy arrays whose last coordinate is the vertical component.
``unit(p, q)`` is normalized ``p - q``, i.e. it points away from ``q`` when
applied at ``p``; all force formulas rely on that convention.
"""

import numpy as np


class DegenerateGeometry(ValueError):
    """A direction was requested for coincident points or a zero-length segment."""


def horizontal(v: np.ndarray) -> np.ndarray:
    """Copy of v with the vertical component zeroed."""
    out = np.array(v, dtype=float)
    out[-1] = 0.0
    return out


def distance(p: np.ndarray, q: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(p, float) - np.asarray(q, float)))


def distance_x(p: np.ndarray, q: np.ndarray) -> float:
    """Distance in the horizontal components only."""
    d = np.asarray(p, float) - np.asarray(q, float)
    return float(np.linalg.norm(d[:-1]))


def distance_y(p: np.ndarray, q: np.ndarray) -> float:
    return float(abs(float(p[-1]) - float(q[-1])))


def unit(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    d = distance(p, q)
    if d == 0.0:
        raise DegenerateGeometry("unit vector of coincident points")
    return (np.asarray(p, float) - np.asarray(q, float)) / d


def unit_x(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Horizontal unit vector (vertical component zero)."""
    d = distance_x(p, q)
    if d == 0.0:
        raise DegenerateGeometry("horizontal unit vector of horizontally coincident points")
    return horizontal(np.asarray(p, float) - np.asarray(q, float)) / d


def cosine_distance(
    segment_a: tuple[np.ndarray, np.ndarray], segment_b: tuple[np.ndarray, np.ndarray]
) -> float:
    """1 minus the normalized dot product of the two direction vectors.

    0 for parallel segments pointing the same way, 2 for opposite ones.
    """
    a, b = (np.asarray(v, float) for v in segment_a)
    c, d = (np.asarray(v, float) for v in segment_b)
    len_ab = np.linalg.norm(b - a)
    len_cd = np.linalg.norm(d - c)
    if len_ab == 0.0 or len_cd == 0.0:
        raise DegenerateGeometry("cosine distance of a zero-length segment")
    return float(1.0 - np.dot(b - a, d - c) / (len_ab * len_cd))


def point_segment_distance(p: np.ndarray, segment: tuple[np.ndarray, np.ndarray]) -> float:
    """Distance from p to the closed segment (projection parameter clamped to [0, 1])."""
    p = np.asarray(p, float)
    b, c = (np.asarray(v, float) for v in segment)
    d = c - b
    dd = float(np.dot(d, d))
    if dd == 0.0:
        return float(np.linalg.norm(p - b))
    t = float(np.dot(p - b, d) / dd)
    t = min(1.0, max(0.0, t))
    return float(np.linalg.norm(p - (b + t * d)))


def rejection(p: np.ndarray, segment: tuple[np.ndarray, np.ndarray]) -> np.ndarray:
    """Component of p - anchor perpendicular to the segment direction.

    Anchored at the segment's second endpoint; the result is independent of the
    anchor choice.
    """
    p = np.asarray(p, float)
    b, c = (np.asarray(v, float) for v in segment)
    d = b - c
    dd = float(np.dot(d, d))
    if dd == 0.0:
        raise DegenerateGeometry("rejection from a zero-length segment")
    w = p - c
    return w - (float(np.dot(w, d)) / dd) * d
