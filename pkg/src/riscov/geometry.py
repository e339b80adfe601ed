"""Room and wall conventions, point sampling, and exact segment-disc blockage.

The room is the square [0, a] x [0, a].  Walls are indexed

    wall 1: x = 0      wall 2: y = 0      wall 3: x = a      wall 4: y = a

so the perpendicular transmitter-to-wall distances are
h = (x_t, y_t, a - x_t, a - y_t).  RIS units live on walls with an
along-wall coordinate in (0, a); obstacles are discs of fixed diameter d_b
whose centers fall in the room (discs may protrude past walls; only the
center matters for the blockage test).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

WALL_IDS = (1, 2, 3, 4)


@dataclass(frozen=True)
class RoomGeometry:
    """Square room of side ``a`` with a fixed transmitter strictly inside."""

    a: float        # side length [m]
    tx: tuple[float, float]   # transmitter coordinate (x_t, y_t) [m]

    def __post_init__(self):
        a = float(self.a)
        x_t, y_t = (float(v) for v in self.tx)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "tx", (x_t, y_t))
        if not (a > 0 and np.isfinite(a)):
            raise DomainError("room side must be positive and finite")
        if not (0 < x_t < a and 0 < y_t < a):
            raise DomainError("transmitter must lie strictly inside the room")

    @property
    def wall_distances(self) -> tuple[float, float, float, float]:
        """Perpendicular distances (h_1, h_2, h_3, h_4) from tx to each wall."""
        x_t, y_t = self.tx
        return (x_t, y_t, self.a - x_t, self.a - y_t)

    @property
    def diagonal(self) -> float:
        return float(np.sqrt(2.0) * self.a)


@dataclass(frozen=True)
class ObstacleField:
    """Disc obstacles: centers inside the room, common diameter d_b."""

    centers: np.ndarray   # shape (N, 2), [m]
    d_b: float            # disc diameter [m]

    def __post_init__(self):
        centers = np.asarray(self.centers, dtype=float).reshape(-1, 2)
        object.__setattr__(self, "centers", centers)
        if not float(self.d_b) > 0:
            raise DomainError("obstacle diameter must be positive")
        object.__setattr__(self, "d_b", float(self.d_b))


def check_wall_id(w: int) -> int:
    if w not in WALL_IDS:
        raise DomainError(f"wall index must be one of {WALL_IDS}, got {w!r}")
    return int(w)


def wall_projection(room: RoomGeometry, w: int) -> tuple[tuple[float, float], float]:
    """Foot of the perpendicular from the transmitter to wall ``w`` and its length."""
    w = check_wall_id(w)
    x_t, y_t = room.tx
    a = room.a
    if w == 1:
        return (0.0, y_t), x_t
    if w == 2:
        return (x_t, 0.0), y_t
    if w == 3:
        return (a, y_t), a - x_t
    return (x_t, a), a - y_t


def wall_point(a: float, w: int, along: np.ndarray) -> np.ndarray:
    """Map along-wall coordinates to room coordinates on wall ``w``; shape (..., 2)."""
    along = np.asarray(along, dtype=float)
    pts = np.empty(along.shape + (2,))
    if w == 1:
        pts[..., 0], pts[..., 1] = 0.0, along
    elif w == 2:
        pts[..., 0], pts[..., 1] = along, 0.0
    elif w == 3:
        pts[..., 0], pts[..., 1] = a, along
    elif w == 4:
        pts[..., 0], pts[..., 1] = along, a
    else:
        check_wall_id(w)
    return pts


def point_segment_distance(points: np.ndarray, p, q) -> np.ndarray:
    """Euclidean distance from each point to the closed segment [p, q].

    Degenerate segments (p == q) reduce to point-to-point distance.
    """
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    seg = q - p
    seg_len2 = float(seg @ seg)
    rel = points - p
    if seg_len2 == 0.0:
        return np.sqrt(np.sum(rel * rel, axis=1))
    t = np.clip((rel @ seg) / seg_len2, 0.0, 1.0)
    foot = p + t[:, None] * seg
    diff = points - foot
    return np.sqrt(np.sum(diff * diff, axis=1))


def segment_blocked(p, q, field: ObstacleField) -> bool:
    """True iff some obstacle center lies strictly within d_b/2 of segment [p, q]."""
    if field.centers.size == 0:
        return False
    d = point_segment_distance(field.centers, p, q)
    return bool(np.any(d < 0.5 * field.d_b))


def sample_hppp(a: float, density: float, rng: np.random.Generator) -> np.ndarray:
    """Homogeneous Poisson point process on [0, a]^2; returns (N, 2) centers.

    The count is Poisson(density * a^2) and positions are i.i.d. uniform;
    draws consume the stream in a fixed (count, then positions) order.
    """
    if density < 0:
        raise DomainError("point process density must be non-negative")
    count = int(rng.poisson(density * a * a))
    return rng.uniform(0.0, a, size=(count, 2))


def sample_ris_along(a: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Along-wall coordinates for n RIS on each of the 4 walls; shape (4, n).

    Row i holds wall i+1.  One vectorized draw keeps the stream order fixed.
    """
    if n < 0:
        raise DomainError("RIS count per wall must be non-negative")
    return rng.uniform(0.0, a, size=(4, n))


def sample_ris_layout(a: float, n: int, rng: np.random.Generator) -> list[tuple[int, tuple[float, float]]]:
    """RIS placement as (wall id, point) pairs, n per wall, uniform along walls."""
    along = sample_ris_along(a, n, rng)
    layout = []
    for i, w in enumerate(WALL_IDS):
        pts = wall_point(a, w, along[i])
        layout.extend((w, (float(x), float(y))) for x, y in pts)
    return layout
