"""Analytic CDFs/PDFs of the three link distances D_ts, D_sr and D_tr.

Model summary.  n RIS per wall sit i.i.d. uniform along each wall.  For
wall i with perpendicular transmitter distance h_i, the along-wall distance
from the transmitter's projection to the nearest RIS on that wall is the
first-order statistic R_i of n i.i.d. |U(0,a) - t| variables, where t is
the projection coordinate.  The transmitter-to-selected-RIS distance is

    D_ts = min_i sqrt(R_i^2 + h_i^2),

whose CDF is closed-form.  D_tr is the distance from the fixed transmitter
to a receiver uniform in the room (a disc/room area ratio).  D_sr, the
selected-RIS-to-receiver distance, has no tractable exact law; it is
approximated by fixing the host wall to the one with minimal h_i and
integrating over the receiver and the nearest-RIS law of that wall.  When
several walls tie for the minimal h they are congruent frames, so the
nearest-RIS law given that selection is exactly the first-order statistic
of the pooled k*n uniforms; pooling removes what would otherwise be the
dominant selection error at symmetric transmitter placements.

The D_sr probability splits into two receiver-offset terms (the RIS can
sit on either side of the receiver's along-wall coordinate).  Both reduce
to differences of the running integral of the nearest-RIS CDF, which is
closed-form piecewise polynomial, leaving a single numerical quadrature
over the receiver's perpendicular coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EngineError, QuadratureError
from .geometry import RoomGeometry, check_wall_id, wall_projection
from .numerics import (
    DEFAULT_GRID_POINTS,
    CdfTable,
    PdfTable,
    integrate_1d,
    pdf_from_cdf,
    tabulate_cdf,
)


@dataclass(frozen=True)
class LinkDistanceModel:
    """Room plus per-wall RIS count; the inputs every distance law needs."""

    room: RoomGeometry
    n: int   # RIS count per wall

    def __post_init__(self):
        if int(self.n) < 1:
            raise DomainError("nearest-RIS laws need at least one RIS per wall")
        object.__setattr__(self, "n", int(self.n))


@dataclass(frozen=True)
class LinkDistanceTables:
    """Tabulated CDF/PDF pairs for the three link distances."""

    cdf_ts: CdfTable
    pdf_ts: PdfTable
    cdf_sr: CdfTable
    pdf_sr: PdfTable
    cdf_tr: CdfTable
    pdf_tr: PdfTable


# ---------------------------------------------------------------------------
# along-wall building blocks
# ---------------------------------------------------------------------------

def _along_wall_cdf(t: float, a: float, y) -> np.ndarray:
    """P(|U - t| <= y) for U ~ U(0, a): length of [t-y, t+y] clipped to [0, a],
    normalized by a.  Zero for y <= 0, one from y = max(t, a-t) on."""
    y = np.asarray(y, dtype=float)
    frac = (np.minimum(a, t + y) - np.maximum(0.0, t - y)) / a
    return np.where(y <= 0.0, 0.0, np.clip(frac, 0.0, 1.0))


def cdf_along_wall_distance(t: float, a: float, y: float) -> float:
    """CDF of the along-wall distance from projection coordinate t to one
    uniformly placed RIS."""
    if not (0.0 <= t <= a):
        raise DomainError(f"projection coordinate t={t!r} outside wall [0, {a}]")
    if y < 0:
        raise DomainError("distance must be non-negative")
    return float(_along_wall_cdf(t, a, y))


def _nearest_cdf(t: float, a: float, n: int, r) -> np.ndarray:
    """First-order statistic of n i.i.d. along-wall distances."""
    return 1.0 - (1.0 - _along_wall_cdf(t, a, r)) ** n


def cdf_nearest_on_wall(t: float, a: float, n: int, r: float) -> float:
    """CDF of the distance from the projection to the nearest of n RIS."""
    if n < 1:
        raise DomainError("order statistic needs n >= 1")
    if r < 0:
        raise DomainError("distance must be non-negative")
    if not (0.0 <= t <= a):
        raise DomainError(f"projection coordinate t={t!r} outside wall [0, {a}]")
    return float(_nearest_cdf(t, a, n, r))


def _wall_frame(room: RoomGeometry, w: int) -> tuple[float, float]:
    """(t, h): along-wall projection coordinate and perpendicular distance."""
    (px, py), h = wall_projection(room, w)
    t = py if w in (1, 3) else px
    return t, h


def cdf_wall_link_distance(room: RoomGeometry, w: int, n: int, d: float) -> float:
    """CDF of D_i = sqrt(R_i^2 + h_i^2): transmitter to nearest RIS on wall w."""
    check_wall_id(w)
    if d < 0:
        raise DomainError("distance must be non-negative")
    t, h = _wall_frame(room, w)
    if d < h:
        return 0.0
    r = np.sqrt(d * d - h * h)
    return float(_nearest_cdf(t, room.a, n, r))


def _cdf_dts_array(model: LinkDistanceModel, d) -> np.ndarray:
    d = np.asarray(d, dtype=float)
    a = model.room.a
    survival = np.ones_like(d)
    for w in (1, 2, 3, 4):
        t, h = _wall_frame(model.room, w)
        r2 = d * d - h * h
        r = np.sqrt(np.maximum(r2, 0.0))
        f_i = np.where(d >= h, _nearest_cdf(t, a, model.n, r), 0.0)
        survival = survival * (1.0 - f_i)
    return 1.0 - survival


def cdf_dts(model: LinkDistanceModel, d: float) -> float:
    """CDF of the transmitter-to-selected-RIS distance (min over the 4 walls)."""
    if d < 0:
        raise DomainError("distance must be non-negative")
    return float(_cdf_dts_array(model, d))


def select_wall_min_h(room: RoomGeometry) -> int:
    """Wall with the smallest perpendicular distance; ties pick the lowest index."""
    h = room.wall_distances
    return int(np.argmin(h)) + 1


# ---------------------------------------------------------------------------
# D_sr: selected-RIS to receiver
# ---------------------------------------------------------------------------

def _dsr_frame(model: LinkDistanceModel) -> tuple[float, float, int]:
    """Wall-local frame (t, h) of the min-h wall and the effective RIS count.

    Exact h-ties pool the tied walls: those frames are congruent (t maps to
    t or a - t, which leaves the along-wall law invariant), so the nearest
    RIS among them is the first-order statistic of k*n i.i.d. uniforms.
    """
    h_all = model.room.wall_distances
    w = select_wall_min_h(model.room)
    h_min = h_all[w - 1]
    k = sum(1 for v in h_all if v == h_min)
    t, h = _wall_frame(model.room, w)
    return t, h, k * model.n


def _nearest_cdf_running_integral(t: float, a: float, n: int, y) -> np.ndarray:
    """G(y) = integral_0^y F_R, extended with G = 0 left of the support and
    unit slope right of it.  F_R = 1 - (1 - F_Y)^n with F_Y piecewise linear
    (breakpoints at m = min(t, a-t) and y_max = max(t, a-t)), so the survival
    integral is closed-form."""
    y = np.asarray(y, dtype=float)
    m = min(t, a - t)
    y_max = max(t, a - t)
    yy = np.clip(y, 0.0, y_max)
    # integral of (1 - 2u/a)^n on [0, min(yy, m)]
    part1 = a / (2.0 * (n + 1)) * (1.0 - (1.0 - 2.0 * np.minimum(yy, m) / a) ** (n + 1))
    # integral of ((a - m - u)/a)^n on [m, yy] when yy > m
    upper = np.maximum(yy, m)
    part2 = a / (n + 1) * (((a - 2.0 * m) / a) ** (n + 1)
                           - ((a - m - upper) / a) ** (n + 1))
    survival_int = part1 + np.where(yy > m, part2, 0.0)
    return np.where(y <= 0.0, 0.0, y - survival_int)


def _dsr_perp_integrand(t: float, a: float, n: int, d: float, v) -> np.ndarray:
    """Along-wall receiver integral at perpendicular receiver coordinate v.

    For the receiver at along-wall offset u_r, the RIS at t - R covers the
    event |R - (t - u_r)| <= s with s = sqrt(d^2 - v^2); integrating the
    offset over [0, a] against the nearest-RIS CDF gives differences of its
    running integral G.
    """
    v = np.asarray(v, dtype=float)
    s = np.sqrt(np.maximum(0.0, d * d - v * v))
    g = lambda y: _nearest_cdf_running_integral(t, a, n, y)
    return g(t + s) - g(t - a + s) - g(t - s) + g(t - a - s)


def cdf_dsr(model: LinkDistanceModel, d: float,
            rel_tol: float = 1e-6) -> float:
    """Approximate CDF of the selected-RIS-to-receiver distance.

    Splits the event over the sign of the along-wall offset (the two-sided
    probability around the nearest-RIS position), integrates the receiver
    uniformly over the room, and uses the min-h wall's nearest-RIS law with
    exact-tie pooling.  Result clamped to [0, 1].
    """
    if d < 0:
        raise DomainError("distance must be non-negative")
    if d == 0.0:
        return 0.0
    t, h, n_eff = _dsr_frame(model)
    a = model.room.a
    try:
        val = integrate_1d(
            lambda v: _dsr_perp_integrand(t, a, n_eff, d, v), 0.0, a, rel_tol
        )
    except EngineError as e:
        w = select_wall_min_h(model.room)
        raise QuadratureError(
            f"D_sr quadrature failed on wall {w} (frame t={t:.6g}, h={h:.6g}, "
            f"pooled n={n_eff}): {e}"
        ) from e
    return float(np.clip(val / (a * a), 0.0, 1.0))


# ---------------------------------------------------------------------------
# D_tr: transmitter to receiver
# ---------------------------------------------------------------------------

def _dtr_chord(room: RoomGeometry, d: float, y_r) -> np.ndarray:
    """Length of {x in [0, a] : (x - x_t)^2 + (y_r - y_t)^2 <= d^2}.

    Two one-sided terms around x_t, each clamped inside the room; their sum
    is the chord of the distance disc at receiver ordinate y_r.
    """
    x_t, y_t = room.tx
    a = room.a
    y_r = np.asarray(y_r, dtype=float)
    s = np.sqrt(np.maximum(0.0, d * d - (y_r - y_t) ** 2))
    right = np.minimum(a, x_t + s) - x_t
    left = x_t - np.maximum(0.0, x_t - s)
    return right + left


def cdf_dtr(room: RoomGeometry, d: float, rel_tol: float = 1e-6) -> float:
    """CDF of the transmitter-to-uniform-receiver distance: the area of the
    distance disc intersected with the room, normalized by the room area."""
    if d < 0:
        raise DomainError("distance must be non-negative")
    if d == 0.0:
        return 0.0
    a = room.a
    try:
        val = integrate_1d(lambda y: _dtr_chord(room, d, y), 0.0, a, rel_tol)
    except EngineError as e:
        raise QuadratureError(f"D_tr quadrature failed (d={d:.6g}): {e}") from e
    return float(np.clip(val / (a * a), 0.0, 1.0))


# ---------------------------------------------------------------------------
# tabulation
# ---------------------------------------------------------------------------

# Fixed composite-Simpson rule for whole-grid tabulation.  The integrands are
# piecewise smooth with a few square-root kinks, so 2048 panels keep the rule
# within ~1e-7 of the adaptive scalar operations (asserted in tests) at a
# fraction of their cost.
_SIMPSON_PANELS = 2048
_BATCH = 64


def _simpson_nodes(hi: float) -> tuple[np.ndarray, np.ndarray]:
    nodes = np.linspace(0.0, hi, 2 * _SIMPSON_PANELS + 1)
    weights = np.ones(nodes.size)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    weights *= (hi / _SIMPSON_PANELS) / 6.0
    return nodes, weights


def _dsr_cdf_grid(model: LinkDistanceModel, d_grid: np.ndarray) -> np.ndarray:
    t, _, n_eff = _dsr_frame(model)
    a = model.room.a
    v, w = _simpson_nodes(a)
    g = lambda y: _nearest_cdf_running_integral(t, a, n_eff, y)
    out = np.empty(d_grid.size)
    for lo in range(0, d_grid.size, _BATCH):
        d = d_grid[lo:lo + _BATCH, None]
        s = np.sqrt(np.maximum(0.0, d * d - v * v))
        vals = g(t + s) - g(t - a + s) - g(t - s) + g(t - a - s)
        out[lo:lo + _BATCH] = vals @ w
    return np.clip(out / (a * a), 0.0, 1.0)


def _dtr_cdf_grid(room: RoomGeometry, d_grid: np.ndarray) -> np.ndarray:
    x_t, y_t = room.tx
    a = room.a
    y, w = _simpson_nodes(a)
    out = np.empty(d_grid.size)
    for lo in range(0, d_grid.size, _BATCH):
        d = d_grid[lo:lo + _BATCH, None]
        s = np.sqrt(np.maximum(0.0, d * d - (y - y_t) ** 2))
        chord = (np.minimum(a, x_t + s) - np.maximum(0.0, x_t - s))
        out[lo:lo + _BATCH] = chord @ w
    return np.clip(out / (a * a), 0.0, 1.0)


def tabulate_link_distributions(model: LinkDistanceModel,
                                points: int = DEFAULT_GRID_POINTS) -> LinkDistanceTables:
    """Tabulate all three link-distance laws and derive their densities.

    D_ts and D_tr live on [0, sqrt(2) a] (bounded by the room diagonal);
    the D_sr integrand references along-wall offsets up to twice the room
    scale before clamping, so its table spans [0, 2 sqrt(2) a].
    """
    room = model.room
    hi = room.diagonal
    cdf_ts = tabulate_cdf(lambda d: _cdf_dts_array(model, d), 0.0, hi, points)
    cdf_tr = tabulate_cdf(lambda d: _dtr_cdf_grid(room, np.atleast_1d(d)), 0.0, hi, points)
    cdf_sr = tabulate_cdf(lambda d: _dsr_cdf_grid(model, np.atleast_1d(d)), 0.0, 2.0 * hi, points)
    return LinkDistanceTables(
        cdf_ts=cdf_ts, pdf_ts=pdf_from_cdf(cdf_ts),
        cdf_sr=cdf_sr, pdf_sr=pdf_from_cdf(cdf_sr),
        cdf_tr=cdf_tr, pdf_tr=pdf_from_cdf(cdf_tr),
    )
