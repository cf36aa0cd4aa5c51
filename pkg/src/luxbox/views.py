"""Quality-view metrics computed by exact geometry over the analysis grid.

Three per-point criteria, each aggregated to a compliant-area fraction:

* view factor  - solid angle of visible glazing from a seated eye, binned to a
  1-5 rating; compliant at rating >= 3.
* view depth   - perpendicular distance to the glazing plane within three times
  the glazing head height.
* view range   - horizontal sight lines to glazing spanning at least 90 degrees.

The room passes the quality-views test when at least two of the three
fractions reach 0.75 of the floor area.  Reflectance, shading, and orientation
never enter these computations, so the fractions are identical across those
variables by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scene import AnalysisGrid, RoomConfig, WindowRect, build_grid, glazed_extent, window_rects

SEATED_EYE_HEIGHT = 1.2
COMPLIANT_AREA_THRESHOLD = 0.75
VIEW_DEPTH_HEAD_MULTIPLE = 3.0
VIEW_RANGE_MIN_SPREAD = np.pi / 2.0

# Solid-angle bin edges (steradians) mapping to ratings 1..5; compliant at
# rating >= 3, i.e. at least RATING_BINS[1] sr of visible glazing.  The bins
# are a calibration point: no published scale exists for the 1-5 rating.
RATING_BINS = (0.05, 0.2, 0.5, 1.0)


def rect_solid_angle(eye: np.ndarray, rect: WindowRect) -> float:
    """Exact solid angle of one glazing rectangle subtended at ``eye``.

    Decomposes the rectangle about the foot of the perpendicular from the eye
    onto the glazing plane and sums four corner terms
    atan(u*v / (d*sqrt(u^2+v^2+d^2))), the closed form for a rectangle with one
    corner on the perpendicular.  Signed u/v handle eyes off the rectangle's
    extent.
    """
    eye = np.asarray(eye, dtype=float)
    d = float(eye[1])
    if d == 0.0:
        raise ValueError("eye lies in the glazing plane; solid angle undefined")
    d = abs(d)
    u = np.array([rect.left, rect.right]) - eye[0]
    v = np.array([rect.sill, rect.top]) - eye[2]

    def corner(uu: float, vv: float) -> float:
        return np.arctan2(uu * vv, d * np.sqrt(uu * uu + vv * vv + d * d))

    return float(
        corner(u[1], v[1]) - corner(u[0], v[1]) - corner(u[1], v[0]) + corner(u[0], v[0])
    )


def glazing_solid_angle(eye: np.ndarray, rects: list[WindowRect]) -> float:
    """Total solid angle of disjoint glazing rectangles seen from ``eye`` (sr)."""
    return sum(rect_solid_angle(eye, r) for r in rects)


def _solid_angles_grid(grid: AnalysisGrid, rects: list[WindowRect], eye_z: float) -> np.ndarray:
    """Vectorized per-point solid angles at eye height, ordered like grid.points()."""
    px = np.tile(grid.xs, grid.ny)
    py = np.repeat(grid.ys, grid.nx)
    d = py  # grid points are strictly inside the room, so py > 0
    omega = np.zeros(grid.n_points)
    for rect in rects:
        u1 = rect.left - px
        u2 = rect.right - px
        v1 = rect.sill - eye_z
        v2 = rect.top - eye_z

        def corner(uu, vv):
            return np.arctan2(uu * vv, d * np.sqrt(uu * uu + vv * vv + d * d))

        omega += corner(u2, v2) - corner(u1, v2) - corner(u2, v1) + corner(u1, v1)
    return omega


def view_factor_rating(omega: np.ndarray) -> np.ndarray:
    """Map solid angles to the monotone 1-5 rating via RATING_BINS."""
    return 1 + np.searchsorted(RATING_BINS, omega, side="right")


@dataclass(frozen=True)
class ViewResult:
    """Per-point view records plus the three compliant-area fractions."""

    solid_angle: np.ndarray
    rating: np.ndarray
    factor_compliant: np.ndarray
    depth_compliant: np.ndarray
    range_compliant: np.ndarray
    view_factor_fraction: float
    view_depth_fraction: float
    view_range_fraction: float

    @property
    def quality_views_pass(self) -> bool:
        """LEED-style rule: at least 2 of the 3 fractions reach 0.75 of the area."""
        hits = sum(
            f >= COMPLIANT_AREA_THRESHOLD
            for f in (
                self.view_factor_fraction,
                self.view_depth_fraction,
                self.view_range_fraction,
            )
        )
        return hits >= 2


def _factor_compliance(config: RoomConfig, grid: AnalysisGrid) -> tuple[np.ndarray, np.ndarray]:
    rects = window_rects(config)
    omega = _solid_angles_grid(grid, rects, SEATED_EYE_HEIGHT)
    rating = view_factor_rating(omega)
    return omega, rating


def _depth_compliance(config: RoomConfig, grid: AnalysisGrid) -> np.ndarray:
    limit = VIEW_DEPTH_HEAD_MULTIPLE * config.head_height
    py = np.repeat(grid.ys, grid.nx)
    return py <= limit + 1e-12


def range_compliant_points(
    px: np.ndarray, py: np.ndarray, x_min: float, x_max: float
) -> np.ndarray:
    """Spread between the extreme horizontal sight-line bearings to any glazing.

    All glazing lies on the wall y = 0, so bearings to wall points are
    atan((x - px) / py), monotone in x: the extreme bearings are those of the
    leftmost and rightmost glazing edges.
    """
    if x_max <= x_min:  # zero-width glazing has no spread
        return np.zeros(np.shape(px), dtype=bool)
    spread = np.arctan2(x_max - px, py) - np.arctan2(x_min - px, py)
    return spread >= VIEW_RANGE_MIN_SPREAD - 1e-12


def _range_compliance(config: RoomConfig, grid: AnalysisGrid) -> np.ndarray:
    x_min, x_max = glazed_extent(config)
    px = np.tile(grid.xs, grid.ny)
    py = np.repeat(grid.ys, grid.nx)
    return range_compliant_points(px, py, x_min, x_max)


def evaluate_views(config: RoomConfig, grid: AnalysisGrid | None = None) -> ViewResult:
    """All three view metrics for one room over its analysis grid."""
    if grid is None:
        grid = build_grid(config)
    omega, rating = _factor_compliance(config, grid)
    factor_ok = rating >= 3
    depth_ok = _depth_compliance(config, grid)
    range_ok = _range_compliance(config, grid)
    n = grid.n_points
    return ViewResult(
        solid_angle=omega,
        rating=rating,
        factor_compliant=factor_ok,
        depth_compliant=depth_ok,
        range_compliant=range_ok,
        view_factor_fraction=float(np.count_nonzero(factor_ok)) / n,
        view_depth_fraction=float(np.count_nonzero(depth_ok)) / n,
        view_range_fraction=float(np.count_nonzero(range_ok)) / n,
    )


def view_factor_fraction(config: RoomConfig, grid: AnalysisGrid | None = None) -> float:
    return evaluate_views(config, grid).view_factor_fraction


def view_depth_fraction(config: RoomConfig, grid: AnalysisGrid | None = None) -> float:
    return evaluate_views(config, grid).view_depth_fraction


def view_range_fraction(config: RoomConfig, grid: AnalysisGrid | None = None) -> float:
    return evaluate_views(config, grid).view_range_fraction


def export_view_table(grid: AnalysisGrid, result: ViewResult, path) -> None:
    """Write per-point records (x, y, solid angle, rating, compliance flags) as CSV."""
    pts = grid.points()
    with open(path, "w") as fh:
        fh.write("x,y,solid_angle_sr,rating,factor_compliant,depth_compliant,range_compliant\n")
        for i in range(grid.n_points):
            fh.write(
                f"{pts[i, 0]:.3f},{pts[i, 1]:.3f},{result.solid_angle[i]:.6f},"
                f"{int(result.rating[i])},{int(result.factor_compliant[i])},"
                f"{int(result.depth_compliant[i])},{int(result.range_compliant[i])}\n"
            )
