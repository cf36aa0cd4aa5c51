import math

import numpy as np
import pytest

import luxbox as lb
from luxbox.scene import Orientation, ShadingState, WindowDivisions, WindowRect
from luxbox.views import (
    COMPLIANT_AREA_THRESHOLD,
    SEATED_EYE_HEIGHT,
    ViewResult,
    range_compliant_points,
    rect_solid_angle,
)
from tests.test_scene import make_config


# --- independent oracles -----------------------------------------------------


def mc_solid_angle(eye, rect: WindowRect, n: int, seed: int) -> float:
    """Monte-Carlo oracle: uniform hemisphere directions, ray-rectangle hits."""
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    v[:, 1] = -np.abs(v[:, 1])  # hemisphere facing the glazing plane y = 0
    t = eye[1] / -v[:, 1]
    x = eye[0] + t * v[:, 0]
    z = eye[2] + t * v[:, 2]
    hits = (x >= rect.left) & (x <= rect.right) & (z >= rect.sill) & (z <= rect.top)
    return 2.0 * math.pi * hits.mean()


def bearing_spread_oracle(px, py, rects, n_bearings=3600):
    """Brute-force spread: sample bearings, keep those whose ray hits glazing."""
    a = np.linspace(0.0, 2.0 * math.pi, n_bearings, endpoint=False)
    dx, dy = np.sin(a), np.cos(a)
    toward = dy < 0
    t = np.where(toward, py / np.where(toward, -dy, 1.0), np.nan)
    x = px + t * dx
    hit = toward & np.any(
        [(x >= r.left) & (x <= r.right) for r in rects], axis=0
    )
    if not hit.any():
        return 0.0
    theta = np.arctan2(dx[hit], -dy[hit])  # signed angle about the inward normal
    return float(theta.max() - theta.min())


def depth_rows_oracle(depth, spacing, offset, limit):
    """Count grid rows with y <= limit by index arithmetic."""
    ny = int(math.floor((depth - 2 * offset) / spacing + 1e-9)) + 1
    ok = int(math.floor((limit - offset) / spacing + 1e-9)) + 1 if limit >= offset else 0
    return min(max(ok, 0), ny), ny


def range_count_oracle(width, depth, spacing, offset):
    """Points inside the semicircle of diameter = glazing extent (Thales)."""
    nx = int(math.floor((width - 2 * offset) / spacing + 1e-9)) + 1
    ny = int(math.floor((depth - 2 * offset) / spacing + 1e-9)) + 1
    r = width / 2.0
    count = 0
    for j in range(ny):
        y = offset + j * spacing
        if y > r:
            continue
        half = math.sqrt(r * r - y * y)
        lo, hi = r - half, r + half
        i_lo = math.ceil((lo - offset) / spacing - 1e-9)
        i_hi = math.floor((hi - offset) / spacing + 1e-9)
        count += max(0, min(i_hi, nx - 1) - max(i_lo, 0) + 1)
    return count, nx * ny


# --- solid angle -------------------------------------------------------------


class TestSolidAngle:
    def test_zero_area_window(self):
        assert lb.glazing_solid_angle(np.array([1.0, 2.0, 1.2]), [WindowRect(0, 0.5, 0, 0)]) == 0.0

    def test_hemisphere_limit(self):
        rect = WindowRect(-0.5, -0.5, 1.0, 1.0)
        eye = np.array([0.0, 1e-7, 0.0])  # on the perpendicular through the center
        assert lb.glazing_solid_angle(eye, [rect]) == pytest.approx(2.0 * math.pi, rel=1e-5)

    def test_eye_in_plane_rejected(self):
        with pytest.raises(ValueError):
            rect_solid_angle(np.array([0.5, 0.0, 0.5]), WindowRect(0, 0, 1, 1))

    def test_on_axis_square_against_closed_form(self):
        # centered unit square at distance 1: 4 * atan(ab / (2d sqrt(a^2+b^2+4d^2)))
        rect = WindowRect(-0.5, -0.5, 1.0, 1.0)
        eye = np.array([0.0, 1.0, 0.0])
        expected = 4.0 * math.atan(1.0 / (2.0 * math.sqrt(1.0 + 1.0 + 4.0)))
        assert lb.glazing_solid_angle(eye, [rect]) == pytest.approx(expected, rel=1e-12)

    def test_matches_monte_carlo_oracle(self):
        rng = np.random.default_rng(7)
        for k in range(6):
            rect = WindowRect(
                left=rng.uniform(-1, 2),
                sill=rng.uniform(0.3, 1.2),
                width=rng.uniform(1.0, 4.0),
                height=rng.uniform(1.0, 2.2),
            )
            eye = np.array([rng.uniform(0, 3), rng.uniform(0.5, 2.5), rng.uniform(0.6, 1.8)])
            exact = lb.glazing_solid_angle(eye, [rect])
            estimate = mc_solid_angle(eye, rect, n=400_000, seed=100 + k)
            assert estimate == pytest.approx(exact, rel=0.02)

    def test_additive_over_disjoint_rects(self):
        c = make_config(divisions=WindowDivisions.THREE_EQUAL)
        eye = np.array([2.0, 1.5, SEATED_EYE_HEIGHT])
        rects = lb.window_rects(c)
        total = lb.glazing_solid_angle(eye, rects)
        assert total == pytest.approx(sum(rect_solid_angle(eye, r) for r in rects), rel=1e-12)


# --- view fractions ----------------------------------------------------------


class TestViewFactor:
    def test_zero_glazing_fraction_zero(self):
        c = make_config(window_height=0.0)
        assert lb.view_factor_fraction(c) == 0.0

    def test_monotone_in_window_height(self):
        fractions = [
            lb.view_factor_fraction(make_config(width=8.0, depth=10.0, window_height=h))
            for h in (1.2, 1.5, 1.8, 2.1, 2.4)
        ]
        assert all(a <= b for a, b in zip(fractions, fractions[1:]))

    def test_deeper_room_never_increases_fraction(self):
        for w, d in ((3.0, 4.0), (6.0, 7.0)):
            shallow = lb.view_factor_fraction(make_config(width=w, depth=d))
            deep = lb.view_factor_fraction(make_config(width=w, depth=2 * d))
            assert deep <= shallow


class TestViewDepth:
    def test_limit_exceeds_depth(self):
        # head 2.9 m -> 8.7 m limit covers a 7 m deep room entirely
        c = make_config(width=6.0, depth=7.0, sill_height=0.5, window_height=2.4)
        assert lb.view_depth_fraction(c) == 1.0

    def test_partial_band_matches_row_count(self):
        c = make_config(width=8.0, depth=10.0, sill_height=0.5, window_height=2.4)
        ok, ny = depth_rows_oracle(10.0, 0.5, 0.25, 3.0 * 2.9)
        assert (ok, ny) == (17, 20)
        assert lb.view_depth_fraction(c) == pytest.approx(ok / ny)

    def test_zero_head_height(self):
        c = make_config(sill_height=0.0, window_height=0.0)
        assert lb.view_depth_fraction(c) == 0.0


class TestViewRange:
    def test_semicircle_rule_full_width(self):
        # spread >= 90 degrees iff the point lies inside the semicircle of
        # diameter equal to the glazing extent; centered point compliant iff
        # its distance is at most half the window width
        c = make_config(width=6.0, depth=7.0)
        grid = lb.build_grid(c)
        res = lb.evaluate_views(c, grid)
        pts = grid.points()
        inside = (pts[:, 0] - 3.0) ** 2 + pts[:, 1] ** 2 <= 3.0**2 + 1e-9
        assert np.array_equal(res.range_compliant, inside)

    def test_zero_width_glazing(self):
        px = np.array([1.0, 2.0])
        py = np.array([0.5, 1.0])
        assert not range_compliant_points(px, py, 2.0, 2.0).any()

    def test_matches_bearing_sampling_oracle(self, table1_configs):
        rng = np.random.default_rng(3)
        sample = [table1_configs[i] for i in rng.choice(len(table1_configs), 10, replace=False)]
        step = 2.0 * math.pi / 3600
        for c in sample:
            grid = lb.build_grid(c)
            res = lb.evaluate_views(c, grid)
            rects = lb.window_rects(c)
            pts = grid.points()
            for k in range(0, grid.n_points, 7):
                spread = bearing_spread_oracle(pts[k, 0], pts[k, 1], rects)
                oracle_flag = spread >= math.pi / 2.0
                if abs(spread - math.pi / 2.0) > 2 * step:
                    assert oracle_flag == bool(res.range_compliant[k]), (c.to_dict(), k)

    def test_matches_grid_count_oracle(self, table1_configs):
        for c in table1_configs[:400:13]:
            count, total = range_count_oracle(c.width, c.depth, 0.5, 0.25)
            assert lb.view_range_fraction(c) == pytest.approx(count / total, abs=1.0 / total)


class TestInvariance:
    def test_orientation_reflectance_shading_do_not_move_views(self):
        base = make_config()
        variants = [
            make_config(orientation=Orientation.N),
            make_config(reflectance=0.7),
            make_config(shading=ShadingState.LOUVRE15),
        ]
        ref = lb.evaluate_views(base)
        for v in variants:
            res = lb.evaluate_views(v)
            assert res.view_factor_fraction == ref.view_factor_fraction
            assert res.view_depth_fraction == ref.view_depth_fraction
            assert res.view_range_fraction == ref.view_range_fraction

    def test_fractions_in_unit_interval(self, table1_configs):
        for c in table1_configs[:300:11]:
            res = lb.evaluate_views(c)
            for f in (res.view_factor_fraction, res.view_depth_fraction, res.view_range_fraction):
                assert 0.0 <= f <= 1.0


class TestQualityViewsRule:
    @pytest.mark.parametrize(
        "fractions,expected",
        [
            ((0.8, 0.8, 0.8), True),
            ((0.8, 0.8, 0.1), True),
            ((0.8, 0.1, 0.8), True),
            ((0.1, 0.8, 0.8), True),
            ((0.8, 0.1, 0.1), False),
            ((0.1, 0.8, 0.1), False),
            ((0.1, 0.1, 0.8), False),
            ((0.1, 0.1, 0.1), False),
        ],
    )
    def test_two_of_three_rule(self, fractions, expected):
        res = ViewResult(
            solid_angle=np.zeros(1),
            rating=np.ones(1, dtype=int),
            factor_compliant=np.zeros(1, dtype=bool),
            depth_compliant=np.zeros(1, dtype=bool),
            range_compliant=np.zeros(1, dtype=bool),
            view_factor_fraction=fractions[0],
            view_depth_fraction=fractions[1],
            view_range_fraction=fractions[2],
        )
        assert res.quality_views_pass is expected

    def test_flips_exactly_at_threshold(self):
        def result(f1, f2):
            return ViewResult(
                solid_angle=np.zeros(1),
                rating=np.ones(1, dtype=int),
                factor_compliant=np.zeros(1, dtype=bool),
                depth_compliant=np.zeros(1, dtype=bool),
                range_compliant=np.zeros(1, dtype=bool),
                view_factor_fraction=f1,
                view_depth_fraction=f2,
                view_range_fraction=0.0,
            ).quality_views_pass

        eps = 1e-9
        assert result(COMPLIANT_AREA_THRESHOLD, COMPLIANT_AREA_THRESHOLD)
        assert not result(COMPLIANT_AREA_THRESHOLD, COMPLIANT_AREA_THRESHOLD - eps)


class TestExport:
    def test_per_point_table(self, tmp_path):
        c = make_config(width=3.0, depth=4.0)
        grid = lb.build_grid(c)
        res = lb.evaluate_views(c, grid)
        out = tmp_path / "points.csv"
        lb.export_view_table(grid, res, out)
        lines = out.read_text().strip().splitlines()
        assert lines[0].startswith("x,y,solid_angle_sr,rating")
        assert len(lines) == 1 + grid.n_points
