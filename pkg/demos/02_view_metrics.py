#!/usr/bin/env python3
"""Exact quality-view geometry for a single room.

Computes the three view metrics (factor, depth, range) over the workplane
grid, prints the compliant-area fractions and the 2-of-3 badge, exports the
per-point table, and (when matplotlib is installed) renders a compliance map.
"""

import numpy as np

import luxbox as lb
from luxbox.scene import Orientation, ShadingState, WindowDivisions

room = lb.RoomConfig(
    width=8.0,
    depth=10.0,
    orientation=Orientation.S,
    reflectance=0.4,
    shading=ShadingState.NONE,
    sill_height=0.9,
    window_height=1.8,
    divisions=WindowDivisions.ONE_FULL_WIDTH,
)
grid = lb.build_grid(room)
result = lb.evaluate_views(room, grid)

print(f"room {room.width} x {room.depth} m, window sill {room.sill_height} m, "
      f"height {room.window_height} m ({room.divisions.value})")
print(f"view factor fraction: {result.view_factor_fraction:.3f}  (solid angle >= 0.2 sr)")
print(f"view depth fraction:  {result.view_depth_fraction:.3f}  (within 3 x {room.head_height:.1f} m of glazing)")
print(f"view range fraction:  {result.view_range_fraction:.3f}  (>= 90 deg bearing spread)")
print(f"quality views badge:  {'PASS' if result.quality_views_pass else 'FAIL'} (2 of 3 >= 0.75)")

# A seated eye one meter behind the window center sees this much glazing:
eye = np.array([room.width / 2.0, 1.0, 1.2])
omega = lb.glazing_solid_angle(eye, lb.window_rects(room))
print(f"\nsolid angle from ({eye[0]}, {eye[1]}, {eye[2]}): {omega:.3f} sr")

lb.export_view_table(grid, result, "view_points.csv")
print("per-point table -> view_points.csv")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    flags = (
        result.factor_compliant.astype(int)
        + result.depth_compliant.astype(int)
        + result.range_compliant.astype(int)
    ).reshape(grid.ny, grid.nx)
    fig, ax = plt.subplots(figsize=(5, 6))
    im = ax.imshow(
        flags,
        origin="lower",
        extent=[grid.xs[0], grid.xs[-1], grid.ys[0], grid.ys[-1]],
        cmap="YlGn",
        vmin=0,
        vmax=3,
    )
    ax.set_xlabel("x along window wall (m)")
    ax.set_ylabel("depth from glazing (m)")
    ax.set_title("criteria satisfied per point (window wall at bottom)")
    fig.colorbar(im, label="criteria met (0-3)")
    fig.tight_layout()
    fig.savefig("view_compliance.png", dpi=120)
    print("compliance map -> view_compliance.png")
except ImportError:
    print("matplotlib not installed; skipping the compliance map")
