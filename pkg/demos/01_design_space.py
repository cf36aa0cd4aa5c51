#!/usr/bin/env python3
"""Walk through the parametric shoebox design space.

Enumerates the built-in training and validation spaces, shows how one
alternative is encoded for the network, and builds its workplane sensor grid.
"""

import numpy as np

import luxbox as lb
from luxbox.scene import FEATURE_NAMES

# The training space: 7 variables, 2880 alternatives in a fixed row-major order.
configs = lb.enumerate_design_space(lb.TRAINING_SPACE)
print(f"training space: {len(configs)} alternatives")
for name, values in lb.TRAINING_SPACE.variable_lists().items():
    print(f"  {name}: {[getattr(v, 'value', v) for v in values]}")

validation = lb.enumerate_design_space(lb.VALIDATION_SPACE)
print(f"\nvalidation space: {len(validation)} alternatives (all values interior to training ranges)")

# Pick one alternative and look at it in detail.
room = configs[1234]
print("\nalternative #1234:")
for key, value in room.to_dict().items():
    print(f"  {key}: {value}")

# Feature encoding: orientation one-hot + six min-max-scaled numerics.
bounds = lb.NormalizationBounds.from_space(lb.TRAINING_SPACE)
x = lb.encode(room, bounds)
print("\nnetwork input vector:")
for name, value in zip(FEATURE_NAMES, x):
    print(f"  {name:16s} {value:.4f}")

# Window layout on the glazed wall.
print("\nglazing rectangles (left, sill, width, height):")
for rect in lb.window_rects(room):
    print(f"  ({rect.left:.2f}, {rect.sill:.2f}, {rect.width:.2f}, {rect.height:.2f})")
print(f"glazed area: {lb.glazed_area(room):.2f} m^2")

# Workplane analysis grid.
grid = lb.build_grid(room)
print(f"\nanalysis grid: {grid.nx} x {grid.ny} = {grid.n_points} points "
      f"at z={grid.z} m, spacing {grid.spacing} m, wall offset {grid.wall_offset} m")
pts = grid.points()
print(f"first three points: {np.round(pts[:3], 2).tolist()}")
