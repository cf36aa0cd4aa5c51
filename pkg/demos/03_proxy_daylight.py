#!/usr/bin/env python3
"""The proxy daylight oracle, hour by hour and over the year.

Shows the seeded pseudo-climate, traces one sun ray through the glazing,
then compares annual metrics for contrasting rooms (orientation and shading).
"""

import numpy as np

import luxbox as lb
from luxbox.daylight import Schedule, metrics_from_series, point_series
from luxbox.scene import Orientation, ShadingState, WindowDivisions
from luxbox.solar import TEHRAN, sun_position


def room(**overrides):
    base = dict(
        width=6.0,
        depth=7.0,
        orientation=Orientation.S,
        reflectance=0.4,
        shading=ShadingState.NONE,
        sill_height=0.7,
        window_height=1.8,
        divisions=WindowDivisions.ONE_FULL_WIDTH,
    )
    base.update(overrides)
    return lb.RoomConfig(**base)


# Sun position for a few hours of a summer day.
print("summer day (day 172) at Tehran:")
for hour in (8.5, 10.5, 12.5, 14.5, 16.5):
    pos = sun_position(TEHRAN.latitude, TEHRAN.longitude, TEHRAN.tz_meridian, 172, hour)
    print(f"  {hour:4.1f}h  altitude {pos.altitude:5.1f} deg  azimuth {pos.azimuth:5.1f} deg")

# Does the midday sun reach a point 2 m behind the glazing?
south = room()
midday = sun_position(TEHRAN.latitude, TEHRAN.longitude, TEHRAN.tz_meridian, 172, 12.5)
hit = lb.direct_sun_hits((3.0, 2.0, 0.76), south, midday)
print(f"\nmidday beam reaches (3, 2, 0.76) in the south room: {hit}")

# One-off illuminance under a 12 klx diffuse sky:
e = lb.proxy_illuminance((3.0, 2.0, 0.76), south, midday, 12_000.0)
print(f"proxy illuminance there: {e:.0f} lux")

# Annual labels from the seeded pseudo-climate (same seed -> identical labels).
oracle = lb.ProxyOracle(seed=42)
variants = {
    "south, unshaded": room(),
    "south, louvred": room(shading=ShadingState.LOUVRE15),
    "north, unshaded": room(orientation=Orientation.N),
    "south, three windows": room(divisions=WindowDivisions.THREE_EQUAL),
}
print(f"\nannual metrics ({Schedule().hours_per_year} occupied hours):")
print(f"{'variant':22s} {'UDI':>6} {'mDA':>6} {'sDA':>6} {'ASE':>6} {'sVD':>6}")
for name, cfg in variants.items():
    m = oracle.metrics(cfg)
    print(f"{name:22s} {m.udi:6.3f} {m.m_da:6.3f} {m.s_da:6.3f} {m.ase:6.3f} {m.s_vd:6.3f}")

# The underlying per-point series is available for inspection.
grid = oracle.grid_for(south)
series = point_series(south, grid, oracle.climate.table(oracle.schedule))
da = np.mean(series.illuminance >= 300.0, axis=1).reshape(grid.ny, grid.nx)
print("\ndaylight autonomy by grid row (window wall first):")
for j in range(grid.ny):
    print(f"  row {j:2d} (y={grid.ys[j]:.2f} m): DA {da[j].mean():.2f}")
print(f"mean DA check: {metrics_from_series(series).m_da:.4f} == {da.mean():.4f}")
