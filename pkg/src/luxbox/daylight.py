"""Deterministic proxy oracle for annual daylight and glare labels.

This module stands in for a full radiative simulation: illuminance at each
workplane sensor is the sum of a direct beam term (exact sun-ray geometry
against the glazing, with louvre blocking), a sky-diffuse term proportional to
the glazing solid angle seen from the sensor, and a single-bounce
interreflected term spread uniformly over the room surfaces.  The sky itself
is a seeded pseudo-climate (clear-sky curves modulated by per-hour cloudiness),
so identical seeds reproduce bit-identical labels.  Outputs are documented
proxies, not photometric ground truth; externally simulated labels can be
ingested instead (see :mod:`luxbox.datasets`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scene import (
    AnalysisGrid,
    DEFAULT_GRID_SPACING,
    DEFAULT_WALL_OFFSET,
    DEFAULT_WORKPLANE,
    Orientation,
    RoomConfig,
    ShadingState,
    build_grid,
    glazed_area,
    window_rects,
)
from .solar import Location, SunPosition, TEHRAN, sun_position
from .views import _solid_angles_grid, glazing_solid_angle

# Metric thresholds
DA_THRESHOLD_LUX = 300.0
UDI_LOW_LUX = 100.0
UDI_HIGH_LUX = 3000.0
SDA_DA_FRACTION = 0.5
ASE_HOURS = 250
SVD_HOURS = 250
SVD_LUX = 3000.0

# Louvre model: horizontal slats, zero thickness, fully absorbing for the
# beam; the diffuse terms are scaled by a fixed transmission factor instead.
# Slat depth is the quoted 15 cm louvre dimension; pitch = 2x depth gives a
# 50%-open assembly with a 63.4-degree profile-angle cutoff.
LOUVRE_DEPTH = 0.15
LOUVRE_PITCH = 0.30
LOUVRE_DIFFUSE_FACTOR = 0.8

# Clear-sky magnitudes for the pseudo-climate
EXTRATERRESTRIAL_LUX = 128_000.0
ATMOSPHERIC_OPTICAL_DEPTH = 0.21
CLEAR_SKY_SCALE_LUX = 13_000.0
OVERCAST_SKY_SCALE_LUX = 6_000.0
OVERCAST_CLOUDINESS = 0.7
# Diffuse illuminance on the facade as a fraction of sky horizontal (sky half
# plus ground-reflected light)
FACADE_DIFFUSE_RATIO = 0.75

METRIC_NAMES = ("udi", "m_da", "s_da", "ase", "s_vd", "view_range", "view_depth", "view_factor")
N_METRICS = len(METRIC_NAMES)

# Room-local frame per orientation: (xhat, yhat) expressed in world
# (east, north) components.  The glazed wall's outward normal points toward
# the orientation; yhat points into the room, zhat is up.
_LOCAL_FRAME = {
    Orientation.N: ((-1.0, 0.0), (0.0, -1.0)),
    Orientation.E: ((0.0, 1.0), (-1.0, 0.0)),
    Orientation.S: ((1.0, 0.0), (0.0, 1.0)),
    Orientation.W: ((0.0, -1.0), (1.0, 0.0)),
}


@dataclass(frozen=True)
class MetricVector:
    """The eight targets, each a fraction in [0, 1]."""

    udi: float
    m_da: float
    s_da: float
    ase: float
    s_vd: float
    view_range: float
    view_depth: float
    view_factor: float

    def __post_init__(self) -> None:
        for name in METRIC_NAMES:
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"metric {name}={v} outside [0, 1]")

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in METRIC_NAMES])

    @classmethod
    def from_array(cls, values) -> "MetricVector":
        values = np.asarray(values, dtype=float)
        if values.shape != (N_METRICS,):
            raise ValueError(f"expected {N_METRICS} metric values, got shape {values.shape}")
        return cls(**{n: float(v) for n, v in zip(METRIC_NAMES, values)})


@dataclass(frozen=True)
class DaylightMetrics:
    """The five daylight/glare components produced by the oracle."""

    udi: float
    m_da: float
    s_da: float
    ase: float
    s_vd: float


@dataclass(frozen=True)
class Schedule:
    """Occupied hours: hour-centered samples between start and end, every day."""

    start_hour: float = 8.0
    end_hour: float = 18.0

    def hours(self) -> np.ndarray:
        return np.arange(self.start_hour + 0.5, self.end_hour, 1.0)

    @property
    def hours_per_day(self) -> int:
        return len(self.hours())

    @property
    def hours_per_year(self) -> int:
        return 365 * self.hours_per_day


@dataclass(frozen=True)
class ClimateTable:
    """Per occupied hour: sun position and sky/beam illuminance magnitudes."""

    days: np.ndarray
    clock_hours: np.ndarray
    altitude: np.ndarray
    azimuth: np.ndarray
    e_direct_normal: np.ndarray
    e_sky_horizontal: np.ndarray
    beam_present: np.ndarray
    seed: int

    @property
    def n_hours(self) -> int:
        return len(self.days)


def direct_normal_illuminance(altitude_deg: float) -> float:
    """Clear-sky beam normal illuminance (lux) from a simple air-mass extinction."""
    if altitude_deg <= 0.0:
        return 0.0
    return EXTRATERRESTRIAL_LUX * math.exp(-ATMOSPHERIC_OPTICAL_DEPTH / math.sin(math.radians(altitude_deg)))


def sky_horizontal_illuminance(altitude_deg: float, overcast: bool = False) -> float:
    """Sky diffuse horizontal illuminance (lux) for the pseudo-climate."""
    if altitude_deg <= 0.0:
        return 0.0
    scale = OVERCAST_SKY_SCALE_LUX if overcast else CLEAR_SKY_SCALE_LUX
    return scale * math.sin(math.radians(altitude_deg)) ** 0.6


class PseudoClimate:
    """Seeded deterministic clear/overcast year at a fixed location.

    Cloudiness is one uniform draw per occupied hour (day-major order); hours
    with cloudiness above OVERCAST_CLOUDINESS are overcast (no beam, dimmer
    sky), the rest are clear with the beam attenuated by thin-cloud haze.
    """

    def __init__(self, seed: int = 0, location: Location = TEHRAN):
        self.seed = int(seed)
        self.location = location
        self._tables: dict = {}

    def table(self, schedule: Schedule) -> ClimateTable:
        key = (schedule.start_hour, schedule.end_hour)
        if key not in self._tables:
            self._tables[key] = self._build(schedule)
        return self._tables[key]

    def _build(self, schedule: Schedule) -> ClimateTable:
        hours = schedule.hours()
        days = np.repeat(np.arange(1, 366), len(hours))
        clock = np.tile(hours, 365)
        t = len(days)

        alt = np.empty(t)
        az = np.empty(t)
        loc = self.location
        for i in range(t):
            pos = sun_position(loc.latitude, loc.longitude, loc.tz_meridian, int(days[i]), float(clock[i]))
            alt[i] = pos.altitude
            az[i] = pos.azimuth

        rng = np.random.default_rng(self.seed)
        cloud = rng.random(t)
        overcast = cloud > OVERCAST_CLOUDINESS
        sun_up = alt > 0.0

        sin_alt = np.sin(np.radians(np.clip(alt, 0.0, 90.0)))
        e_dn = np.where(
            sun_up & ~overcast,
            EXTRATERRESTRIAL_LUX * np.exp(-ATMOSPHERIC_OPTICAL_DEPTH / np.maximum(sin_alt, 1e-9)) * (1.0 - 0.5 * cloud),
            0.0,
        )
        e_sky = np.where(
            sun_up,
            np.where(overcast, OVERCAST_SKY_SCALE_LUX, CLEAR_SKY_SCALE_LUX) * sin_alt**0.6,
            0.0,
        )
        return ClimateTable(
            days=days,
            clock_hours=clock,
            altitude=alt,
            azimuth=az,
            e_direct_normal=e_dn,
            e_sky_horizontal=e_sky,
            beam_present=(sun_up & ~overcast & (e_dn > 0.0)),
            seed=self.seed,
        )


def _sun_local_components(config: RoomConfig, altitude_deg, azimuth_deg):
    """Sun direction components in the room-local frame (arrays or scalars)."""
    alt = np.radians(np.asarray(altitude_deg, dtype=float))
    az = np.radians(np.asarray(azimuth_deg, dtype=float))
    s_e = np.cos(alt) * np.sin(az)
    s_n = np.cos(alt) * np.cos(az)
    s_z = np.sin(alt)
    (xe, xn), (ye, yn) = _LOCAL_FRAME[config.orientation]
    return s_e * xe + s_n * xn, s_e * ye + s_n * yn, s_z


def _louvre_blocked(z_hit, rise_per_meter, sill: float, window_height: float):
    """True where the outward ray crosses a slat within the louvre depth.

    Slats sit at sill + k*pitch for k = 0..floor(h/pitch) plus one closing
    member at the window head; a ray entering the glazing at z_hit climbs
    rise_per_meter * LOUVRE_DEPTH while traversing the assembly and is blocked
    iff that interval contains a slat level.  The head slat makes the blocking
    cutoff exactly atan(pitch / depth) in profile angle for every window
    height, not just pitch multiples.
    """
    a = (np.asarray(z_hit) - sill) / LOUVRE_PITCH
    b = a + np.asarray(rise_per_meter) * LOUVRE_DEPTH / LOUVRE_PITCH
    k_max = math.floor(window_height / LOUVRE_PITCH + 1e-9)
    lowest = np.ceil(a - 1e-9)
    highest = np.minimum(np.floor(b + 1e-9), k_max)
    return (lowest <= highest) | (b >= window_height / LOUVRE_PITCH - 1e-9)


def direct_sun_hits(point, config: RoomConfig, sun: SunPosition) -> bool:
    """Exact single-ray test: does the sun reach ``point`` through the glazing?

    The ray from the point toward the sun must cross the glazed wall inside a
    window rectangle and, when a louvre is present, pass between its slats.
    """
    if sun.altitude <= 0.0:
        return False
    sx, sy, sz = _sun_local_components(config, sun.altitude, sun.azimuth)
    sx, sy, sz = float(sx), float(sy), float(sz)
    if sy >= 0.0:
        return False  # sun behind or parallel to the facade
    px, py, pz = float(point[0]), float(point[1]), float(point[2])
    t = py / -sy
    x_hit = px + t * sx
    z_hit = pz + t * sz
    in_window = any(
        r.left <= x_hit <= r.right and r.sill <= z_hit <= r.top for r in window_rects(config)
    )
    if not in_window:
        return False
    if config.shading is ShadingState.LOUVRE15:
        rise = sz / -sy
        if bool(
            _louvre_blocked(z_hit, rise, config.sill_height, config.window_height)
        ):
            return False
    return True


def proxy_illuminance(
    point,
    config: RoomConfig,
    sun: SunPosition,
    sky_horizontal_lux: float,
    direct_normal_lux: float | None = None,
) -> float:
    """Workplane illuminance (lux) at one point for one sky condition.

    direct term:        E_dn * transmittance * sin(altitude), when the sun ray
                        reaches the point through the glazing;
    sky-diffuse term:   sky horizontal illuminance scaled by transmittance and
                        the fraction of the hemisphere the glazing occupies;
    interreflected:     diffuse flux admitted by the glazing, bounced once and
                        spread over the total interior surface area with the
                        standard rho / (A * (1 - rho)) average.

    Linear in both illuminance inputs and monotone in glazing solid angle and
    reflectance.  ``direct_normal_lux`` defaults to the clear-sky formula.
    """
    louvre = LOUVRE_DIFFUSE_FACTOR if config.shading is ShadingState.LOUVRE15 else 1.0
    tau = config.glazing_transmittance
    rects = window_rects(config)

    omega = glazing_solid_angle(np.asarray(point, dtype=float), rects)
    diffuse = sky_horizontal_lux * tau * louvre * omega / (2.0 * math.pi)

    a_glass = glazed_area(config)
    a_total = 2.0 * (
        config.width * config.depth + config.height * (config.width + config.depth)
    )
    admitted = FACADE_DIFFUSE_RATIO * sky_horizontal_lux * a_glass * tau * louvre
    interreflected = admitted * config.reflectance / (a_total * (1.0 - config.reflectance))

    direct = 0.0
    if sun.altitude > 0.0 and direct_sun_hits(point, config, sun):
        e_dn = direct_normal_illuminance(sun.altitude) if direct_normal_lux is None else direct_normal_lux
        direct = e_dn * tau * math.sin(math.radians(sun.altitude))
    return direct + diffuse + interreflected


@dataclass(frozen=True)
class AnnualPointSeries:
    """Hourly illuminance and direct-hit flags for every grid point.

    Arrays are (n_points, n_hours) with points ordered like grid.points().
    """

    illuminance: np.ndarray
    direct_hit: np.ndarray
    grid: AnalysisGrid
    table: ClimateTable


def _geometric_hits(config: RoomConfig, grid: AnalysisGrid, table: ClimateTable) -> np.ndarray:
    """(n_points, n_hours) boolean beam-hit array, clouds included."""
    sx, sy, sz = _sun_local_components(config, table.altitude, table.azimuth)
    valid = table.beam_present & (sy < 0.0)
    # safe divisor where invalid; results are masked out
    inv = np.where(valid, -sy, 1.0)
    u = np.where(valid, sx / inv, 0.0)
    v = np.where(valid, sz / inv, 0.0)

    # broadcast shapes: rows (ny, 1, 1), cols (1, nx, 1), hours (1, 1, T)
    rows = grid.ys[:, None, None]
    cols = grid.xs[None, :, None]
    x_hit = cols + rows * u[None, None, :]  # (ny, nx, T)
    z_hit = grid.z + grid.ys[:, None] * v[None, :]  # (ny, T)

    z_ok = (z_hit >= config.sill_height) & (z_hit <= config.head_height)
    if config.shading is ShadingState.LOUVRE15:
        blocked = _louvre_blocked(z_hit, v[None, :], config.sill_height, config.window_height)
        z_ok &= ~blocked

    x_ok = np.zeros(x_hit.shape, dtype=bool)
    for r in window_rects(config):
        x_ok |= (x_hit >= r.left) & (x_hit <= r.right)

    hits = x_ok & z_ok[:, None, :] & valid[None, None, :]
    return hits.reshape(grid.n_points, table.n_hours)


def point_series(config: RoomConfig, grid: AnalysisGrid, table: ClimateTable) -> AnnualPointSeries:
    """Assemble the annual illuminance/hit series for one room."""
    hits = _geometric_hits(config, grid, table)

    louvre = LOUVRE_DIFFUSE_FACTOR if config.shading is ShadingState.LOUVRE15 else 1.0
    tau = config.glazing_transmittance
    omega = _solid_angles_grid(grid, window_rects(config), grid.z)

    sin_alt = np.sin(np.radians(np.clip(table.altitude, 0.0, 90.0)))
    direct_horizontal = table.e_direct_normal * tau * sin_alt

    a_total = 2.0 * (
        config.width * config.depth + config.height * (config.width + config.depth)
    )
    admitted = FACADE_DIFFUSE_RATIO * table.e_sky_horizontal * glazed_area(config) * tau * louvre
    interreflected = admitted * config.reflectance / (a_total * (1.0 - config.reflectance))

    illum = (
        hits * direct_horizontal[None, :]
        + (omega[:, None] / (2.0 * math.pi)) * (tau * louvre) * table.e_sky_horizontal[None, :]
        + interreflected[None, :]
    )
    return AnnualPointSeries(illuminance=illum, direct_hit=hits, grid=grid, table=table)


def metrics_from_series(series: AnnualPointSeries) -> DaylightMetrics:
    """Reduce an annual series to the five daylight/glare fractions."""
    e = series.illuminance
    hits = series.direct_hit
    n_hours = e.shape[1]

    da_point = np.count_nonzero(e >= DA_THRESHOLD_LUX, axis=1) / n_hours
    udi_point = np.count_nonzero((e >= UDI_LOW_LUX) & (e <= UDI_HIGH_LUX), axis=1) / n_hours
    ase_hours = np.count_nonzero(hits, axis=1)
    svd_hours = np.count_nonzero(hits & (e > SVD_LUX), axis=1)

    return DaylightMetrics(
        udi=float(np.mean(udi_point)),
        m_da=float(np.mean(da_point)),
        s_da=float(np.mean(da_point >= SDA_DA_FRACTION)),
        ase=float(np.mean(ase_hours >= ASE_HOURS)),
        s_vd=float(np.mean(svd_hours > SVD_HOURS)),
    )


def annual_metrics(
    config: RoomConfig,
    grid: AnalysisGrid,
    schedule: Schedule,
    climate: PseudoClimate,
) -> DaylightMetrics:
    """Annual daylight/glare metrics for one room under the pseudo-climate."""
    return metrics_from_series(point_series(config, grid, climate.table(schedule)))


class ProxyOracle:
    """Deterministic labeler: shared climate, cached grids, grouped evaluation.

    Configs that differ only in surface reflectance share their beam-hit
    geometry, so the oracle evaluates hits once per geometry group.
    """

    def __init__(
        self,
        seed: int = 0,
        location: Location = TEHRAN,
        schedule: Schedule | None = None,
        grid_spacing: float = DEFAULT_GRID_SPACING,
        workplane: float = DEFAULT_WORKPLANE,
        wall_offset: float = DEFAULT_WALL_OFFSET,
    ):
        self.seed = int(seed)
        self.location = location
        self.schedule = schedule or Schedule()
        self.grid_spacing = grid_spacing
        self.workplane = workplane
        self.wall_offset = wall_offset
        self.climate = PseudoClimate(self.seed, location)
        self._grids: dict = {}
        self._omegas: dict = {}

    def grid_for(self, config: RoomConfig) -> AnalysisGrid:
        key = (config.width, config.depth)
        if key not in self._grids:
            self._grids[key] = build_grid(
                config, self.grid_spacing, self.workplane, self.wall_offset
            )
        return self._grids[key]

    def _omega_for(self, config: RoomConfig) -> np.ndarray:
        key = (config.width, config.depth, config.sill_height, config.window_height, config.divisions)
        if key not in self._omegas:
            self._omegas[key] = _solid_angles_grid(
                self.grid_for(config), window_rects(config), self.workplane
            )
        return self._omegas[key]

    def metrics(self, config: RoomConfig) -> DaylightMetrics:
        return annual_metrics(config, self.grid_for(config), self.schedule, self.climate)

    def metrics_many(self, configs: list[RoomConfig]) -> list[DaylightMetrics]:
        """Label many configs, grouping reflectance-only siblings; output order matches input."""
        table = self.climate.table(self.schedule)
        groups: dict = {}
        for i, c in enumerate(configs):
            key = (
                c.orientation,
                c.width,
                c.depth,
                c.shading,
                c.sill_height,
                c.window_height,
                c.divisions,
            )
            groups.setdefault(key, []).append(i)

        out: list = [None] * len(configs)
        sin_alt = np.sin(np.radians(np.clip(table.altitude, 0.0, 90.0)))
        for key, idxs in groups.items():
            rep = configs[idxs[0]]
            grid = self.grid_for(rep)
            omega = self._omega_for(rep)
            hits = _geometric_hits(rep, grid, table)
            louvre = LOUVRE_DIFFUSE_FACTOR if rep.shading is ShadingState.LOUVRE15 else 1.0
            tau = rep.glazing_transmittance
            direct = hits * (table.e_direct_normal * tau * sin_alt)[None, :]
            diffuse = (omega[:, None] / (2.0 * math.pi)) * (tau * louvre) * table.e_sky_horizontal[None, :]
            admitted = FACADE_DIFFUSE_RATIO * table.e_sky_horizontal * glazed_area(rep) * tau * louvre
            a_total = 2.0 * (rep.width * rep.depth + rep.height * (rep.width + rep.depth))
            base = direct + diffuse
            for i in idxs:
                rho = configs[i].reflectance
                e = base + (admitted * rho / (a_total * (1.0 - rho)))[None, :]
                out[i] = metrics_from_series(
                    AnnualPointSeries(illuminance=e, direct_hit=hits, grid=grid, table=table)
                )
        return out
