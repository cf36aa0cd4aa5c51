"""Solar position from standard declination / hour-angle geometry.

Angles follow the usual conventions: altitude in degrees above the horizon,
azimuth in degrees clockwise from north (0 = N, 90 = E, 180 = S, 270 = W).
The hour passed to :func:`sun_position` is local standard clock time; it is
converted to apparent solar time internally with the equation of time and the
longitude-versus-timezone-meridian offset, which is why the location's
longitude and reference meridian are part of the signature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Location:
    """Site latitude/longitude (degrees, east positive) and timezone meridian."""

    latitude: float
    longitude: float
    tz_meridian: float


# Table-1 fixed location: Tehran, timezone UTC+3.5 (meridian 52.5 E).
TEHRAN = Location(latitude=35.69, longitude=51.39, tz_meridian=52.5)


@dataclass(frozen=True)
class SunPosition:
    altitude: float
    azimuth: float
    day: int
    solar_hour: float

    def __post_init__(self) -> None:
        if not -90.0 <= self.altitude <= 90.0:
            raise ValueError(f"altitude {self.altitude} outside [-90, 90]")
        if not 0.0 <= self.azimuth < 360.0:
            raise ValueError(f"azimuth {self.azimuth} outside [0, 360)")


def _day_angle(day: int) -> float:
    return 2.0 * math.pi * (day - 1) / 365.0


def declination(day: int) -> float:
    """Solar declination (degrees) from the Fourier-series fit of the year angle."""
    g = _day_angle(day)
    decl = (
        0.006918
        - 0.399912 * math.cos(g)
        + 0.070257 * math.sin(g)
        - 0.006758 * math.cos(2 * g)
        + 0.000907 * math.sin(2 * g)
        - 0.002697 * math.cos(3 * g)
        + 0.00148 * math.sin(3 * g)
    )
    return math.degrees(decl)


def equation_of_time(day: int) -> float:
    """Equation of time in minutes (apparent solar minus mean solar)."""
    g = _day_angle(day)
    return 229.18 * (
        0.000075
        + 0.001868 * math.cos(g)
        - 0.032077 * math.sin(g)
        - 0.014615 * math.cos(2 * g)
        - 0.040849 * math.sin(2 * g)
    )


def solar_time(day: int, clock_hour: float, longitude: float, tz_meridian: float) -> float:
    """Apparent solar hour for a local standard clock hour."""
    offset_minutes = equation_of_time(day) + 4.0 * (longitude - tz_meridian)
    return clock_hour + offset_minutes / 60.0


def sun_position(
    latitude: float,
    longitude: float,
    tz_meridian: float,
    day: int,
    hour: float,
) -> SunPosition:
    """Sun altitude/azimuth for day-of-year 1..365 and local clock hour 0..24.

    altitude = asin(sin(lat) sin(decl) + cos(lat) cos(decl) cos(hour_angle));
    azimuth from the spherical-triangle cosine relation, disambiguated by the
    sign of the hour angle (morning sun east, afternoon sun west).
    """
    if not -90.0 < latitude < 90.0:
        raise ValueError(f"latitude {latitude} outside (-90, 90)")
    t_solar = solar_time(day, hour, longitude, tz_meridian)
    hour_angle = math.radians(15.0 * (t_solar - 12.0))
    phi = math.radians(latitude)
    delta = math.radians(declination(day))

    sin_alt = math.sin(phi) * math.sin(delta) + math.cos(phi) * math.cos(delta) * math.cos(hour_angle)
    alt = math.asin(max(-1.0, min(1.0, sin_alt)))

    cos_az = (math.sin(delta) - math.sin(phi) * sin_alt) / max(1e-12, math.cos(phi) * math.cos(alt))
    az_from_north = math.degrees(math.acos(max(-1.0, min(1.0, cos_az))))
    azimuth = az_from_north if hour_angle <= 0 else 360.0 - az_from_north
    return SunPosition(
        altitude=math.degrees(alt),
        azimuth=azimuth % 360.0,
        day=day,
        solar_hour=t_solar,
    )


def sun_vector(altitude_deg: float, azimuth_deg: float) -> tuple[float, float, float]:
    """Unit vector toward the sun in world (east, north, up) coordinates."""
    alt = math.radians(altitude_deg)
    az = math.radians(azimuth_deg)
    return (
        math.cos(alt) * math.sin(az),
        math.cos(alt) * math.cos(az),
        math.sin(alt),
    )
