"""Local-plane geodesy: short-leg distances, bearings and point offsets.

All bearings are degrees clockwise from true north (marine convention).
The math is an equirectangular approximation, good to well under 0.1 %
for legs below 10 km, which keeps distance/offset exactly invertible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Meters per degree of latitude; longitude shrinks by cos(latitude).
METERS_PER_DEG_LAT = 111_194.9

# Beyond this the flat-plane approximation is no longer trustworthy.
MAX_LEG_METERS = 10_000.0


def wrap_angle(theta: float) -> float:
    """Wrap an angle in degrees into [0, 360)."""
    if not math.isfinite(theta):
        raise ValueError(f"angle must be finite, got {theta!r}")
    wrapped = theta % 360.0
    # float modulo can land exactly on 360.0 for tiny negative inputs
    return 0.0 if wrapped == 360.0 else wrapped


def wrap_signed(theta: float) -> float:
    """Wrap an angle in degrees into (-180, 180]."""
    wrapped = wrap_angle(theta)
    return wrapped - 360.0 if wrapped > 180.0 else wrapped


def unit_enu(bearing_deg: float) -> tuple[float, float]:
    """(east, north) unit vector of a compass bearing."""
    rad = math.radians(bearing_deg)
    return math.sin(rad), math.cos(rad)


def bearing_of(east: float, north: float) -> float:
    """Compass bearing of an (east, north) vector; 0.0 for the zero vector."""
    if east == 0.0 and north == 0.0:
        return 0.0
    return wrap_angle(math.degrees(math.atan2(east, north)))


@dataclass(frozen=True)
class GeoPoint:
    """WGS84-style position. lat in [-90, 90], lon wrapped to [-180, 180)."""

    lat: float
    lon: float

    def __post_init__(self):
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise ValueError(f"non-finite coordinates ({self.lat}, {self.lon})")
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude {self.lat} outside [-90, 90]")
        lon = (self.lon + 180.0) % 360.0 - 180.0
        if lon == 180.0:
            lon = -180.0
        object.__setattr__(self, "lon", lon)


@dataclass(frozen=True)
class EnuVector:
    """Planar east/north displacement in meters."""

    east: float
    north: float

    def __post_init__(self):
        if not (math.isfinite(self.east) and math.isfinite(self.north)):
            raise ValueError(f"non-finite ENU components ({self.east}, {self.north})")

    def magnitude(self) -> float:
        return math.hypot(self.east, self.north)


def enu_offset(a: GeoPoint, b: GeoPoint) -> EnuVector:
    """East/north displacement from a to b in the local plane.

    Longitude is scaled by the cosine of the midpoint latitude so the
    result is antisymmetric under swapping a and b, which makes ranges
    exactly symmetric.
    """
    mid_lat = 0.5 * (a.lat + b.lat)
    # branch-based wrap keeps dlon exactly antisymmetric under swapping a/b
    dlon = b.lon - a.lon
    if dlon >= 180.0:
        dlon -= 360.0
    elif dlon < -180.0:
        dlon += 360.0
    east = dlon * METERS_PER_DEG_LAT * math.cos(math.radians(mid_lat))
    north = (b.lat - a.lat) * METERS_PER_DEG_LAT
    return EnuVector(east, north)


def distance_bearing(a: GeoPoint, b: GeoPoint) -> tuple[float, float]:
    """Range (m) and compass bearing (deg) from a to b.

    Bearing is 0.0 when the points coincide.
    """
    enu = enu_offset(a, b)
    return enu.magnitude(), bearing_of(enu.east, enu.north)


def offset_point(origin: GeoPoint, delta: EnuVector) -> GeoPoint:
    """Point displaced from origin by delta meters east/north.

    Inverse of enu_offset: uses the same midpoint-latitude longitude
    scaling, so distance_bearing(origin, result) recovers delta exactly
    up to float rounding. A zero delta returns origin itself.
    """
    if delta.east == 0.0 and delta.north == 0.0:
        return origin
    if delta.magnitude() >= MAX_LEG_METERS:
        raise ValueError(f"offset {delta.magnitude():.1f} m exceeds {MAX_LEG_METERS:.0f} m")
    lat = origin.lat + delta.north / METERS_PER_DEG_LAT
    mid_lat = 0.5 * (origin.lat + lat)
    lon = origin.lon + delta.east / (METERS_PER_DEG_LAT * math.cos(math.radians(mid_lat)))
    return GeoPoint(lat, lon)
