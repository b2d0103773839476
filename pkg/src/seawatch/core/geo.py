"""Great-circle helpers."""

from __future__ import annotations

import math

from seawatch.core.model import DomainError, GeoPoint, TrackPoint

EARTH_RADIUS_KM = 6371.0
KM_PER_NAUTICAL_MILE = 1.852


def haversine_km(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance between two points, in kilometres."""
    lat1 = math.radians(a.lat_deg)
    lat2 = math.radians(b.lat_deg)
    dlat = lat2 - lat1
    dlon = math.radians(b.lon_deg - a.lon_deg)
    h = math.sin(dlat / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2) ** 2
    # rounding can push h a hair past 1 for antipodes
    return 2 * EARTH_RADIUS_KM * math.asin(math.sqrt(min(1.0, h)))


def implied_speed_knots(p: TrackPoint, q: TrackPoint) -> float:
    """Speed needed to travel from ``p`` to ``q`` in the time between them."""
    dt_ms = abs(q.ts_ms - p.ts_ms)
    if dt_ms == 0:
        raise DomainError("zero time delta")
    km = haversine_km(p.position, q.position)
    return km / (dt_ms / 3_600_000) / KM_PER_NAUTICAL_MILE
