"""Record validation and batch cleaning."""

from __future__ import annotations

import math
import re
from typing import Iterable, Sequence

from seawatch.core.model import (
    DEFAULT_VESSEL_CLASSES,
    AisRecord,
    Rejected,
    TrackPoint,
    VesselClass,
)

# Highest speed the AIS SOG field can encode (1022 tenths of a knot).
MAX_ENCODABLE_SOG_KNOTS = 102.2

_MMSI = re.compile(r"[0-9]{9}")


def _number(value: object) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _rules(r: AisRecord):
    yield "mmsi_format", isinstance(r.mmsi, str) and _MMSI.fullmatch(r.mmsi) is not None
    yield "lat_range", _number(r.lat_deg) and -90.0 <= r.lat_deg <= 90.0
    yield "lon_range", _number(r.lon_deg) and -180.0 <= r.lon_deg <= 180.0
    yield "sog_range", _number(r.sog_knots) and 0.0 <= r.sog_knots <= MAX_ENCODABLE_SOG_KNOTS
    yield "cog_range", _number(r.cog_deg) and 0.0 <= r.cog_deg < 360.0
    yield "ts_positive", isinstance(r.ts_ms, int) and not isinstance(r.ts_ms, bool) and r.ts_ms > 0


def validate_record(r: AisRecord) -> TrackPoint | Rejected:
    """Turn a raw record into a :class:`TrackPoint`, or say which rule it broke."""
    for name, ok in _rules(r):
        if not ok:
            return Rejected(name)
    return TrackPoint(
        r.mmsi, r.ts_ms, float(r.lat_deg), float(r.lon_deg), float(r.sog_knots), float(r.cog_deg)
    )


def dedupe_batch(points: Iterable[TrackPoint]) -> list[TrackPoint]:
    seen: set[tuple[str, int]] = set()
    out = []
    for p in points:
        key = (p.mmsi, p.ts_ms)
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


def vessel_class_for(
    mmsi: str, classes: Sequence[VesselClass] = DEFAULT_VESSEL_CLASSES
) -> VesselClass:
    """Class of a vessel, assigned round-robin on the numeric MMSI.

    Position reports carry no ship type, so the class table is indexed by
    ``int(mmsi) % len(classes)``.
    """
    return classes[int(mmsi) % len(classes)]
