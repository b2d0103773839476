"""Domain types shared by every service."""

from __future__ import annotations

import enum
import hashlib
import math
from dataclasses import dataclass, field
from typing import Mapping


class DomainError(ValueError):
    """Raised when a core operation is called outside its preconditions."""


@dataclass(frozen=True)
class GeoPoint:
    lat_deg: float
    lon_deg: float

    def __post_init__(self) -> None:
        if not (-90.0 <= self.lat_deg <= 90.0):
            raise DomainError(f"latitude out of range: {self.lat_deg}")
        if not (-180.0 <= self.lon_deg <= 180.0):
            raise DomainError(f"longitude out of range: {self.lon_deg}")


@dataclass(frozen=True)
class AisRecord:
    """One raw position report, exactly as a source delivered it.

    Nothing is checked here: raw records may be garbage, and deciding
    that is the job of :func:`seawatch.core.cleaning.validate_record`.
    """

    mmsi: str
    ts_ms: int
    lat_deg: float
    lon_deg: float
    sog_knots: float
    cog_deg: float
    source_id: str


@dataclass(frozen=True)
class TrackPoint:
    """A validated position report."""

    mmsi: str
    ts_ms: int
    lat_deg: float
    lon_deg: float
    sog_knots: float
    cog_deg: float

    @property
    def position(self) -> GeoPoint:
        return GeoPoint(self.lat_deg, self.lon_deg)

    def to_record(self, source_id: str) -> AisRecord:
        return AisRecord(
            self.mmsi, self.ts_ms, self.lat_deg, self.lon_deg, self.sog_knots, self.cog_deg, source_id
        )


@dataclass(frozen=True)
class VesselClass:
    name: str
    max_sog_knots: float

    def __post_init__(self) -> None:
        if self.max_sog_knots <= 0:
            raise DomainError(f"class {self.name!r} needs a positive speed ceiling")


# Order matters: vessel_class_for() indexes into it by mmsi.
DEFAULT_VESSEL_CLASSES: tuple[VesselClass, ...] = (
    VesselClass("cargo", 25.0),
    VesselClass("tanker", 20.0),
    VesselClass("fishing", 15.0),
    VesselClass("passenger", 30.0),
)


@dataclass(frozen=True)
class SpeedStats:
    mu_knots: float
    sigma_knots: float
    n_points: int = 0

    def __post_init__(self) -> None:
        if self.sigma_knots < 0 or self.n_points < 0:
            raise DomainError("sigma and n_points must be non-negative")


@dataclass(frozen=True)
class SpeedStatsModel:
    """Per-vessel speed statistics, with fleet defaults for unknown vessels."""

    defaults: SpeedStats
    per_vessel: Mapping[str, SpeedStats] = field(default_factory=dict)
    version: str = ""
    created_at_ms: int = 0

    def stats_for(self, mmsi: str) -> SpeedStats:
        return self.per_vessel.get(mmsi, self.defaults)


@dataclass(frozen=True)
class DetectionConfig:
    gap_threshold_s: float = 21600
    jump_speed_knots: float = 100.0
    zscore_k: float = 3.0
    sigma_floor_knots: float = 1e-9
    min_points_per_vessel: int = 10
    merge_adjacency_s: float = 120

    def __post_init__(self) -> None:
        for name in (
            "gap_threshold_s",
            "jump_speed_knots",
            "zscore_k",
            "sigma_floor_knots",
            "min_points_per_vessel",
            "merge_adjacency_s",
        ):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be a positive number, got {value!r}")


class AnomalyKind(str, enum.Enum):
    SPEED_VIOLATION = "speed_violation"
    POSITION_JUMP = "position_jump"
    AIS_GAP = "ais_gap"

    def __str__(self) -> str:
        return self.value


def anomaly_id(kind: AnomalyKind | str, mmsi: str, ts_start_ms: int, ts_end_ms: int) -> str:
    """SHA-256 hex digest of ``kind|mmsi|start|end``."""
    kind = AnomalyKind(kind).value
    key = f"{kind}|{mmsi}|{int(ts_start_ms)}|{int(ts_end_ms)}"
    return hashlib.sha256(key.encode("ascii")).hexdigest()


@dataclass(frozen=True)
class AnomalyEvent:
    id: str
    kind: AnomalyKind
    mmsi: str
    ts_start_ms: int
    ts_end_ms: int
    score: float
    details: str = ""

    def __post_init__(self) -> None:
        if self.ts_start_ms > self.ts_end_ms:
            raise DomainError("anomaly window ends before it starts")
        if not self.score >= 0:
            raise DomainError(f"anomaly score must be non-negative, got {self.score!r}")
        if self.id != anomaly_id(self.kind, self.mmsi, self.ts_start_ms, self.ts_end_ms):
            raise DomainError("anomaly id does not match its key fields")

    @classmethod
    def create(
        cls,
        kind: AnomalyKind,
        mmsi: str,
        ts_start_ms: int,
        ts_end_ms: int,
        score: float,
        details: str = "",
    ) -> AnomalyEvent:
        kind = AnomalyKind(kind)
        return cls(
            anomaly_id(kind, mmsi, ts_start_ms, ts_end_ms),
            kind,
            mmsi,
            int(ts_start_ms),
            int(ts_end_ms),
            float(score),
            details,
        )


@dataclass(frozen=True)
class Rejected:
    """Outcome of a failed validation; ``reason`` names the first rule broken."""

    reason: str
