"""Business logic. Imports nothing outside the standard library."""

from seawatch.core.cleaning import (
    MAX_ENCODABLE_SOG_KNOTS,
    dedupe_batch,
    validate_record,
    vessel_class_for,
)
from seawatch.core.detection import detect_gap, detect_jump, detect_speed, run_detection
from seawatch.core.geo import EARTH_RADIUS_KM, haversine_km, implied_speed_knots
from seawatch.core.model import (
    DEFAULT_VESSEL_CLASSES,
    AisRecord,
    AnomalyEvent,
    AnomalyKind,
    DetectionConfig,
    DomainError,
    GeoPoint,
    Rejected,
    SpeedStats,
    SpeedStatsModel,
    TrackPoint,
    VesselClass,
    anomaly_id,
)
from seawatch.core.stats import fit_speed_stats, fit_stat_model, zscore

__all__ = [
    "DEFAULT_VESSEL_CLASSES",
    "EARTH_RADIUS_KM",
    "MAX_ENCODABLE_SOG_KNOTS",
    "AisRecord",
    "AnomalyEvent",
    "AnomalyKind",
    "DetectionConfig",
    "DomainError",
    "GeoPoint",
    "Rejected",
    "SpeedStats",
    "SpeedStatsModel",
    "TrackPoint",
    "VesselClass",
    "anomaly_id",
    "dedupe_batch",
    "detect_gap",
    "detect_jump",
    "detect_speed",
    "fit_speed_stats",
    "fit_stat_model",
    "haversine_km",
    "implied_speed_knots",
    "run_detection",
    "validate_record",
    "vessel_class_for",
    "zscore",
]
