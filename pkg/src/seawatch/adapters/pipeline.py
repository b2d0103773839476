"""Thin adapters that hand work to the core: processing, loading, scoring."""

from __future__ import annotations

from typing import Sequence

from seawatch.core import (
    AisRecord,
    AnomalyEvent,
    DetectionConfig,
    Rejected,
    SpeedStatsModel,
    TrackPoint,
    VesselClass,
    dedupe_batch,
    run_detection,
    validate_record,
    vessel_class_for,
)
from seawatch.ports import DataLoader, DataProcessor, LoadReport, Model, ProcessResult, Warehouse


class CoreDataProcessor(DataProcessor):
    def process(self, batch: Sequence[AisRecord]) -> ProcessResult:
        accepted, rejections = [], []
        for record in batch:
            outcome = validate_record(record)
            if isinstance(outcome, Rejected):
                rejections.append((record, outcome.reason))
            else:
                accepted.append(outcome)
        return ProcessResult(dedupe_batch(accepted), rejections)


class WarehouseDataLoader(DataLoader):
    def __init__(self, warehouse: Warehouse, classes: Sequence[VesselClass]) -> None:
        self.warehouse = warehouse
        self.classes = tuple(classes)

    def load(self, points: Sequence[TrackPoint]) -> LoadReport:
        vessels = sorted({p.mmsi for p in points})
        for mmsi in vessels:
            self.warehouse.upsert_vessel(mmsi, vessel_class_for(mmsi, self.classes))
        written = self.warehouse.upsert_track_points(points)
        return LoadReport(points_in=len(points), points_written=written, vessels=len(vessels))


class SpeedStatsDetector(Model):
    """Scores a track with the rule detectors plus a fitted speed-stats model."""

    def __init__(
        self,
        stats: SpeedStatsModel,
        cfg: DetectionConfig,
        classes: Sequence[VesselClass],
    ) -> None:
        self.stats = stats
        self.cfg = cfg
        self.classes = tuple(classes)

    def predict(self, track: Sequence[TrackPoint]) -> list[AnomalyEvent]:
        if not track:
            return []
        return run_detection(track, vessel_class_for(track[0].mmsi, self.classes), self.stats, self.cfg)
