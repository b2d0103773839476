"""Deterministic synthetic AIS traffic with labelled anomaly injection.

Clean traffic is built so that the default detectors never fire on it:
every vessel holds a constant heading at 60% of its class ceiling, speed
noise is uniform and bounded, and positions advance by exactly the
reported speed. Each injection then breaks one rule on one vessel, by a
margin that :func:`expected_detectability` checks up front.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from seawatch.core import (
    DEFAULT_VESSEL_CLASSES,
    MAX_ENCODABLE_SOG_KNOTS,
    AisRecord,
    AnomalyKind,
    DetectionConfig,
    GeoPoint,
    VesselClass,
    haversine_km,
    vessel_class_for,
)
from seawatch.core.detection import UNDERWAY_MIN_SOG_KNOTS

MMSI_BASE = 244_010_000
CRUISE_FRACTION = 0.6
SPEED_NOISE_KNOTS = 0.5
START_LAT_RANGE = (48.0, 56.0)
START_LON_RANGE = (-8.0, 8.0)
SOURCE_ID = "synthetic"
DEFAULT_START_MS = 1_704_067_200_000  # 2024-01-01T00:00:00Z


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class InjectionSpec:
    kind: AnomalyKind
    count: int
    excess_knots: float = 20.0
    span_points: int = 3
    offset_deg_lon: float = 5.0
    gap_s: float = 28800

    @classmethod
    def from_doc(cls, doc: dict[str, Any]) -> InjectionSpec:
        known = {"kind", "count", "excess_knots", "span_points", "offset_deg_lon", "gap_s"}
        unknown = set(doc) - known
        if unknown:
            raise ScenarioError(f"unknown injection fields: {sorted(unknown)}")
        return cls(**{**doc, "kind": AnomalyKind(doc["kind"])})

    def to_doc(self) -> dict[str, Any]:
        doc: dict[str, Any] = {"kind": self.kind.value, "count": self.count}
        if self.kind is AnomalyKind.SPEED_VIOLATION:
            doc.update(excess_knots=self.excess_knots, span_points=self.span_points)
        elif self.kind is AnomalyKind.POSITION_JUMP:
            doc.update(offset_deg_lon=self.offset_deg_lon)
        else:
            doc.update(gap_s=self.gap_s)
        return doc


@dataclass(frozen=True)
class Scenario:
    seed: int
    n_vessels: int
    start_ms: int = DEFAULT_START_MS
    duration_s: int = 86400
    report_interval_s: int = 60
    injections: tuple[InjectionSpec, ...] = ()

    def __post_init__(self) -> None:
        if self.n_vessels < 1:
            raise ScenarioError("n_vessels must be at least 1")
        if self.report_interval_s <= 0 or self.duration_s < self.report_interval_s:
            raise ScenarioError("duration_s must be at least report_interval_s")
        if self.start_ms <= 0:
            raise ScenarioError("start_ms must be positive")
        for inj in self.injections:
            if inj.count < 0:
                raise ScenarioError("injection count must be non-negative")

    @property
    def n_reports(self) -> int:
        return self.duration_s // self.report_interval_s

    @property
    def clean_record_count(self) -> int:
        return self.n_vessels * self.n_reports

    def without_injections(self) -> Scenario:
        return Scenario(self.seed, self.n_vessels, self.start_ms, self.duration_s, self.report_interval_s)

    @classmethod
    def from_doc(cls, doc: dict[str, Any]) -> Scenario:
        fields = dict(doc)
        injections = tuple(InjectionSpec.from_doc(d) for d in fields.pop("injections", []))
        try:
            return cls(**fields, injections=injections)
        except TypeError as exc:
            raise ScenarioError(str(exc)) from None

    @classmethod
    def load(cls, path: str | Path) -> Scenario:
        return cls.from_doc(json.loads(Path(path).read_text(encoding="utf-8")))

    def to_doc(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "n_vessels": self.n_vessels,
            "start_ms": self.start_ms,
            "duration_s": self.duration_s,
            "report_interval_s": self.report_interval_s,
            "injections": [i.to_doc() for i in self.injections],
        }


@dataclass(frozen=True)
class GroundTruthLabel:
    kind: AnomalyKind
    mmsi: str
    ts_start_ms: int
    ts_end_ms: int

    def to_doc(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "mmsi": self.mmsi,
            "ts_start_ms": self.ts_start_ms,
            "ts_end_ms": self.ts_end_ms,
        }

    @classmethod
    def from_doc(cls, doc: dict[str, Any]) -> GroundTruthLabel:
        return cls(AnomalyKind(doc["kind"]), str(doc["mmsi"]), int(doc["ts_start_ms"]), int(doc["ts_end_ms"]))


@dataclass
class Generated:
    records: list[AisRecord]
    labels: list[GroundTruthLabel]
    removed: int = 0
    vessels: dict[str, str] = field(default_factory=dict)


def mmsi_for(index: int) -> str:
    return str(MMSI_BASE + index)


def _advance(lat: float, lon: float, heading_deg: float, sog: float, dt_s: float) -> tuple[float, float]:
    # local flat-earth step; 1 degree of latitude is 60 nautical miles
    nm = sog * dt_s / 3600
    h = math.radians(heading_deg)
    lat2 = lat + nm * math.cos(h) / 60
    lon2 = lon + nm * math.sin(h) / (60 * math.cos(math.radians(lat)))
    if lon2 > 180:
        lon2 -= 360
    elif lon2 < -180:
        lon2 += 360
    return lat2, lon2


def _gap_steps(inj: InjectionSpec, interval_s: int) -> int:
    return max(1, math.ceil(inj.gap_s / interval_s))


def _check_feasible(scenario: Scenario) -> None:
    total = sum(i.count for i in scenario.injections)
    if total > scenario.n_vessels:
        raise ScenarioError(
            f"injections need {total} distinct vessels but the scenario has {scenario.n_vessels}"
        )
    n = scenario.n_reports
    for inj in scenario.injections:
        if inj.count == 0:
            continue
        if inj.kind is AnomalyKind.SPEED_VIOLATION and (inj.span_points < 1 or n < inj.span_points + 2):
            raise ScenarioError("track too short for the speed injection span")
        if inj.kind is AnomalyKind.POSITION_JUMP and n < 3:
            raise ScenarioError("track too short for a position jump")
        if inj.kind is AnomalyKind.AIS_GAP and n - 1 < _gap_steps(inj, scenario.report_interval_s):
            raise ScenarioError("track too short for the requested gap")


def generate(
    scenario: Scenario, classes: Sequence[VesselClass] = DEFAULT_VESSEL_CLASSES
) -> Generated:
    """Records ordered by (ts_ms, mmsi), plus one label per afflicted vessel."""
    _check_feasible(scenario)
    rng = random.Random(scenario.seed)
    interval_ms = scenario.report_interval_s * 1000
    tracks: list[list[AisRecord]] = []
    vessels = {}
    for i in range(scenario.n_vessels):
        mmsi = mmsi_for(i)
        vclass = vessel_class_for(mmsi, classes)
        vessels[mmsi] = vclass.name
        lat = rng.uniform(*START_LAT_RANGE)
        lon = rng.uniform(*START_LON_RANGE)
        heading = rng.uniform(0.0, 360.0)
        cruise = CRUISE_FRACTION * vclass.max_sog_knots
        track = []
        for k in range(scenario.n_reports):
            sog = cruise + rng.uniform(-SPEED_NOISE_KNOTS, SPEED_NOISE_KNOTS)
            ts = scenario.start_ms + k * interval_ms
            track.append(AisRecord(mmsi, ts, lat, lon, sog, heading, SOURCE_ID))
            lat, lon = _advance(lat, lon, heading, sog, scenario.report_interval_s)
        tracks.append(track)

    labels: list[GroundTruthLabel] = []
    removed = 0
    chosen = rng.sample(range(scenario.n_vessels), sum(i.count for i in scenario.injections))
    cursor = 0
    n = scenario.n_reports
    for inj in scenario.injections:
        for idx in chosen[cursor : cursor + inj.count]:
            track = tracks[idx]
            if inj.kind is AnomalyKind.SPEED_VIOLATION:
                k = rng.randint(1, n - inj.span_points - 1)
                ceiling = vessel_class_for(track[0].mmsi, classes).max_sog_knots
                for j in range(k, k + inj.span_points):
                    r = track[j]
                    track[j] = AisRecord(
                        r.mmsi, r.ts_ms, r.lat_deg, r.lon_deg, ceiling + inj.excess_knots, r.cog_deg, r.source_id
                    )
                labels.append(
                    GroundTruthLabel(inj.kind, track[k].mmsi, track[k].ts_ms, track[k + inj.span_points - 1].ts_ms)
                )
            elif inj.kind is AnomalyKind.POSITION_JUMP:
                k = rng.randint(1, n - 2)
                r = track[k]
                lon = r.lon_deg + inj.offset_deg_lon
                if lon > 180:
                    lon -= 360
                track[k] = AisRecord(r.mmsi, r.ts_ms, r.lat_deg, lon, r.sog_knots, r.cog_deg, r.source_id)
                labels.append(GroundTruthLabel(inj.kind, r.mmsi, r.ts_ms, r.ts_ms))
            else:
                steps = _gap_steps(inj, scenario.report_interval_s)
                k = rng.randint(0, n - 1 - steps)
                labels.append(GroundTruthLabel(inj.kind, track[k].mmsi, track[k].ts_ms, track[k + steps].ts_ms))
                del track[k + 1 : k + steps]
                removed += steps - 1
        cursor += inj.count

    records = sorted((r for t in tracks for r in t), key=lambda r: (r.ts_ms, r.mmsi))
    labels.sort(key=lambda lb: (lb.ts_start_ms, lb.mmsi, lb.kind.value))
    return Generated(records, labels, removed, vessels)


def expected_detectability(
    scenario: Scenario,
    cfg: DetectionConfig | None = None,
    classes: Sequence[VesselClass] = DEFAULT_VESSEL_CLASSES,
) -> list[str]:
    """Reasons the scenario's faults (or its clean traffic) would not be detected as labelled.

    An empty list means every injection clears its detection threshold at
    the scenario cadence and the clean traffic stays below all of them.
    """
    cfg = cfg or DetectionConfig()
    problems: list[str] = []
    interval = scenario.report_interval_s
    in_use = [vessel_class_for(mmsi_for(i), classes) for i in range(min(scenario.n_vessels, len(classes)))]
    fastest = max(CRUISE_FRACTION * c.max_sog_knots for c in in_use) + SPEED_NOISE_KNOTS
    slowest = min(CRUISE_FRACTION * c.max_sog_knots for c in in_use) - SPEED_NOISE_KNOTS

    total = sum(i.count for i in scenario.injections)
    if total > scenario.n_vessels:
        problems.append(f"injections need {total} vessels, scenario has {scenario.n_vessels}")
    if interval > cfg.gap_threshold_s:
        problems.append("clean: report interval exceeds the gap threshold")
    if fastest >= cfg.jump_speed_knots:
        problems.append("clean: cruise speed reaches the jump threshold")

    # highest latitude any vessel can reach; longitude offsets shrink towards the pole
    drift_deg = fastest * scenario.duration_s / 3600 / 60
    lat_max = min(89.9, START_LAT_RANGE[1] + drift_deg)
    step_km = fastest * interval / 3600 * 1.852

    for inj in scenario.injections:
        if inj.count == 0:
            continue
        if inj.kind is AnomalyKind.SPEED_VIOLATION:
            if not inj.excess_knots > 0:
                problems.append("speed_violation: excess_knots must be positive")
            worst = max(c.max_sog_knots for c in in_use) + inj.excess_knots
            if worst > MAX_ENCODABLE_SOG_KNOTS:
                problems.append(f"speed_violation: injected sog {worst:g} kn fails record validation")
            if inj.span_points > 1 and interval > cfg.merge_adjacency_s:
                problems.append("speed_violation: cadence exceeds merge adjacency, span would split")
        elif inj.kind is AnomalyKind.POSITION_JUMP:
            offset_km = haversine_km(GeoPoint(lat_max, 0.0), GeoPoint(lat_max, abs(inj.offset_deg_lon)))
            implied = (offset_km - step_km) / (interval / 3600) / 1.852
            if not implied > cfg.jump_speed_knots:
                problems.append(
                    f"position_jump: offset implies {implied:.1f} kn, not above {cfg.jump_speed_knots:g} kn"
                )
        else:
            gap = _gap_steps(inj, interval) * interval
            if not gap > cfg.gap_threshold_s:
                problems.append(f"ais_gap: gap of {gap:g} s is not above {cfg.gap_threshold_s:g} s")
            if not slowest > UNDERWAY_MIN_SOG_KNOTS:
                problems.append("ais_gap: vessels are not underway before the gap")
    return problems


def default_scenario(with_injections: bool = True) -> Scenario:
    injections = (
        InjectionSpec(AnomalyKind.AIS_GAP, 5),
        InjectionSpec(AnomalyKind.POSITION_JUMP, 5),
        InjectionSpec(AnomalyKind.SPEED_VIOLATION, 5),
    )
    return Scenario(seed=42, n_vessels=20, injections=injections if with_injections else ())
