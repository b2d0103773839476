"""Rule- and model-based anomaly detection over a single vessel's track.

Every detector flags individual points or consecutive pairs, then folds
flags of the same kind that lie within ``merge_adjacency_s`` of each other
into one event, so that one fault in the data gives one reported event.
"""

from __future__ import annotations

from typing import Sequence

from seawatch.core.geo import implied_speed_knots
from seawatch.core.model import (
    AnomalyEvent,
    AnomalyKind,
    DetectionConfig,
    DomainError,
    SpeedStatsModel,
    TrackPoint,
    VesselClass,
)
from seawatch.core.stats import zscore

# A vessel slower than this is treated as moored when it falls silent.
UNDERWAY_MIN_SOG_KNOTS = 1.0


def _check_track(track: Sequence[TrackPoint]) -> None:
    for prev, cur in zip(track, track[1:]):
        if cur.ts_ms <= prev.ts_ms:
            raise DomainError("unsorted track")
        if cur.mmsi != prev.mmsi:
            raise DomainError("track mixes vessels")


def _merge(flags: list[tuple[int, int, float]], adjacency_ms: float) -> list[tuple[int, int, float]]:
    """Fold time-ordered (start, end, score) flags into (start, end, max score) runs."""
    runs: list[list] = []
    for start, end, score in flags:
        if runs and start - runs[-1][1] <= adjacency_ms:
            run = runs[-1]
            run[1] = max(run[1], end)
            run[2] = max(run[2], score)
        else:
            runs.append([start, end, score])
    return [tuple(r) for r in runs]


def detect_speed(
    track: Sequence[TrackPoint],
    vessel_class: VesselClass,
    model: SpeedStatsModel,
    cfg: DetectionConfig,
) -> list[AnomalyEvent]:
    _check_track(track)
    if not track:
        return []
    mmsi = track[0].mmsi
    stats = model.stats_for(mmsi)
    ceiling = vessel_class.max_sog_knots
    flags = []
    peak_sog: dict[int, float] = {}
    for p in track:
        z = zscore(p.sog_knots, stats.mu_knots, stats.sigma_knots, cfg.sigma_floor_knots)
        over_ceiling = p.sog_knots > ceiling
        if over_ceiling or z > cfg.zscore_k:
            score = max(z, p.sog_knots / ceiling) if over_ceiling else z
            flags.append((p.ts_ms, p.ts_ms, score))
            peak_sog[p.ts_ms] = p.sog_knots
    events = []
    for start, end, score in _merge(flags, cfg.merge_adjacency_s * 1000):
        peak = max(v for t, v in peak_sog.items() if start <= t <= end)
        details = (
            f"peak sog {peak:.2f} kn; {vessel_class.name} ceiling {ceiling:g} kn; "
            f"fitted mean {stats.mu_knots:.2f} kn, sd {stats.sigma_knots:.3f} kn"
        )
        events.append(AnomalyEvent.create(AnomalyKind.SPEED_VIOLATION, mmsi, start, end, score, details))
    return events


def detect_jump(track: Sequence[TrackPoint], cfg: DetectionConfig) -> list[AnomalyEvent]:
    _check_track(track)
    flags = []
    for p, q in zip(track, track[1:]):
        speed = implied_speed_knots(p, q)
        if speed > cfg.jump_speed_knots:
            flags.append((p.ts_ms, q.ts_ms, speed / cfg.jump_speed_knots))
    return [
        AnomalyEvent.create(
            AnomalyKind.POSITION_JUMP,
            track[0].mmsi,
            start,
            end,
            score,
            f"implied speed {score * cfg.jump_speed_knots:.1f} kn over threshold {cfg.jump_speed_knots:g} kn",
        )
        for start, end, score in _merge(flags, cfg.merge_adjacency_s * 1000)
    ]


def detect_gap(track: Sequence[TrackPoint], cfg: DetectionConfig) -> list[AnomalyEvent]:
    # Gaps are reported one per silent interval and never merged.
    _check_track(track)
    events = []
    for p, q in zip(track, track[1:]):
        gap_s = (q.ts_ms - p.ts_ms) / 1000
        if gap_s > cfg.gap_threshold_s and p.sog_knots > UNDERWAY_MIN_SOG_KNOTS:
            events.append(
                AnomalyEvent.create(
                    AnomalyKind.AIS_GAP,
                    p.mmsi,
                    p.ts_ms,
                    q.ts_ms,
                    gap_s / cfg.gap_threshold_s,
                    f"silent for {gap_s:.0f} s while underway at {p.sog_knots:.1f} kn",
                )
            )
    return events


def run_detection(
    track: Sequence[TrackPoint],
    vessel_class: VesselClass,
    model: SpeedStatsModel,
    cfg: DetectionConfig,
) -> list[AnomalyEvent]:
    """All anomalies of one vessel's track, ordered by (start, kind, id)."""
    events = [
        *detect_speed(track, vessel_class, model, cfg),
        *detect_jump(track, cfg),
        *detect_gap(track, cfg),
    ]
    return sorted(events, key=lambda e: (e.ts_start_ms, e.kind.value, e.id))
