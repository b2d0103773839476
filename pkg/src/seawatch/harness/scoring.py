"""Matching detected anomalies against injected ground truth."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from seawatch.core import AnomalyEvent, AnomalyKind
from seawatch.simgen import GroundTruthLabel


def _ratio(num: int, den: int) -> float:
    return 1.0 if den == 0 else num / den


@dataclass
class MatchReport:
    precision: float
    recall: float
    per_kind: dict[str, dict[str, Any]]
    matched: list[tuple[GroundTruthLabel, str]] = field(default_factory=list)
    unmatched_labels: list[GroundTruthLabel] = field(default_factory=list)
    unmatched_events: list[str] = field(default_factory=list)

    @property
    def perfect(self) -> bool:
        return self.precision == 1.0 and self.recall == 1.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "per_kind": self.per_kind,
            "matched": [{"label": lb.to_doc(), "event_id": eid} for lb, eid in self.matched],
            "unmatched_labels": [lb.to_doc() for lb in self.unmatched_labels],
            "unmatched_events": list(self.unmatched_events),
        }


def _overlaps(label: GroundTruthLabel, event: AnomalyEvent, widen_ms: float) -> bool:
    return event.ts_start_ms <= label.ts_end_ms + widen_ms and event.ts_end_ms >= label.ts_start_ms - widen_ms


def score(
    labels: Sequence[GroundTruthLabel],
    events: Sequence[AnomalyEvent],
    merge_adjacency_s: float = 120,
) -> MatchReport:
    """Greedy one-to-one matching in ascending start time.

    An event matches a label of the same kind and vessel when their windows
    overlap once the label is widened by ``merge_adjacency_s`` on each side.
    """
    widen_ms = merge_adjacency_s * 1000
    ordered_labels = sorted(labels, key=lambda lb: (lb.ts_start_ms, lb.mmsi, lb.kind.value, lb.ts_end_ms))
    ordered_events = sorted(events, key=lambda e: (e.ts_start_ms, e.id))
    used: set[str] = set()
    matched, unmatched_labels = [], []
    for label in ordered_labels:
        for event in ordered_events:
            if (
                event.id not in used
                and event.kind is label.kind
                and event.mmsi == label.mmsi
                and _overlaps(label, event, widen_ms)
            ):
                used.add(event.id)
                matched.append((label, event.id))
                break
        else:
            unmatched_labels.append(label)
    unmatched_events = [e.id for e in ordered_events if e.id not in used]

    per_kind = {}
    for kind in AnomalyKind:
        n_labels = sum(1 for lb in labels if lb.kind is kind)
        n_events = sum(1 for e in events if e.kind is kind)
        n_matched = sum(1 for lb, _ in matched if lb.kind is kind)
        per_kind[kind.value] = {
            "labels": n_labels,
            "events": n_events,
            "matched": n_matched,
            "precision": _ratio(n_matched, n_events),
            "recall": _ratio(n_matched, n_labels),
        }
    return MatchReport(
        precision=_ratio(len(matched), len(events)),
        recall=_ratio(len(matched), len(labels)),
        per_kind=per_kind,
        matched=matched,
        unmatched_labels=unmatched_labels,
        unmatched_events=unmatched_events,
    )
