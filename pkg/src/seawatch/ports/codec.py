"""NDJSON line formats and data-lake key layout.

These are wire formats shared by every service that reads or writes the
lakes, the warehouse segments and the anomaly store, so they live next to
the contracts rather than inside any one adapter.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from typing import Any, Iterable, Iterator

from seawatch.core import AisRecord, AnomalyEvent, AnomalyKind, TrackPoint

_RECORD_FIELDS = ("mmsi", "ts_ms", "lat_deg", "lon_deg", "sog_knots", "cog_deg", "source_id")
_POINT_FIELDS = _RECORD_FIELDS[:-1]


def dumps(doc: Any) -> str:
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=True)


def canonical(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def record_to_doc(r: AisRecord) -> dict[str, Any]:
    return {f: getattr(r, f) for f in _RECORD_FIELDS}


def record_from_doc(doc: dict[str, Any]) -> AisRecord:
    if not isinstance(doc, dict):
        raise ValueError("record line is not a JSON object")
    missing = [f for f in _RECORD_FIELDS if f not in doc]
    if missing:
        raise ValueError(f"record missing fields: {', '.join(missing)}")
    return AisRecord(**{f: doc[f] for f in _RECORD_FIELDS})


def point_to_doc(p: TrackPoint) -> dict[str, Any]:
    return {f: getattr(p, f) for f in _POINT_FIELDS}


def point_from_doc(doc: dict[str, Any]) -> TrackPoint:
    if not isinstance(doc, dict):
        raise ValueError("point line is not a JSON object")
    missing = [f for f in _POINT_FIELDS if f not in doc]
    if missing:
        raise ValueError(f"point missing fields: {', '.join(missing)}")
    return TrackPoint(
        str(doc["mmsi"]),
        int(doc["ts_ms"]),
        float(doc["lat_deg"]),
        float(doc["lon_deg"]),
        float(doc["sog_knots"]),
        float(doc["cog_deg"]),
    )


def event_to_doc(e: AnomalyEvent) -> dict[str, Any]:
    return {
        "id": e.id,
        "kind": e.kind.value,
        "mmsi": e.mmsi,
        "ts_start_ms": e.ts_start_ms,
        "ts_end_ms": e.ts_end_ms,
        "score": e.score,
        "details": e.details,
    }


def event_from_doc(doc: dict[str, Any]) -> AnomalyEvent:
    return AnomalyEvent(
        id=doc["id"],
        kind=AnomalyKind(doc["kind"]),
        mmsi=doc["mmsi"],
        ts_start_ms=int(doc["ts_start_ms"]),
        ts_end_ms=int(doc["ts_end_ms"]),
        score=float(doc["score"]),
        details=doc.get("details", ""),
    )


def to_ndjson(docs: Iterable[dict[str, Any]]) -> bytes:
    return "".join(dumps(d) + "\n" for d in docs).encode("ascii")


def iter_ndjson(data: bytes, name: str = "<bytes>") -> Iterator[tuple[int, Any]]:
    """Yield ``(line_number, document)``; blank lines are skipped.

    Raises ``ValueError`` naming ``name`` and the 1-based line on bad JSON.
    """
    for lineno, line in enumerate(data.decode("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            yield lineno, json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{name}: line {lineno}: {exc.msg}") from None


def utc_date(ts_ms: int) -> str:
    return datetime.fromtimestamp(ts_ms / 1000, tz=timezone.utc).strftime("%Y-%m-%d")


def raw_key(source_id: str, date: str, epoch_ms: int, seq: int) -> str:
    return f"raw/{source_id}/{date}/batch-{epoch_ms}-{seq:04d}.ndjson"


def processed_key(date: str, epoch_ms: int, seq: int) -> str:
    return f"processed/{date}/part-{epoch_ms}-{seq:04d}.ndjson"


def processed_prefix(date: str) -> str:
    return f"processed/{date}/"


def is_raw_key_for_date(key: str, date: str) -> bool:
    parts = key.split("/")
    return len(parts) == 4 and parts[0] == "raw" and parts[2] == date and parts[3].endswith(".ndjson")
