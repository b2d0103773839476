"""Broker wire types."""

from __future__ import annotations

import json
import re
import uuid
from dataclasses import dataclass, field
from typing import Any, Mapping

DETECTION_REQUESTS_TOPIC = "detection-requests"

_DATE = re.compile(r"\d{4}-\d{2}-\d{2}")


@dataclass(frozen=True)
class MessageEnvelope:
    topic: str
    key: str
    payload: Mapping[str, Any]
    produced_at_ms: int
    id: str = field(default_factory=lambda: str(uuid.uuid4()))

    def __post_init__(self) -> None:
        if not self.topic:
            raise ValueError("envelope topic must be non-empty")

    def to_json(self) -> str:
        return json.dumps(
            {
                "id": self.id,
                "topic": self.topic,
                "key": self.key,
                "payload": self.payload,
                "produced_at_ms": self.produced_at_ms,
            },
            sort_keys=True,
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, text: str) -> MessageEnvelope:
        doc = json.loads(text)
        return cls(
            topic=doc["topic"],
            key=doc["key"],
            payload=doc["payload"],
            produced_at_ms=doc["produced_at_ms"],
            id=doc["id"],
        )


@dataclass(frozen=True)
class DetectionRequest:
    mmsi: str
    window_start_ms: int
    window_end_ms: int
    partition_date: str

    def __post_init__(self) -> None:
        # A one-point track is a degenerate but valid window.
        if self.window_start_ms > self.window_end_ms:
            raise ValueError("detection window ends before it starts")
        if not _DATE.fullmatch(self.partition_date):
            raise ValueError(f"bad partition date {self.partition_date!r}")

    def to_payload(self) -> dict[str, Any]:
        return {
            "mmsi": self.mmsi,
            "window_start_ms": self.window_start_ms,
            "window_end_ms": self.window_end_ms,
            "partition_date": self.partition_date,
        }

    @classmethod
    def from_payload(cls, payload: Mapping[str, Any]) -> DetectionRequest:
        """Parse a payload; raises ``ValueError``/``KeyError``/``TypeError`` on garbage."""
        mmsi = payload["mmsi"]
        start = payload["window_start_ms"]
        end = payload["window_end_ms"]
        if not isinstance(mmsi, str) or not all(isinstance(v, int) for v in (start, end)):
            raise TypeError("malformed detection request")
        return cls(mmsi, start, end, str(payload["partition_date"]))
