from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Any


@dataclass
class RunReport:
    service: str
    records_in: int = 0
    records_out: int = 0
    rejected: dict[str, int] = field(default_factory=dict)
    duration_ms: int = 0
    output_keys: list[str] = field(default_factory=list)
    published_count: int = 0
    events_by_kind: dict[str, int] = field(default_factory=dict)
    model_version: str | None = None
    warnings: list[str] = field(default_factory=list)
    runs_total: int = 0
    status: str = "ok"
    error: str | None = None

    @property
    def rejected_total(self) -> int:
        return sum(self.rejected.values())

    def to_dict(self) -> dict[str, Any]:
        doc = dataclasses.asdict(self)
        doc["rejected_total"] = self.rejected_total
        return doc


@dataclass(frozen=True)
class ApiPage:
    items: list
    total: int
    limit: int
    offset: int
