"""Data sources: the synthetic generator and NDJSON file replay.

Cursors are opaque strings ``<source>:<fingerprint>:<offset>``; the
fingerprint ties a cursor to the exact scenario or file it came from.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
from typing import Sequence

from seawatch import simgen
from seawatch.core import DEFAULT_VESSEL_CLASSES, AisRecord, VesselClass
from seawatch.ports import DataRetrieval, InvalidCursor
from seawatch.ports.codec import record_from_doc


def _fingerprint(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()[:16]


class _OffsetCursors:
    prefix: str
    fingerprint: str
    batch_size: int

    def _parse(self, cursor: str | None) -> int:
        if cursor is None:
            return 0
        parts = cursor.split(":") if isinstance(cursor, str) else []
        if len(parts) != 3 or parts[0] != self.prefix or parts[1] != self.fingerprint:
            raise InvalidCursor(f"cursor {cursor!r} does not belong to this source")
        try:
            offset = int(parts[2])
        except ValueError:
            raise InvalidCursor(f"malformed cursor {cursor!r}") from None
        if offset < 0:
            raise InvalidCursor(f"malformed cursor {cursor!r}")
        return offset

    def _slice(self, records: Sequence[AisRecord], cursor: str | None):
        offset = self._parse(cursor)
        if offset >= len(records):
            return [], None
        end = min(offset + self.batch_size, len(records))
        return list(records[offset:end]), f"{self.prefix}:{self.fingerprint}:{end}"


class SyntheticRetrieval(_OffsetCursors, DataRetrieval):
    prefix = "synthetic"

    def __init__(
        self,
        scenario: simgen.Scenario,
        batch_size: int = 1000,
        classes: Sequence[VesselClass] = DEFAULT_VESSEL_CLASSES,
    ) -> None:
        if batch_size < 1:
            raise ValueError("batch_size must be positive")
        self.scenario = scenario
        self.classes = tuple(classes)
        self.batch_size = batch_size
        self.source_id = simgen.SOURCE_ID
        self.fingerprint = _fingerprint(json.dumps(scenario.to_doc(), sort_keys=True).encode())
        self._records: list[AisRecord] | None = None

    @property
    def records(self) -> list[AisRecord]:
        if self._records is None:
            self._records = simgen.generate(self.scenario, self.classes).records
        return self._records

    def fetch_batch(self, cursor: str | None = None) -> tuple[list[AisRecord], str | None]:
        self._parse(cursor)
        return self._slice(self.records, cursor)


class FileReplayRetrieval(_OffsetCursors, DataRetrieval):
    """Streams AisRecords from an NDJSON file in file order.

    One record per line, so a cursor offset is the number of lines read.
    """

    prefix = "file"

    def __init__(self, path: str | os.PathLike, batch_size: int = 1000, source_id: str = "file_replay") -> None:
        if batch_size < 1:
            raise ValueError("batch_size must be positive")
        self.path = Path(path)
        self.batch_size = batch_size
        self.source_id = source_id
        self.fingerprint = _fingerprint(str(self.path.resolve()).encode())
        self._records: list[AisRecord] | None = None

    @property
    def records(self) -> list[AisRecord]:
        if self._records is None:
            records = []
            lines = self.path.read_bytes().decode("utf-8").splitlines()
            for lineno, line in enumerate(lines, start=1):
                try:
                    records.append(record_from_doc(json.loads(line)))
                except ValueError as exc:
                    raise ValueError(f"{self.path}: line {lineno}: {exc}") from None
            self._records = records
        return self._records

    def fetch_batch(self, cursor: str | None = None) -> tuple[list[AisRecord], str | None]:
        self._parse(cursor)
        return self._slice(self.records, cursor)
