"""Warehouse and anomaly-store repositories, in memory and on disk.

The fs variants keep the same in-memory index as the memory variants and
persist every change as an append-only NDJSON segment file; opening a
store replays its segments in order.
"""

from __future__ import annotations

import bisect
import os
import re
import threading
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

from seawatch.adapters._fs import atomic_write
from seawatch.core import AnomalyEvent, AnomalyKind, TrackPoint, VesselClass
from seawatch.ports import AnomalyStore, CorruptData, Page, Warehouse
from seawatch.ports.codec import (
    event_from_doc,
    event_to_doc,
    iter_ndjson,
    point_from_doc,
    point_to_doc,
    to_ndjson,
)

_SEGMENT = re.compile(r"seg-(\d{6})\.ndjson")


class SegmentLog:
    def __init__(self, directory: Path) -> None:
        self.directory = directory
        self.directory.mkdir(parents=True, exist_ok=True)
        self._next = 1 + max((n for n, _ in self._segments()), default=0)

    def _segments(self) -> list[tuple[int, Path]]:
        found = []
        for entry in self.directory.iterdir():
            m = _SEGMENT.fullmatch(entry.name)
            if m:
                found.append((int(m.group(1)), entry))
        return sorted(found)

    def replay(self, decode: Callable[[dict], Any]) -> Iterable[Any]:
        for _, path in self._segments():
            data = path.read_bytes()
            if data and not data.endswith(b"\n"):
                lineno = data.count(b"\n") + 1
                raise CorruptData(f"{path}: line {lineno}: truncated line")
            try:
                for lineno, doc in iter_ndjson(data, str(path)):
                    try:
                        yield decode(doc)
                    except (KeyError, TypeError, ValueError, AttributeError) as exc:
                        raise CorruptData(f"{path}: line {lineno}: {exc}") from None
            except UnicodeDecodeError as exc:
                raise CorruptData(f"{path}: undecodable bytes: {exc}") from None
            except CorruptData:
                raise
            except ValueError as exc:
                raise CorruptData(str(exc)) from None

    def append(self, docs: list[dict]) -> None:
        if not docs:
            return
        atomic_write(self.directory / f"seg-{self._next:06d}.ndjson", to_ndjson(docs))
        self._next += 1


def _page(items: list, limit: int, offset: int) -> Page:
    return Page(items=items[offset : offset + limit], total=len(items), limit=limit, offset=offset)


class MemoryWarehouse(Warehouse):
    def __init__(self) -> None:
        self._vessels: dict[str, VesselClass] = {}
        self._points: dict[str, dict[int, TrackPoint]] = {}
        # per vessel, sorted timestamps, rebuilt lazily after writes
        self._order: dict[str, list[int]] = {}
        self._lock = threading.RLock()

    def _apply_vessel(self, mmsi: str, vessel_class: VesselClass) -> bool:
        if self._vessels.get(mmsi) == vessel_class:
            return False
        self._vessels[mmsi] = vessel_class
        return True

    def _apply_points(self, points: Sequence[TrackPoint]) -> list[TrackPoint]:
        changed = []
        for p in points:
            track = self._points.setdefault(p.mmsi, {})
            if track.get(p.ts_ms) != p:
                if p.ts_ms not in track:
                    self._order.pop(p.mmsi, None)
                track[p.ts_ms] = p
                changed.append(p)
        return changed

    def upsert_vessel(self, mmsi: str, vessel_class: VesselClass) -> None:
        with self._lock:
            self._apply_vessel(mmsi, vessel_class)

    def upsert_track_points(self, points: Sequence[TrackPoint]) -> int:
        with self._lock:
            return len(self._apply_points(points))

    def query_track(self, mmsi: str, from_ms: int, to_ms: int) -> list[TrackPoint]:
        with self._lock:
            track = self._points.get(mmsi)
            if not track:
                return []
            order = self._order.get(mmsi)
            if order is None:
                order = self._order[mmsi] = sorted(track)
            lo = bisect.bisect_left(order, from_ms)
            hi = bisect.bisect_right(order, to_ms)
            return [track[t] for t in order[lo:hi]]

    def list_vessels(self, limit: int, offset: int) -> Page[tuple[str, VesselClass]]:
        with self._lock:
            rows = sorted(self._vessels.items())
        return _page(rows, limit, offset)

    def get_vessel(self, mmsi: str) -> VesselClass | None:
        with self._lock:
            return self._vessels.get(mmsi)

    def count_points(self) -> int:
        with self._lock:
            return sum(len(t) for t in self._points.values())


class FsWarehouse(MemoryWarehouse):
    def __init__(self, root: str | os.PathLike) -> None:
        super().__init__()
        self.root = Path(root)
        self._vessel_log = SegmentLog(self.root / "vessels")
        self._point_log = SegmentLog(self.root / "points")
        for mmsi, vc in self._vessel_log.replay(
            lambda d: (str(d["mmsi"]), VesselClass(d["class"], float(d["max_sog_knots"])))
        ):
            self._apply_vessel(mmsi, vc)
        self._apply_points(list(self._point_log.replay(point_from_doc)))

    def upsert_vessel(self, mmsi: str, vessel_class: VesselClass) -> None:
        with self._lock:
            if self._apply_vessel(mmsi, vessel_class):
                self._vessel_log.append(
                    [{"mmsi": mmsi, "class": vessel_class.name, "max_sog_knots": vessel_class.max_sog_knots}]
                )

    def upsert_track_points(self, points: Sequence[TrackPoint]) -> int:
        with self._lock:
            changed = self._apply_points(points)
            self._point_log.append([point_to_doc(p) for p in changed])
            return len(changed)


class MemoryAnomalyStore(AnomalyStore):
    def __init__(self) -> None:
        self._events: dict[str, AnomalyEvent] = {}
        self._lock = threading.RLock()

    def _apply(self, events: Sequence[AnomalyEvent]) -> list[AnomalyEvent]:
        changed = []
        for e in events:
            if self._events.get(e.id) != e:
                self._events[e.id] = e
                changed.append(e)
        return changed

    def upsert(self, events: Sequence[AnomalyEvent]) -> int:
        with self._lock:
            return len(self._apply(events))

    def query(
        self,
        *,
        mmsi: str | None = None,
        kind: AnomalyKind | None = None,
        from_ms: int | None = None,
        to_ms: int | None = None,
        limit: int = 100,
        offset: int = 0,
    ) -> Page[AnomalyEvent]:
        kind = AnomalyKind(kind) if kind is not None else None
        with self._lock:
            hits = [
                e
                for e in self._events.values()
                if (mmsi is None or e.mmsi == mmsi)
                and (kind is None or e.kind is kind)
                and (from_ms is None or e.ts_end_ms >= from_ms)
                and (to_ms is None or e.ts_start_ms <= to_ms)
            ]
        hits.sort(key=lambda e: (e.ts_start_ms, e.id))
        return _page(hits, limit, offset)

    def count(self) -> int:
        with self._lock:
            return len(self._events)


class FsAnomalyStore(MemoryAnomalyStore):
    def __init__(self, root: str | os.PathLike) -> None:
        super().__init__()
        self.root = Path(root)
        self._log = SegmentLog(self.root / "events")
        self._apply(list(self._log.replay(event_from_doc)))

    def upsert(self, events: Sequence[AnomalyEvent]) -> int:
        with self._lock:
            changed = self._apply(events)
            self._log.append([event_to_doc(e) for e in changed])
            return len(changed)
