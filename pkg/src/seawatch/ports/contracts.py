"""Abstract contracts between the core workflows and the outside world."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Generic, Mapping, Sequence, TypeVar

from seawatch.core import AisRecord, AnomalyEvent, AnomalyKind, SpeedStatsModel, TrackPoint, VesselClass
from seawatch.ports.messages import MessageEnvelope
from seawatch.ports.settings import Settings

T = TypeVar("T")


@dataclass(frozen=True)
class Page(Generic[T]):
    items: list[T]
    total: int
    limit: int
    offset: int


@dataclass(frozen=True)
class LoadReport:
    points_in: int
    points_written: int
    vessels: int


@dataclass(frozen=True)
class ProcessResult:
    accepted: list[TrackPoint]
    rejections: list[tuple[AisRecord, str]] = field(default_factory=list)


@dataclass(frozen=True)
class Route:
    """One GET endpoint; ``path`` may contain ``{name}`` placeholders."""

    path: str
    handler: Callable[[Mapping[str, str], Mapping[str, str]], Any]
    method: str = "GET"


class Clock(ABC):
    @abstractmethod
    def now_ms(self) -> int:
        raise NotImplementedError


class Storage(ABC):
    """Object storage for the data lakes, keyed by slash-separated relative paths."""

    @abstractmethod
    def put(self, path: str, data: bytes) -> None:
        """Write ``data`` at ``path``, replacing any previous object atomically."""
        raise NotImplementedError

    @abstractmethod
    def get(self, path: str) -> bytes:
        raise NotImplementedError

    @abstractmethod
    def list(self, prefix: str) -> list[str]:
        """Sorted keys starting with ``prefix``; raises NotFound when there are none."""
        raise NotImplementedError

    @abstractmethod
    def exists(self, path: str) -> bool:
        raise NotImplementedError


class BrokerProducer(ABC):
    @abstractmethod
    def publish(self, envelope: MessageEnvelope) -> None:
        raise NotImplementedError


class BrokerConsumer(ABC):
    """At-least-once consumer.

    ``consume`` is the active method; a consumed envelope stays invisible
    until it is acked, nacked, or its visibility timeout lapses.
    """

    @abstractmethod
    def consume(self, topic: str, max_wait_ms: int = 0) -> MessageEnvelope | None:
        raise NotImplementedError

    @abstractmethod
    def ack(self, envelope_id: str) -> None:
        raise NotImplementedError

    @abstractmethod
    def nack(self, envelope_id: str) -> None:
        raise NotImplementedError


class Cache(ABC):
    @abstractmethod
    def set(self, key: str, value: Any, ttl_ms: int) -> None:
        raise NotImplementedError

    @abstractmethod
    def get(self, key: str) -> Any | None:
        raise NotImplementedError


class Warehouse(ABC):
    """Query-oriented store of vessels and their track points."""

    @abstractmethod
    def upsert_vessel(self, mmsi: str, vessel_class: VesselClass) -> None:
        raise NotImplementedError

    @abstractmethod
    def upsert_track_points(self, points: Sequence[TrackPoint]) -> int:
        """Insert or replace points keyed by (mmsi, ts_ms); returns how many changed."""
        raise NotImplementedError

    @abstractmethod
    def query_track(self, mmsi: str, from_ms: int, to_ms: int) -> list[TrackPoint]:
        """Points with ``from_ms <= ts_ms <= to_ms`` in ascending time order."""
        raise NotImplementedError

    @abstractmethod
    def list_vessels(self, limit: int, offset: int) -> Page[tuple[str, VesselClass]]:
        raise NotImplementedError

    @abstractmethod
    def get_vessel(self, mmsi: str) -> VesselClass | None:
        raise NotImplementedError

    @abstractmethod
    def count_points(self) -> int:
        raise NotImplementedError


class AnomalyStore(ABC):
    @abstractmethod
    def upsert(self, events: Sequence[AnomalyEvent]) -> int:
        """Store events keyed by id; returns how many were new or changed."""
        raise NotImplementedError

    @abstractmethod
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
        """Events matching every given filter, ordered by (ts_start_ms, id).

        The time filters select events whose window overlaps ``[from_ms, to_ms]``.
        """
        raise NotImplementedError

    @abstractmethod
    def count(self) -> int:
        raise NotImplementedError


class DataLoader(ABC):
    @abstractmethod
    def load(self, points: Sequence[TrackPoint]) -> LoadReport:
        raise NotImplementedError


class DataProcessor(ABC):
    @abstractmethod
    def process(self, batch: Sequence[AisRecord]) -> ProcessResult:
        raise NotImplementedError


class DataRetrieval(ABC):
    source_id: str

    @abstractmethod
    def fetch_batch(self, cursor: str | None = None) -> tuple[list[AisRecord], str | None]:
        """Next batch after ``cursor``; an exhausted source answers ``([], None)``."""
        raise NotImplementedError


class Model(ABC):
    @abstractmethod
    def predict(self, track: Sequence[TrackPoint]) -> list[AnomalyEvent]:
        raise NotImplementedError


class ModelRegistry(ABC):
    @abstractmethod
    def save(self, name: str, model: SpeedStatsModel) -> str:
        """Persist ``model`` under the next version ("v0001", "v0002", ...) and return it."""
        raise NotImplementedError

    @abstractmethod
    def load_latest(self, name: str) -> tuple[SpeedStatsModel, str]:
        raise NotImplementedError

    @abstractmethod
    def load(self, name: str, version: str) -> SpeedStatsModel:
        raise NotImplementedError


class Metrics(ABC):
    @abstractmethod
    def inc(self, name: str, labels: Mapping[str, str] | None = None, delta: float = 1) -> None:
        raise NotImplementedError

    @abstractmethod
    def observe(self, name: str, labels: Mapping[str, str] | None, value: float) -> None:
        raise NotImplementedError

    @abstractmethod
    def render(self) -> str:
        raise NotImplementedError

    @abstractmethod
    def value(self, name: str, labels: Mapping[str, str] | None = None) -> float:
        """Current value of one series, 0 if it was never touched."""
        raise NotImplementedError


class SettingsProvider(ABC):
    @abstractmethod
    def load(self, config_path: str | None, env_map: Mapping[str, str]) -> Settings:
        raise NotImplementedError


class Web(ABC):
    """Driving adapter that exposes a route table over HTTP."""

    @abstractmethod
    def bind(self, routes: Sequence[Route], listen: str) -> Any:
        """Start serving; the returned handle has an ``address`` of (host, port)."""
        raise NotImplementedError

    @abstractmethod
    def shutdown(self, handle: Any) -> None:
        raise NotImplementedError


PORT_CATALOG: dict[str, tuple[type, ...]] = {
    "broker_producer": (BrokerProducer,),
    "broker_consumer": (BrokerConsumer,),
    "cache": (Cache,),
    "database": (Warehouse, AnomalyStore),
    "data_loader": (DataLoader,),
    "data_processor": (DataProcessor,),
    "data_retrieval": (DataRetrieval,),
    "model": (Model, ModelRegistry),
    "metrics": (Metrics,),
    "settings": (SettingsProvider,),
    "storage": (Storage,),
    "web": (Web,),
}


def catalog_entries(cls: type) -> list[str]:
    """Catalog entries a class implements (an adapter should have exactly one)."""
    return [name for name, bases in PORT_CATALOG.items() if issubclass(cls, bases)]
