"""Adapter factories for the shared contract suites, one entry per adapter kind."""

from __future__ import annotations

import itertools
import tempfile
from pathlib import Path
from typing import Any, Callable

from seawatch import simgen
from seawatch.adapters import (
    CoreDataProcessor,
    FileEnvSettings,
    FileReplayRetrieval,
    FsAnomalyStore,
    FsModelRegistry,
    FsStorage,
    FsWarehouse,
    HttpWeb,
    InMemoryQueue,
    ManualClock,
    MemoryAnomalyStore,
    MemoryBrokerConsumer,
    MemoryBrokerProducer,
    MemoryCache,
    MemoryMetrics,
    MemoryModelRegistry,
    MemoryStorage,
    MemoryWarehouse,
    SyntheticRetrieval,
    WarehouseDataLoader,
)
from seawatch.core import DEFAULT_VESSEL_CLASSES, AnomalyKind
from seawatch.ports.codec import record_to_doc, to_ndjson

SMALL_SCENARIO = simgen.Scenario(
    seed=7,
    n_vessels=3,
    duration_s=3600,
    injections=(simgen.InjectionSpec(AnomalyKind.POSITION_JUMP, 1),),
)


def _fresh_dir(base: Path) -> Callable[[], Path]:
    counter = itertools.count()
    return lambda: Path(tempfile.mkdtemp(prefix=f"d{next(counter)}-", dir=base))


def _broker() -> tuple[Any, Any, ManualClock]:
    clock = ManualClock(1_000_000)
    queue = InMemoryQueue(5000, clock)
    return MemoryBrokerProducer(queue), MemoryBrokerConsumer(queue), clock


def _cache() -> tuple[MemoryCache, ManualClock]:
    clock = ManualClock(0)
    return MemoryCache(clock), clock


def _synthetic():
    return SyntheticRetrieval(SMALL_SCENARIO, batch_size=37), simgen.generate(SMALL_SCENARIO).records


def _file_replay(new_dir: Callable[[], Path]):
    def make():
        records = simgen.generate(SMALL_SCENARIO).records
        path = new_dir() / "records.ndjson"
        path.write_bytes(to_ndjson(record_to_doc(r) for r in records))
        return FileReplayRetrieval(path, batch_size=37), records

    return make


def _settings(new_dir: Callable[[], Path]):
    def make():
        d = new_dir()
        counter = itertools.count()

        def write(text: str) -> str:
            path = d / f"config-{next(counter)}.json"
            path.write_text(text)
            return str(path)

        return FileEnvSettings(), write

    return make


def adapter_factories(base: Path) -> dict[str, list[tuple[str, Callable[[], Any]]]]:
    """Suite name -> [(adapter kind, zero-argument factory)]."""
    new_dir = _fresh_dir(base)
    return {
        "storage": [("memory", MemoryStorage), ("fs", lambda: FsStorage(new_dir()))],
        "broker": [("memory", _broker)],
        "cache": [("memory", _cache)],
        "warehouse": [("memory", MemoryWarehouse), ("fs", lambda: FsWarehouse(new_dir()))],
        "anomaly_store": [("memory", MemoryAnomalyStore), ("fs", lambda: FsAnomalyStore(new_dir()))],
        "model_registry": [("memory", MemoryModelRegistry), ("fs", lambda: FsModelRegistry(new_dir()))],
        "data_retrieval": [("synthetic", _synthetic), ("file_replay", _file_replay(new_dir))],
        "metrics": [("memory", MemoryMetrics)],
        "settings": [("file_env", _settings(new_dir))],
        "data_processor": [("core", CoreDataProcessor)],
        "data_loader": [
            ("memory", lambda: _loader(MemoryWarehouse())),
            ("fs", lambda: _loader(FsWarehouse(new_dir()))),
        ],
        "web": [("http", HttpWeb)],
    }


def _loader(warehouse):
    return WarehouseDataLoader(warehouse, DEFAULT_VESSEL_CLASSES), warehouse
