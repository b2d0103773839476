"""Composition root: the only place adapters are constructed.

Every service takes a :class:`Components` and reaches its dependencies
through the port-typed attributes; each attribute is built on first use
from the settings, so a service only instantiates the adapters it needs.
"""

from __future__ import annotations

import os
from functools import cached_property
from typing import Callable, Mapping

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
    MemoryAnomalyStore,
    MemoryBrokerConsumer,
    MemoryBrokerProducer,
    MemoryCache,
    MemoryMetrics,
    MemoryModelRegistry,
    MemoryStorage,
    MemoryWarehouse,
    SpeedStatsDetector,
    SyntheticRetrieval,
    SystemClock,
    WarehouseDataLoader,
)
from seawatch.core import SpeedStatsModel
from seawatch.ports import (
    AnomalyStore,
    BrokerConsumer,
    BrokerProducer,
    Cache,
    Clock,
    ConfigError,
    DataLoader,
    DataProcessor,
    DataRetrieval,
    Metrics,
    Model,
    ModelRegistry,
    Settings,
    Storage,
    Warehouse,
    Web,
)


def load_settings(config_path: str | None, env: Mapping[str, str] | None = None) -> Settings:
    return FileEnvSettings().load(config_path, os.environ if env is None else env)


class Components:
    def __init__(self, settings: Settings, clock: Clock | None = None) -> None:
        self.settings = settings
        self.clock = clock or SystemClock()

    @cached_property
    def storage(self) -> Storage:
        if self.settings.kind("storage") == "memory":
            return MemoryStorage()
        return FsStorage(self.settings.path("storage"))

    @cached_property
    def _queue(self) -> InMemoryQueue:
        return InMemoryQueue(int(self.settings.get("broker", "visibility_timeout_ms")), self.clock)

    @cached_property
    def producer(self) -> BrokerProducer:
        return MemoryBrokerProducer(self._queue)

    @cached_property
    def consumer(self) -> BrokerConsumer:
        return MemoryBrokerConsumer(self._queue)

    @cached_property
    def cache(self) -> Cache | None:
        if not self.settings.get("cache", "enabled", True):
            return None
        return MemoryCache(self.clock)

    @cached_property
    def warehouse(self) -> Warehouse:
        if self.settings.kind("warehouse") == "memory":
            return MemoryWarehouse()
        return FsWarehouse(self.settings.path("warehouse"))

    @cached_property
    def anomaly_store(self) -> AnomalyStore:
        if self.settings.kind("anomaly_store") == "memory":
            return MemoryAnomalyStore()
        return FsAnomalyStore(self.settings.path("anomaly_store"))

    @cached_property
    def registry(self) -> ModelRegistry:
        if self.settings.kind("model_registry") == "memory":
            return MemoryModelRegistry()
        return FsModelRegistry(self.settings.path("model_registry"))

    @cached_property
    def metrics(self) -> Metrics:
        return MemoryMetrics()

    @cached_property
    def retrieval(self) -> DataRetrieval:
        section = self.settings.section("data_retrieval")
        batch_size = int(section.get("batch_size", 1000))
        if section["kind"] == "file_replay":
            if not section.get("path"):
                raise ConfigError("data_retrieval.path is required for file_replay")
            return FileReplayRetrieval(self.settings.base_dir / section["path"], batch_size)
        if section.get("scenario"):
            try:
                scenario = simgen.Scenario.load(self.settings.base_dir / section["scenario"])
            except (OSError, ValueError) as exc:
                raise ConfigError(f"data_retrieval.scenario: {exc}") from None
        else:
            scenario = simgen.default_scenario()
        return SyntheticRetrieval(scenario, batch_size, self.settings.vessel_classes())

    @cached_property
    def processor(self) -> DataProcessor:
        return CoreDataProcessor()

    @cached_property
    def loader(self) -> DataLoader:
        return WarehouseDataLoader(self.warehouse, self.settings.vessel_classes())

    @cached_property
    def web(self) -> Web:
        return HttpWeb()

    @property
    def model_factory(self) -> Callable[[SpeedStatsModel], Model]:
        cfg = self.settings.detection_config()
        classes = self.settings.vessel_classes()
        return lambda stats: SpeedStatsDetector(stats, cfg, classes)

    @property
    def model_name(self) -> str:
        return self.settings.get("model_registry", "name", "speed_stats")
