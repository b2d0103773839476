"""Concrete implementations of the ports, interchangeable behind them."""

from seawatch.adapters.broker import InMemoryQueue, MemoryBrokerConsumer, MemoryBrokerProducer
from seawatch.adapters.cache import MemoryCache
from seawatch.adapters.clock import ManualClock, SystemClock
from seawatch.adapters.metrics import MemoryMetrics
from seawatch.adapters.pipeline import CoreDataProcessor, SpeedStatsDetector, WarehouseDataLoader
from seawatch.adapters.registry import FsModelRegistry, MemoryModelRegistry
from seawatch.adapters.retrieval import FileReplayRetrieval, SyntheticRetrieval
from seawatch.adapters.settings import ADAPTER_KINDS, FileEnvSettings
from seawatch.adapters.storage import FsStorage, MemoryStorage
from seawatch.adapters.stores import FsAnomalyStore, FsWarehouse, MemoryAnomalyStore, MemoryWarehouse
from seawatch.adapters.web import HttpWeb

__all__ = [
    "ADAPTER_KINDS",
    "CoreDataProcessor",
    "FileEnvSettings",
    "FileReplayRetrieval",
    "FsAnomalyStore",
    "FsModelRegistry",
    "FsStorage",
    "FsWarehouse",
    "HttpWeb",
    "InMemoryQueue",
    "ManualClock",
    "MemoryAnomalyStore",
    "MemoryBrokerConsumer",
    "MemoryBrokerProducer",
    "MemoryCache",
    "MemoryMetrics",
    "MemoryModelRegistry",
    "MemoryStorage",
    "MemoryWarehouse",
    "SpeedStatsDetector",
    "SyntheticRetrieval",
    "SystemClock",
]
