"""Contracts between the core workflows and external dependencies."""

from seawatch.ports.contracts import (
    PORT_CATALOG,
    AnomalyStore,
    BrokerConsumer,
    BrokerProducer,
    Cache,
    Clock,
    DataLoader,
    DataProcessor,
    DataRetrieval,
    LoadReport,
    Metrics,
    Model,
    ModelRegistry,
    Page,
    ProcessResult,
    Route,
    SettingsProvider,
    Storage,
    Warehouse,
    Web,
    catalog_entries,
)
from seawatch.ports.errors import (
    BadRequest,
    ConfigError,
    CorruptData,
    InvalidCursor,
    InvalidMetric,
    InvalidPath,
    NotFound,
    PortError,
    StartupError,
    UnknownDelivery,
)
from seawatch.ports.messages import DETECTION_REQUESTS_TOPIC, DetectionRequest, MessageEnvelope
from seawatch.ports.settings import DEFAULTS, KIND_SECTIONS, Settings

__all__ = [
    "DEFAULTS",
    "DETECTION_REQUESTS_TOPIC",
    "KIND_SECTIONS",
    "PORT_CATALOG",
    "AnomalyStore",
    "BadRequest",
    "BrokerConsumer",
    "BrokerProducer",
    "Cache",
    "Clock",
    "ConfigError",
    "CorruptData",
    "DataLoader",
    "DataProcessor",
    "DataRetrieval",
    "DetectionRequest",
    "InvalidCursor",
    "InvalidMetric",
    "InvalidPath",
    "LoadReport",
    "MessageEnvelope",
    "Metrics",
    "Model",
    "ModelRegistry",
    "NotFound",
    "Page",
    "PortError",
    "ProcessResult",
    "Route",
    "Settings",
    "SettingsProvider",
    "StartupError",
    "Storage",
    "UnknownDelivery",
    "Warehouse",
    "Web",
    "catalog_entries",
]
