"""The settings document every composition root is built from."""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from seawatch.core import DetectionConfig, VesselClass

DEFAULTS: dict[str, dict[str, Any]] = {
    "runtime": {"workdir": "."},
    "storage": {"kind": "fs", "root": "lake"},
    "broker": {"kind": "memory", "visibility_timeout_ms": 5000},
    "cache": {"kind": "memory", "enabled": True, "ttl_ms": 30000},
    "warehouse": {"kind": "fs", "root": "warehouse"},
    "anomaly_store": {"kind": "fs", "root": "anomaly_store"},
    "model_registry": {"kind": "fs", "root": "registry", "name": "speed_stats"},
    "metrics": {"kind": "memory"},
    "data_retrieval": {
        "kind": "synthetic",
        "scenario": None,
        "path": None,
        "batch_size": 1000,
    },
    "web": {"kind": "http", "listen": "127.0.0.1:8080"},
    "detection": {
        "gap_threshold_s": 21600,
        "jump_speed_knots": 100.0,
        "zscore_k": 3.0,
        "sigma_floor_knots": 1e-9,
        "min_points_per_vessel": 10,
        "merge_adjacency_s": 120,
    },
    "model": {"default_mu_knots": 12.0, "default_sigma_knots": 6.0},
    "vessel_classes": {"cargo": 25.0, "tanker": 20.0, "fishing": 15.0, "passenger": 30.0},
    "detector": {"poll_ms": 200},
}

# Ports whose adapter is chosen by a "kind" entry in their section.
KIND_SECTIONS = (
    "storage",
    "broker",
    "cache",
    "warehouse",
    "anomaly_store",
    "model_registry",
    "metrics",
    "data_retrieval",
    "web",
)


def merge(base: Mapping[str, Any], override: Mapping[str, Any]) -> dict[str, Any]:
    out = copy.deepcopy(dict(base))
    for key, value in override.items():
        if isinstance(value, Mapping) and isinstance(out.get(key), Mapping):
            out[key] = merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


@dataclass(frozen=True)
class Settings:
    data: dict[str, Any] = field(default_factory=lambda: copy.deepcopy(DEFAULTS))
    # Relative workdirs resolve against this (the config file's directory).
    base_dir: Path = field(default_factory=Path.cwd)

    def section(self, name: str) -> dict[str, Any]:
        return self.data.get(name, {})

    def get(self, section: str, key: str, default: Any = None) -> Any:
        return self.section(section).get(key, default)

    def kind(self, section: str) -> str:
        return self.get(section, "kind")

    @property
    def workdir(self) -> Path:
        return (self.base_dir / self.get("runtime", "workdir", ".")).resolve()

    def path(self, section: str, key: str = "root") -> Path:
        return self.workdir / self.get(section, key)

    def with_overrides(self, override: Mapping[str, Any]) -> Settings:
        return Settings(merge(self.data, override), self.base_dir)

    def detection_config(self) -> DetectionConfig:
        return DetectionConfig(**self.section("detection"))

    def vessel_classes(self) -> tuple[VesselClass, ...]:
        return tuple(VesselClass(n, float(v)) for n, v in self.section("vessel_classes").items())

    def fallback_speed_stats(self) -> tuple[float, float]:
        m = self.section("model")
        return float(m["default_mu_knots"]), float(m["default_sigma_knots"])
