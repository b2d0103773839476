"""Versioned model registry: ``models/{name}/{version}/model.json``."""

from __future__ import annotations

import json
import os
import re
import threading
from pathlib import Path
from typing import Any

from seawatch.adapters._fs import atomic_write
from seawatch.core import SpeedStats, SpeedStatsModel
from seawatch.ports import CorruptData, ModelRegistry, NotFound

MODEL_KIND = "per_vessel_speed_stats"
_VERSION = re.compile(r"v(\d{4,})")
_NAME = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_-]*")


def _check_name(name: str) -> str:
    if not isinstance(name, str) or not _NAME.fullmatch(name):
        raise NotFound(f"no model named {name!r}")
    return name


def model_to_doc(name: str, version: str, model: SpeedStatsModel) -> dict[str, Any]:
    return {
        "name": name,
        "version": version,
        "created_at_ms": model.created_at_ms,
        "kind": MODEL_KIND,
        "defaults": {
            "mu_knots": model.defaults.mu_knots,
            "sigma_knots": model.defaults.sigma_knots,
            "n_points": model.defaults.n_points,
        },
        "per_vessel": {
            mmsi: {"mu_knots": s.mu_knots, "sigma_knots": s.sigma_knots, "n_points": s.n_points}
            for mmsi, s in sorted(model.per_vessel.items())
        },
    }


def model_from_doc(doc: dict[str, Any]) -> SpeedStatsModel:
    if doc.get("kind") != MODEL_KIND:
        raise ValueError(f"unsupported model kind {doc.get('kind')!r}")
    d = doc["defaults"]
    return SpeedStatsModel(
        defaults=SpeedStats(float(d["mu_knots"]), float(d["sigma_knots"]), int(d.get("n_points", 0))),
        per_vessel={
            mmsi: SpeedStats(float(s["mu_knots"]), float(s["sigma_knots"]), int(s["n_points"]))
            for mmsi, s in doc["per_vessel"].items()
        },
        version=doc["version"],
        created_at_ms=int(doc["created_at_ms"]),
    )


def _version_number(version: str) -> int | None:
    m = _VERSION.fullmatch(version)
    return int(m.group(1)) if m else None


class MemoryModelRegistry(ModelRegistry):
    def __init__(self) -> None:
        self._docs: dict[str, dict[str, str]] = {}
        self._lock = threading.Lock()

    def save(self, name: str, model: SpeedStatsModel) -> str:
        _check_name(name)
        with self._lock:
            versions = self._docs.setdefault(name, {})
            n = max((_version_number(v) for v in versions), default=0) + 1
            version = f"v{n:04d}"
            # keep serialized form so loads never alias the caller's object
            versions[version] = json.dumps(model_to_doc(name, version, model))
            return version

    def load(self, name: str, version: str) -> SpeedStatsModel:
        with self._lock:
            try:
                text = self._docs[name][version]
            except KeyError:
                raise NotFound(f"no model {name!r} version {version!r}") from None
        return model_from_doc(json.loads(text))

    def load_latest(self, name: str) -> tuple[SpeedStatsModel, str]:
        with self._lock:
            versions = self._docs.get(name)
            if not versions:
                raise NotFound(f"no model named {name!r}")
            latest = max(versions, key=_version_number)
        return self.load(name, latest), latest


class FsModelRegistry(ModelRegistry):
    def __init__(self, root: str | os.PathLike) -> None:
        self.root = Path(root)
        self._lock = threading.Lock()

    def _versions(self, name: str) -> list[str]:
        base = self.root / "models" / _check_name(name)
        if not base.is_dir():
            return []
        found = [
            (n, d.name)
            for d in base.iterdir()
            if (n := _version_number(d.name)) is not None and (d / "model.json").is_file()
        ]
        return [v for _, v in sorted(found)]

    def save(self, name: str, model: SpeedStatsModel) -> str:
        with self._lock:
            versions = self._versions(name)
            n = _version_number(versions[-1]) + 1 if versions else 1
            version = f"v{n:04d}"
            path = self.root / "models" / name / version / "model.json"
            doc = model_to_doc(name, version, model)
            atomic_write(path, (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode())
            return version

    def load(self, name: str, version: str) -> SpeedStatsModel:
        if _version_number(version) is None:
            raise NotFound(f"no model {name!r} version {version!r}")
        path = self.root / "models" / _check_name(name) / version / "model.json"
        try:
            text = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise NotFound(f"no model {name!r} version {version!r}") from None
        try:
            return model_from_doc(json.loads(text))
        except (ValueError, KeyError, TypeError) as exc:
            raise CorruptData(f"{path}: {exc}") from None

    def load_latest(self, name: str) -> tuple[SpeedStatsModel, str]:
        versions = self._versions(name)
        if not versions:
            raise NotFound(f"no model named {name!r}")
        return self.load(name, versions[-1]), versions[-1]
