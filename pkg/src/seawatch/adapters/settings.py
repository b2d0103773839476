"""Settings from a JSON file, overridden by ``OG_<SECTION>__<KEY>`` variables."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

from seawatch.ports import DEFAULTS, KIND_SECTIONS, ConfigError, Settings, SettingsProvider
from seawatch.ports.settings import merge

ADAPTER_KINDS: dict[str, frozenset[str]] = {
    "storage": frozenset({"memory", "fs"}),
    "broker": frozenset({"memory"}),
    "cache": frozenset({"memory"}),
    "warehouse": frozenset({"memory", "fs"}),
    "anomaly_store": frozenset({"memory", "fs"}),
    "model_registry": frozenset({"memory", "fs"}),
    "metrics": frozenset({"memory"}),
    "data_retrieval": frozenset({"synthetic", "file_replay"}),
    "web": frozenset({"http"}),
}

ENV_PREFIX = "OG_"


def _coerce(text: str, like: Any) -> Any:
    if isinstance(like, bool):
        lowered = text.strip().lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {text!r}")
    if isinstance(like, int):
        return int(text)
    if isinstance(like, float):
        return float(text)
    if isinstance(like, str) or like is None:
        return text
    return json.loads(text)


def env_overrides(env_map: Mapping[str, str], base: Mapping[str, Any]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for name, text in sorted(env_map.items()):
        if not name.startswith(ENV_PREFIX) or "__" not in name:
            continue
        section, _, key = name[len(ENV_PREFIX) :].partition("__")
        section, key = section.lower(), key.lower()
        if not section or not key:
            continue
        like = base.get(section, {}).get(key) if isinstance(base.get(section), Mapping) else None
        try:
            value = _coerce(text, like)
        except ValueError as exc:
            raise ConfigError(f"bad value for {name}: {exc}") from None
        out.setdefault(section, {})[key] = value
    return out


def validate(data: Mapping[str, Any]) -> None:
    for section in KIND_SECTIONS:
        kind = data.get(section, {}).get("kind")
        if kind not in ADAPTER_KINDS[section]:
            raise ConfigError(f"unknown adapter kind: {section}.kind")
    try:
        Settings(dict(data)).detection_config()
        Settings(dict(data)).vessel_classes()
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid detection settings: {exc}") from None


class FileEnvSettings(SettingsProvider):
    def load(self, config_path: str | None, env_map: Mapping[str, str]) -> Settings:
        data: dict[str, Any] = {}
        base_dir = Path.cwd()
        if config_path is not None:
            path = Path(config_path)
            try:
                text = path.read_text(encoding="utf-8")
            except OSError as exc:
                raise ConfigError(f"cannot read config {path}: {exc}") from None
            try:
                data = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: line {exc.lineno}: {exc.msg}") from None
            if not isinstance(data, dict):
                raise ConfigError(f"{path}: line 1: top level must be an object")
            base_dir = path.resolve().parent
        merged = merge(DEFAULTS, data)
        merged = merge(merged, env_overrides(env_map, merged))
        validate(merged)
        return Settings(merged, base_dir)
