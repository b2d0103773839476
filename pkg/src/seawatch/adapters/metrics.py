"""Counters and gauges rendered in a Prometheus-like text exposition."""

from __future__ import annotations

import math
import re
import threading
from typing import Mapping

from seawatch.ports import InvalidMetric, Metrics

_NAME = re.compile(r"[a-z_][a-z0-9_]*")

LabelKey = tuple[tuple[str, str], ...]


def _labels(labels: Mapping[str, str] | None) -> LabelKey:
    items = tuple(sorted((labels or {}).items()))
    for name, _ in items:
        if not _NAME.fullmatch(name):
            raise InvalidMetric(f"invalid label name: {name!r}")
    return tuple((k, str(v)) for k, v in items)


def _format_value(v: float) -> str:
    if math.isfinite(v) and v == int(v):
        return str(int(v))
    return repr(float(v))


def _escape(v: str) -> str:
    return v.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


class MemoryMetrics(Metrics):
    def __init__(self) -> None:
        self._series: dict[str, dict[LabelKey, float]] = {}
        self._types: dict[str, str] = {}
        self._lock = threading.Lock()

    def _check(self, name: str, kind: str) -> None:
        if not isinstance(name, str) or not _NAME.fullmatch(name):
            raise InvalidMetric(f"invalid metric name: {name!r}")
        if self._types.setdefault(name, kind) != kind:
            raise InvalidMetric(f"{name} is already a {self._types[name]}")

    def inc(self, name: str, labels: Mapping[str, str] | None = None, delta: float = 1) -> None:
        if not delta >= 0:
            raise InvalidMetric(f"counter {name} cannot change by {delta!r}")
        key = _labels(labels)
        with self._lock:
            self._check(name, "counter")
            series = self._series.setdefault(name, {})
            series[key] = series.get(key, 0) + delta

    def observe(self, name: str, labels: Mapping[str, str] | None, value: float) -> None:
        key = _labels(labels)
        with self._lock:
            self._check(name, "gauge")
            self._series.setdefault(name, {})[key] = float(value)

    def value(self, name: str, labels: Mapping[str, str] | None = None) -> float:
        with self._lock:
            return self._series.get(name, {}).get(_labels(labels), 0)

    def render(self) -> str:
        lines = []
        with self._lock:
            for name in sorted(self._series):
                for key in sorted(self._series[name]):
                    label_text = ",".join(f'{k}="{_escape(v)}"' for k, v in key)
                    series = f"{name}{{{label_text}}}" if key else name
                    lines.append(f"{series} {_format_value(self._series[name][key])}\n")
        return "".join(lines)
