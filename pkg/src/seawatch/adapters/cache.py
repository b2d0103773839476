from __future__ import annotations

import threading
from typing import Any

from seawatch.adapters.clock import SystemClock
from seawatch.ports import Cache, Clock


class MemoryCache(Cache):
    def __init__(self, clock: Clock | None = None) -> None:
        self.clock = clock or SystemClock()
        self._entries: dict[str, tuple[Any, int]] = {}
        self._lock = threading.Lock()

    def set(self, key: str, value: Any, ttl_ms: int) -> None:
        if ttl_ms <= 0:
            raise ValueError("ttl_ms must be positive")
        with self._lock:
            self._entries[key] = (value, self.clock.now_ms() + ttl_ms)

    def get(self, key: str) -> Any | None:
        with self._lock:
            entry = self._entries.get(key)
            if entry is None:
                return None
            value, expires_at = entry
            if self.clock.now_ms() >= expires_at:
                del self._entries[key]
                return None
            return value
