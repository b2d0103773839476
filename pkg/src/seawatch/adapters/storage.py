"""Data-lake storage adapters."""

from __future__ import annotations

import os
import threading
from pathlib import Path

from seawatch.adapters._fs import atomic_write
from seawatch.ports import InvalidPath, NotFound, Storage


def check_path(path: str) -> str:
    if not isinstance(path, str) or not path:
        raise InvalidPath(f"invalid path: {path!r}")
    parts = path.split("/")
    if any(not p or p.startswith(".") or "\\" in p for p in parts):
        raise InvalidPath(f"invalid path: {path!r}")
    return path


def check_prefix(prefix: str) -> str:
    if prefix == "":
        return prefix
    body = prefix[:-1] if prefix.endswith("/") else prefix
    check_path(body)
    return prefix


class MemoryStorage(Storage):
    def __init__(self) -> None:
        self._objects: dict[str, bytes] = {}
        self._lock = threading.Lock()

    def put(self, path: str, data: bytes) -> None:
        check_path(path)
        with self._lock:
            self._objects[path] = bytes(data)

    def get(self, path: str) -> bytes:
        check_path(path)
        with self._lock:
            try:
                return self._objects[path]
            except KeyError:
                raise NotFound(f"no object at {path!r}") from None

    def list(self, prefix: str) -> list[str]:
        check_prefix(prefix)
        with self._lock:
            keys = sorted(k for k in self._objects if k.startswith(prefix))
        if not keys:
            raise NotFound(f"no objects under {prefix!r}")
        return keys

    def exists(self, path: str) -> bool:
        check_path(path)
        with self._lock:
            return path in self._objects


class FsStorage(Storage):
    """Keys map to files under ``root``; writes go through temp file + rename."""

    def __init__(self, root: str | os.PathLike) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _file(self, path: str) -> Path:
        return self.root.joinpath(*check_path(path).split("/"))

    def put(self, path: str, data: bytes) -> None:
        target = self._file(path)
        try:
            atomic_write(target, data)
        except OSError as exc:
            raise OSError(f"storage put failed for {path!r}: {exc}") from exc

    def get(self, path: str) -> bytes:
        target = self._file(path)
        try:
            return target.read_bytes()
        except (FileNotFoundError, IsADirectoryError, NotADirectoryError):
            raise NotFound(f"no object at {path!r}") from None
        except OSError as exc:
            raise OSError(f"storage get failed for {path!r}: {exc}") from exc

    def list(self, prefix: str) -> list[str]:
        check_prefix(prefix)
        keys = []
        for dirpath, dirnames, filenames in os.walk(self.root):
            dirnames[:] = [d for d in dirnames if not d.startswith(".")]
            rel = Path(dirpath).relative_to(self.root).as_posix()
            for name in filenames:
                if name.startswith("."):
                    continue
                key = name if rel == "." else f"{rel}/{name}"
                if key.startswith(prefix):
                    keys.append(key)
        if not keys:
            raise NotFound(f"no objects under {prefix!r}")
        return sorted(keys)

    def exists(self, path: str) -> bool:
        return self._file(path).is_file()
