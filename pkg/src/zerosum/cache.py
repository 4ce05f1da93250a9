"""Append-only JSON-lines store of solver-computed constants.

Each line is one result keyed by ``(kind, group descriptor, L)``; on reload
the last line for a key wins.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path

ENV_VAR = "ZS_CACHE"


def _key(kind: str, descriptor: str, L: int | None) -> tuple:
    return (kind, descriptor, L)


class ResultCache:
    def __init__(self, path: str | os.PathLike | None):
        self.path = Path(path) if path else None
        self._lock = threading.Lock()
        self._entries: dict[tuple, dict] = {}
        if self.path and self.path.exists():
            with self.path.open() as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    entry = json.loads(line)
                    self._entries[_key(entry["kind"], entry["group"], entry.get("L"))] = entry

    @classmethod
    def from_env(cls, path=None) -> ResultCache:
        return cls(path or os.environ.get(ENV_VAR))

    def get(self, kind: str, descriptor: str, L: int | None = None) -> dict | None:
        return self._entries.get(_key(kind, descriptor, L))

    def put(self, kind: str, descriptor: str, L: int | None, value: int, **extra) -> dict:
        entry = {"kind": kind, "group": descriptor, "L": L, "value": int(value), **extra}
        with self._lock:
            self._entries[_key(kind, descriptor, L)] = entry
            if self.path:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with self.path.open("a") as fh:
                    fh.write(json.dumps(entry, sort_keys=True) + "\n")
        return entry

    def entries(self) -> list[dict]:
        return [self._entries[k] for k in sorted(self._entries, key=lambda k: (k[0], k[1], k[2] or 0))]

    def __len__(self):
        return len(self._entries)
