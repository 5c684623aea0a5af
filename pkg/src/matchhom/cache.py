"""Content-addressed on-disk cache for homology results.

Keys combine the complex digest, degree, ring, operation and a format
version; payloads are canonical JSON, so a warm cache reproduces the cold
run byte for byte.  The cache directory comes from the MATCHHOM_CACHE
environment variable (the CLI also takes --cache-dir); the library runs
purely in memory when no directory is configured.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

CACHE_VERSION = 1
CACHE_ENV_VAR = "MATCHHOM_CACHE"


class ResultCache:
    def __init__(self, directory: str | os.PathLike):
        self.root = Path(directory)
        self.root.mkdir(parents=True, exist_ok=True)

    @classmethod
    def from_env(cls) -> "ResultCache | None":
        directory = os.environ.get(CACHE_ENV_VAR)
        return cls(directory) if directory else None

    def _path(self, key_parts: tuple) -> Path:
        digest = hashlib.sha256(
            json.dumps([CACHE_VERSION, *map(str, key_parts)]).encode()
        ).hexdigest()
        return self.root / f"{digest}.json"

    def get(self, key_parts: tuple) -> dict | None:
        path = self._path(key_parts)
        if not path.exists():
            return None
        try:
            with open(path) as f:
                return json.load(f)
        except (OSError, ValueError):
            return None

    def put(self, key_parts: tuple, payload: dict) -> None:
        path = self._path(key_parts)
        tmp = path.with_suffix(".tmp")
        with open(tmp, "w") as f:
            json.dump(payload, f, sort_keys=True)
        os.replace(tmp, path)  # atomic per key; serializes writers

    # -- homology-specific helpers -------------------------------------

    def get_group(self, key_parts: tuple):
        from .homology import GroupDescriptor

        data = self.get(("group",) + key_parts)
        if data is None:
            return None
        return GroupDescriptor(data["free_rank"], tuple(data["torsion"]))

    def put_group(self, key_parts: tuple, group, wall_ms: float) -> None:
        self.put(("group",) + key_parts, {
            "free_rank": group.free_rank,
            "torsion": list(group.torsion),
            "wall_ms": round(wall_ms, 3),
        })
