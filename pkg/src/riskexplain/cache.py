"""On-disk response cache keyed by prompt fingerprint and backend id."""

from __future__ import annotations

import json
import os
import re
import tempfile
import threading
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class CacheEntry:
    prompt_fingerprint: str
    backend_id: str
    text: str
    created_at: str | None


class ResponseCache:
    """One JSON file per (prompt_fingerprint, backend_id).

    Writes go through a temp file and ``os.replace`` under a lock, so readers
    never see partial entries.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def _path(self, prompt_fingerprint: str, backend_id: str) -> Path:
        safe_backend = re.sub(r"[^A-Za-z0-9._-]+", "_", backend_id)
        return self.directory / f"{prompt_fingerprint}--{safe_backend}.json"

    def get(self, prompt_fingerprint: str, backend_id: str) -> CacheEntry | None:
        path = self._path(prompt_fingerprint, backend_id)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (FileNotFoundError, json.JSONDecodeError):
            self.misses += 1
            return None
        if data.get("prompt_fingerprint") != prompt_fingerprint or data.get("backend_id") != backend_id:
            self.misses += 1
            return None
        self.hits += 1
        return CacheEntry(data["prompt_fingerprint"], data["backend_id"], data["text"], data.get("created_at"))

    def put(self, entry: CacheEntry) -> None:
        payload = json.dumps(
            {
                "prompt_fingerprint": entry.prompt_fingerprint,
                "backend_id": entry.backend_id,
                "text": entry.text,
                "created_at": entry.created_at,
            },
            indent=2,
            ensure_ascii=False,
        )
        with self._lock:
            self.directory.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(payload)
            os.replace(tmp, self._path(entry.prompt_fingerprint, entry.backend_id))
