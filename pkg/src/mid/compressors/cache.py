"""Compressed-size cache keyed by (compressor id, SHA-256 of the input).

The optional backing file holds one record per line::

    <sha256 hex digest> TAB <compressor id> TAB <bits>

Records are appended with a single ``write`` on an ``O_APPEND`` descriptor, so
concurrent writers never interleave partial lines.  A torn final line left by a
crash is ignored on load.
"""
from __future__ import annotations

import hashlib
import os
import threading
from pathlib import Path
from typing import Optional


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class SizeCache:
    def __init__(self, path: Optional[str | os.PathLike] = None):
        self.path = Path(path) if path is not None else None
        self._sizes: dict[tuple[str, str], float] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self):
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                if not line.endswith("\n"):
                    continue
                parts = line.rstrip("\n").split("\t")
                if len(parts) != 3:
                    continue
                hexdigest, cid, bits = parts
                try:
                    self._sizes[(cid, hexdigest)] = float(bits)
                except ValueError:
                    continue

    def __len__(self):
        return len(self._sizes)

    def get(self, compressor_id: str, hexdigest: str) -> Optional[float]:
        with self._lock:
            v = self._sizes.get((compressor_id, hexdigest))
            if v is None:
                self.misses += 1
            else:
                self.hits += 1
            return v

    def put(self, compressor_id: str, hexdigest: str, bits: float) -> None:
        if "\t" in compressor_id or "\n" in compressor_id:
            raise ValueError("compressor id may not contain tabs or newlines")
        with self._lock:
            if (compressor_id, hexdigest) in self._sizes:
                return
            self._sizes[(compressor_id, hexdigest)] = bits
            if self.path is not None:
                line = f"{hexdigest}\t{compressor_id}\t{bits:g}\n".encode("utf-8")
                fd = os.open(self.path, os.O_WRONLY | os.O_APPEND | os.O_CREAT, 0o644)
                try:
                    os.write(fd, line)
                finally:
                    os.close(fd)
