"""Adapter for compressors run as child processes.

Protocol: raw bytes on stdin, compressed bytes on stdout, exit status 0.  The
command is an argv vector; nothing goes through a shell.
"""
from __future__ import annotations

import subprocess
from typing import Sequence


class CompressorError(RuntimeError):
    pass


def run_external(data: bytes, argv: Sequence[str], timeout: float = 60.0) -> bytes:
    argv = list(argv)
    if not argv:
        raise CompressorError("spawn failed: empty command")
    try:
        proc = subprocess.run(argv, input=data, capture_output=True, timeout=timeout, check=False)
    except (FileNotFoundError, PermissionError, NotADirectoryError) as exc:
        raise CompressorError(f"spawn failed: {argv[0]}: {exc}") from exc
    except subprocess.TimeoutExpired:
        raise CompressorError(f"timeout after {timeout}s: {' '.join(argv)}") from None
    if proc.returncode != 0:
        err = proc.stderr.decode("utf-8", "replace").strip()
        raise CompressorError(f"{' '.join(argv)} exited with status {proc.returncode}: {err}")
    if data and not proc.stdout:
        raise CompressorError(f"{' '.join(argv)} produced no output for nonempty input")
    return proc.stdout
