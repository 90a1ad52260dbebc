"""Compressed length as a computable stand-in for Kolmogorov complexity.

All sizes are in bits (8 x compressed bytes).  Conditional sizes use the
symmetry-of-information difference ``C(condition | BOUNDARY | target) -
C(condition)``, clamped at zero.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..core import ComplexityEstimate, StringList, canonicalize, encode_list
from . import lzh
from .cache import SizeCache, digest
from .external import CompressorError, run_external

BOUNDARY = b"\x1eMID\x1e"

KINDS = ("built-in", "external-process")


@dataclass(frozen=True)
class CompressorProfile:
    id: str
    deterministic: bool = True
    overhead_bits: float = 0.0
    kind: str = "built-in"
    argv: tuple = ()
    timeout: float = 60.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown compressor kind {self.kind!r}")
        if self.kind == "external-process" and not self.argv:
            raise ValueError("external compressor needs an argv vector")


BUILTIN = CompressorProfile(id="lzh77-v2", overhead_bits=8.0)

PRESETS = {
    "xz": ("xz", "-9", "-c", "-q", "--format=raw"),
    "gzip": ("gzip", "-9", "-c", "-n"),
    "bzip2": ("bzip2", "-9", "-c"),
}


def external_profile(argv: Sequence[str], timeout: float = 60.0) -> CompressorProfile:
    argv = tuple(argv)
    return CompressorProfile(id=" ".join(argv), kind="external-process", argv=argv, timeout=timeout)


def profile_from_spec(spec: str, timeout: float = 60.0) -> CompressorProfile:
    """``builtin``, a preset name (``xz``, ``gzip``, ``bzip2``) or a command line."""
    if spec in ("builtin", "built-in", BUILTIN.id):
        return BUILTIN
    if spec in PRESETS:
        return external_profile(PRESETS[spec], timeout)
    return external_profile(spec.split(), timeout)


def _raw_bits(data: bytes, profile: CompressorProfile) -> int:
    if profile.kind == "built-in":
        return lzh.compressed_bits(data)
    return 8 * len(run_external(data, profile.argv, profile.timeout))


_default_cache = SizeCache()


def compressed_size(b: bytes, c: CompressorProfile = BUILTIN, cache: Optional[SizeCache] = None) -> ComplexityEstimate:
    if not c.deterministic:
        raise CompressorError(f"compressor {c.id} is not marked deterministic")
    cache = _default_cache if cache is None else cache
    key = digest(b)
    bits = cache.get(c.id, key)
    if bits is None:
        bits = float(_raw_bits(b, c))
        cache.put(c.id, key, bits)
    return ComplexityEstimate(bits, c.id, "unconditional")


def conditional_size(target: bytes, condition: bytes, c: CompressorProfile = BUILTIN,
                     cache: Optional[SizeCache] = None) -> ComplexityEstimate:
    joint = compressed_size(condition + BOUNDARY + target, c, cache).bits
    alone = compressed_size(condition, c, cache).bits
    return ComplexityEstimate(max(0.0, joint - alone), c.id, "conditional-via-SOI")


def external_compressed_size(b: bytes, cmd: Sequence[str], timeout: float = 60.0,
                             audit: bool = False) -> ComplexityEstimate:
    profile = external_profile(cmd, timeout)
    bits = 8 * len(run_external(b, profile.argv, timeout))
    if audit:
        again = 8 * len(run_external(b, profile.argv, timeout))
        if again != bits:
            raise CompressorError(f"nondeterministic compressor: {profile.id} gave {bits} then {again} bits")
    return ComplexityEstimate(float(bits), profile.id, "unconditional")


def audit_determinism(b: bytes, c: CompressorProfile, runs: int = 2) -> float:
    """Recompute the size ``runs`` times bypassing the cache; raise if they differ."""
    sizes = {_raw_bits(b, c) for _ in range(runs)}
    if len(sizes) != 1:
        raise CompressorError(f"nondeterministic compressor: {c.id} gave sizes {sorted(sizes)}")
    return float(sizes.pop())


@dataclass
class CompressionSource:
    """Complexity source backed by a compressor; what the estimators consume."""

    profile: CompressorProfile = BUILTIN
    cache: SizeCache = field(default_factory=SizeCache)

    mode = "conditional-via-SOI"

    @property
    def id(self) -> str:
        return self.profile.id

    def size(self, b: bytes) -> float:
        return compressed_size(b, self.profile, self.cache).bits

    def conditional(self, target: bytes, condition: bytes) -> float:
        return conditional_size(target, condition, self.profile, self.cache).bits

    def joint(self, x: bytes, y: bytes) -> float:
        # the two-element list, so a pair costs the same as the list (x, y) does
        return self.list_size(canonicalize([x, y]))

    def list_size(self, X: StringList) -> float:
        return self.size(encode_list(X))

    def list_conditional(self, X: StringList, x: bytes) -> float:
        # K(X|x) = K(X, x) - K(x) and K(X, x) = K(X) when x is in X
        return max(0.0, self.list_size(X) - self.size(x))


def default_source(cache_path: Optional[str] = None, compressor: Optional[str] = None) -> CompressionSource:
    """Source configured from arguments, falling back to MID_CACHE / MID_COMPRESSOR."""
    cache_path = cache_path or os.environ.get("MID_CACHE")
    compressor = compressor or os.environ.get("MID_COMPRESSOR") or "builtin"
    return CompressionSource(profile_from_spec(compressor), SizeCache(cache_path))


__all__ = [
    "BOUNDARY", "BUILTIN", "PRESETS", "CompressorProfile", "CompressorError", "CompressionSource",
    "SizeCache", "audit_determinism", "compressed_size", "conditional_size", "default_source",
    "external_compressed_size", "external_profile", "profile_from_spec",
]
