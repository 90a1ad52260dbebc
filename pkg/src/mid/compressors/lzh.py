"""Built-in LZ77 compressor with a fixed (table-free) entropy stage.

The format is fixed so that compressed sizes are reproducible anywhere:

* The stream is a bit string written MSB first and zero padded to a whole
  number of bytes.
* ``block_type`` (1 bit): ``0`` stored, ``1`` coded.
* ``gamma(n + 1)``: the uncompressed length ``n`` (Elias gamma).
* stored: the ``n`` raw bytes.
* coded: a sequence of tokens.

A token is ``gamma(r + 1)`` for a run of ``r`` literals, the ``r`` literal
bytes (8 bits each) and, unless the output is complete, a match.  A match of
length ``L >= 4`` is ``gamma(L - 3)``; its distance ``d >= 1`` is the bucket
``k = floor(log2 d)`` in 5 bits followed by the ``k`` low bits of ``d``.
No code tables are transmitted, so the cost of every symbol is known up front
and does not depend on the rest of the input.

Parsing is greedy over a 1 MiB sliding window: every position is indexed by
its exact 4-byte prefix and the longest match among the 16 most recent
occurrences wins (nearest on ties).  A match is only taken when it saves at
least ``MIN_SAVING`` bits over sending the same bytes as literals, see
:func:`min_length`.  Without that rule, chance matches between unrelated
inputs break up better local matches and the size of a concatenation can
exceed the sum of the parts.  The encoder picks whichever block type is
shorter (stored on ties), so output is never larger than the stored form.
The empty input compresses to a single byte.
"""
from __future__ import annotations

from bisect import bisect_left
from functools import lru_cache

import numpy as np

from ..core import elias_gamma, gamma_length, read_elias_gamma

WINDOW = 1 << 20
MIN_MATCH = 4
MAX_CHAIN = 16
DIST_BITS = 5  # bucket field; buckets 0..20 cover the window
MIN_SAVING = 24
MAX_MATCH = 1 << 24


class CorruptStream(ValueError):
    pass


def match_bits(length: int, distance: int) -> int:
    return gamma_length(length - MIN_MATCH + 1) + DIST_BITS + distance.bit_length() - 1


@lru_cache(maxsize=None)
def _min_length_bucket(k: int) -> int:
    d = 1 << k
    n = MIN_MATCH
    # one extra bit: the match splits a literal run, adding a gamma(1) run header
    while 8 * n - match_bits(n, d) - 1 < MIN_SAVING:
        n += 1
    return n


def min_length(distance: int) -> int:
    """Shortest match worth sending at this distance (4, 5, 6 or 7 bytes)."""
    return _min_length_bucket(distance.bit_length() - 1)


def _match_length(data: bytes, a: int, b: int, limit: int) -> int:
    n = MIN_MATCH
    step = 32
    while n < limit:
        k = min(step, limit - n)
        if data[a + n:a + n + k] == data[b + n:b + n + k]:
            n += k
            step <<= 1
            continue
        lo, hi = 0, k
        while hi - lo > 1:
            mid = (lo + hi) >> 1
            if data[a + n:a + n + mid] == data[b + n:b + n + mid]:
                lo = mid
            else:
                hi = mid
        return n + lo
    return n


def parse(data: bytes) -> list[tuple[int, int, int, int]]:
    """Greedy LZ77 parse.

    Returns tokens ``(lit_start, lit_end, length, distance)``: the literal run
    ``data[lit_start:lit_end]`` followed by a match (``length == 0`` means no
    match, only in the final token).
    """
    n = len(data)
    if n < MIN_MATCH:
        return [(0, n, 0, 0)]
    a = np.frombuffer(data, dtype=np.uint8).astype(np.uint32)
    keys = (a[:-3] << 24) | (a[1:-2] << 16) | (a[2:-1] << 8) | a[3:]
    order = np.argsort(keys, kind="stable")
    sk = keys[order]
    same = sk[1:] == sk[:-1]
    prev = np.full(len(keys), -1, dtype=np.int64)
    prev[order[1:][same]] = order[:-1][same]
    pos = np.arange(len(keys))
    cands = np.flatnonzero((prev >= 0) & (pos - prev <= WINDOW)).tolist()
    prev = prev.tolist()

    tokens = []
    i = lit_start = ci = 0
    nc = len(cands)
    while True:
        ci = bisect_left(cands, i, ci)
        if ci == nc:
            break
        j = cands[ci]
        limit = min(n - j, MAX_MATCH)
        best_len = best_d = 0
        c = prev[j]
        chain = 0
        while c >= 0 and j - c <= WINDOW and chain < MAX_CHAIN:
            length = _match_length(data, c, j, limit)
            if length > best_len and length >= min_length(j - c):
                best_len, best_d = length, j - c
                if length == limit:
                    break
            c = prev[c]
            chain += 1
        if not best_len:
            i = j + 1
            continue
        tokens.append((lit_start, j, best_len, best_d))
        i = lit_start = j + best_len
    tokens.append((lit_start, n, 0, 0))
    return tokens


def _tokens(data: bytes):
    tokens = parse(data)
    s, e, _, _ = tokens[-1]
    if s == e:  # output already complete after the last match
        tokens.pop()
    return tokens


def _raw(chunk: bytes) -> str:
    return bin(int.from_bytes(chunk, "big"))[2:].zfill(8 * len(chunk)) if chunk else ""


def _encode(data: bytes, emit: bool):
    """Returns (bit_count, bitstring or None) of the padded stream."""
    n = len(data)
    stored_bits = 1 + gamma_length(n + 1) + 8 * n
    tokens = _tokens(data) if n else []
    if n:
        body = sum(gamma_length(e - s + 1) + 8 * (e - s) + (match_bits(length, d) if length else 0)
                   for s, e, length, d in tokens)
        coded_bits = 1 + gamma_length(n + 1) + body
    else:
        coded_bits = stored_bits + 1
    use_stored = stored_bits <= coded_bits
    total = stored_bits if use_stored else coded_bits
    padded = total + (-total % 8)
    if not emit:
        return padded, None
    if use_stored:
        bits = "0" + elias_gamma(n + 1) + _raw(data)
    else:
        parts = ["1", elias_gamma(n + 1)]
        for s, e, length, d in tokens:
            parts += [elias_gamma(e - s + 1), _raw(data[s:e])]
            if length:
                k = d.bit_length() - 1
                parts += [elias_gamma(length - MIN_MATCH + 1), format(k, f"0{DIST_BITS}b"),
                          format(d - (1 << k), f"0{k}b") if k else ""]
        bits = "".join(parts)
    assert len(bits) == total, (len(bits), total)
    return padded, bits + "0" * (padded - total)


def compress(data: bytes) -> bytes:
    nbits, bits = _encode(bytes(data), emit=True)
    return int(bits, 2).to_bytes(nbits // 8, "big")


def compressed_bits(data: bytes) -> int:
    """Size in bits of ``compress(data)`` without materializing the stream."""
    return _encode(bytes(data), emit=False)[0]


def decompress(blob: bytes) -> bytes:
    if not blob:
        raise CorruptStream("empty stream")
    bits = bin(int.from_bytes(blob, "big"))[2:].zfill(8 * len(blob))
    nbits = len(bits)
    try:
        n, pos = read_elias_gamma(bits, 1)
    except ValueError:
        raise CorruptStream("truncated length header") from None
    n -= 1
    if bits[0] == "0":
        end = pos + 8 * n
        if end > nbits:
            raise CorruptStream("truncated stored block")
        return int(bits[pos:end], 2).to_bytes(n, "big") if n else b""

    out = bytearray()
    try:
        while len(out) < n:
            run, pos = read_elias_gamma(bits, pos)
            run -= 1
            end = pos + 8 * run
            if end > nbits or len(out) + run > n:
                raise CorruptStream("literal run past the end of the stream")
            if run:
                out += int(bits[pos:end], 2).to_bytes(run, "big")
            pos = end
            if len(out) >= n:
                break
            v, pos = read_elias_gamma(bits, pos)
            length = v + MIN_MATCH - 1
            k = int(bits[pos:pos + DIST_BITS], 2)
            pos += DIST_BITS
            if pos + k > nbits:
                raise CorruptStream("truncated distance")
            d = (1 << k) | (int(bits[pos:pos + k], 2) if k else 0)
            pos += k
            if d > len(out):
                raise CorruptStream("match distance before start of stream")
            if len(out) + length > n:
                raise CorruptStream("match past the end of the output")
            start = len(out) - d
            if d >= length:
                out += out[start:start + length]
            else:
                reps, rem = divmod(length, d)
                out += out[start:] * reps + out[start:start + rem]
    except (ValueError, IndexError) as exc:
        if isinstance(exc, CorruptStream):
            raise
        raise CorruptStream(f"malformed stream: {exc}") from None
    if len(out) != n:
        raise CorruptStream("length mismatch")
    return bytes(out)
