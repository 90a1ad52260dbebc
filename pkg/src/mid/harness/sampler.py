"""Seeded generators of byte strings and lists with controlled redundancy."""
from __future__ import annotations

import random
import struct
from typing import Iterator

from ..core import StringList, canonicalize

KINDS = ("text", "binary", "random")

_LETTERS = "etaoinshrdlucmfwypvbgkjqxz"


def random_bytes(rng: random.Random, n: int) -> bytes:
    return rng.randbytes(n)


def text_bytes(rng: random.Random, n: int, vocab_size: int = 400) -> bytes:
    """Word salad over a seeded Zipf-weighted vocabulary, wrapped into lines."""
    vocab = ["".join(rng.choice(_LETTERS) for _ in range(rng.randint(1, 9))) for _ in range(vocab_size)]
    weights = [1.0 / (k + 1) for k in range(vocab_size)]
    out, line = [], 0
    size = 0
    while size < n:
        w = rng.choices(vocab, weights)[0]
        if line + len(w) > 72:
            out.append("\n")
            line = 0
        elif line:
            out.append(" ")
        out.append(w)
        line += len(w) + 1
        size += len(w) + 1
    return "".join(out).encode()[:n]


def binary_bytes(rng: random.Random, n: int) -> bytes:
    """Records of slowly drifting little-endian integers: structured, fairly compressible."""
    recs = []
    a, b = rng.randrange(1 << 16), rng.randrange(1 << 30)
    while 12 * len(recs) < n:
        a = (a + rng.randint(-3, 3)) & 0xFFFF
        b = (b + rng.randint(0, 1000)) & 0x3FFFFFFF
        recs.append(struct.pack("<HHIi", a, len(recs) & 0xFFFF, b, rng.randint(-50, 50)))
    return b"".join(recs)[:n]


def make_bytes(rng: random.Random, kind: str, n: int) -> bytes:
    if kind == "text":
        return text_bytes(rng, n)
    if kind == "binary":
        return binary_bytes(rng, n)
    if kind == "random":
        return random_bytes(rng, n)
    raise ValueError(f"unknown kind {kind!r}")


def mutate(rng: random.Random, data: bytes, edits: int = 8) -> bytes:
    """A related string: a few point edits, plus maybe a cut or an insertion."""
    b = bytearray(data)
    for _ in range(edits):
        if b:
            b[rng.randrange(len(b))] = rng.randrange(256)
    op = rng.random()
    if op < 0.3 and len(b) > 16:
        i = rng.randrange(len(b) // 2)
        del b[i:i + rng.randint(1, len(b) // 4)]
    elif op < 0.6:
        i = rng.randrange(len(b) + 1)
        b[i:i] = rng.randbytes(rng.randint(1, 64))
    return bytes(b) or b"\x00"


class ListSampler:
    """Endless seeded stream of lists.

    Element sizes are log-uniform in ``[min_size, max_size]`` bytes; with
    probability ``related`` an element is a mutation or a copy of an earlier
    one, so lists carry real shared information.
    """

    def __init__(self, seed: int = 0, m: tuple = (1, 3), min_size: int = 1024, max_size: int = 50 * 1024,
                 related: float = 0.5):
        self.seed = seed
        self.rng = random.Random(seed)
        self.m = m
        self.min_size, self.max_size = min_size, max_size
        self.related = related
        self.pool: list = []

    def element(self) -> bytes:
        rng = self.rng
        if self.pool and rng.random() < self.related:
            base = rng.choice(self.pool)
            return base if rng.random() < 0.3 else mutate(rng, base)
        lo, hi = self.min_size.bit_length(), self.max_size.bit_length()
        n = min(self.max_size, max(self.min_size, int(2 ** rng.uniform(lo - 1, hi - 1))))
        x = make_bytes(rng, rng.choice(KINDS), n)
        self.pool = (self.pool + [x])[-16:]
        return x

    def draw(self) -> StringList:
        m = self.rng.randint(*self.m)
        return canonicalize([self.element() for _ in range(m)])

    def __iter__(self) -> Iterator[StringList]:
        while True:
            yield self.draw()
