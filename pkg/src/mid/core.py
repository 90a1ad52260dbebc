"""Strings, lists of strings and their self-delimiting serialization.

A list is a finite bag of strings kept in length-increasing lexicographic
order (shorter first, ties by unsigned byte value).  Lists are serialized by
prefixing every element with a prefix-free length header; no separators are
needed, so the stream parses uniquely.

Byte lists (:func:`encode_list`) use a byte-aligned header: one byte ``k``
holding the number of bytes needed for the length, then the length itself in
``k`` big-endian bytes (``k = 0`` for the empty string).  The same header,
applied to the element count, opens the encoding so it is self-delimiting as a
whole.  Keeping elements on
byte boundaries matters: byte-oriented compressors cannot find repeats that
sit at different bit offsets.  Bit lists (:func:`encode_bit_list`) prefix each
element with the Elias gamma code of ``len(element) + 1``; the toy machine in
:mod:`mid.toylab` emits exactly this form.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

Element = Union[bytes, str]

MODES = ("unconditional", "conditional-via-SOI", "conditional-direct", "exact-bounded")


class ListEncodingError(ValueError):
    pass


def canonical_key(s: Element):
    return (len(s), s)


@dataclass(frozen=True)
class StringList:
    """Canonically ordered, nonempty bag of strings."""

    elements: tuple

    def __post_init__(self):
        if not self.elements:
            raise ValueError("empty list")
        keys = [canonical_key(e) for e in self.elements]
        if any(a > b for a, b in zip(keys, keys[1:])):
            raise ValueError("elements are not in canonical order; use canonicalize()")

    @property
    def m(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def without(self, i: int) -> tuple:
        """Elements with the i-th one deleted (order kept)."""
        return self.elements[:i] + self.elements[i + 1:]

    def all_equal(self) -> bool:
        return all(e == self.elements[0] for e in self.elements)

    def __add__(self, other: "StringList") -> "StringList":
        # list concatenation XY: merge, then restore canonical order
        return canonicalize(self.elements + tuple(other.elements))


def canonicalize(items: Iterable[Element]) -> StringList:
    items = list(items)
    if not items:
        raise ValueError("empty list")
    kinds = {type(x) for x in items}
    if len(kinds) > 1:
        raise TypeError("cannot mix bytes and bit strings in one list")
    if kinds == {bytearray}:
        items = [bytes(x) for x in items]
    return StringList(tuple(sorted(items, key=canonical_key)))


@dataclass(frozen=True)
class ComplexityEstimate:
    bits: float
    source: str
    mode: str = "unconditional"

    def __post_init__(self):
        if self.bits < 0:
            raise ValueError(f"negative complexity estimate: {self.bits}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")

    def __float__(self) -> float:
        return float(self.bits)


# ---------------------------------------------------------------------------
# Elias gamma


def elias_gamma(n: int) -> str:
    """Elias gamma code of n >= 1 as a '0'/'1' string.

    >>> [elias_gamma(n) for n in (1, 2, 3, 4, 9)]
    ['1', '010', '011', '00100', '0001001']
    """
    if n < 1:
        raise ValueError("gamma code is defined for n >= 1")
    b = bin(n)[2:]
    return "0" * (len(b) - 1) + b


def read_elias_gamma(bits: str, pos: int) -> tuple[int, int]:
    """Decode one gamma codeword starting at ``pos``; returns (value, new_pos)."""
    zeros = 0
    n = len(bits)
    while pos + zeros < n and bits[pos + zeros] == "0":
        zeros += 1
    end = pos + 2 * zeros + 1
    if end > n:
        raise ListEncodingError("malformed list encoding: truncated header")
    return int(bits[pos + zeros:end], 2), end


def gamma_length(n: int) -> int:
    return 2 * (n.bit_length() - 1) + 1


# ---------------------------------------------------------------------------
# byte lists


def length_header(n: int) -> bytes:
    """Byte-aligned length-then-value code: one byte k, then n in k big-endian bytes.

    >>> length_header(0), length_header(5), length_header(300)
    (b'\\x00', b'\\x01\\x05', b'\\x02\\x01,')
    """
    k = (n.bit_length() + 7) // 8
    return bytes([k]) + n.to_bytes(k, "big")


def encode_list(X: StringList) -> bytes:
    parts = [length_header(len(X))]
    for x in X:
        if not isinstance(x, bytes):
            raise TypeError("encode_list expects byte-string elements")
        parts.append(length_header(len(x)))
        parts.append(x)
    return b"".join(parts)


def _read_header(b: bytes, pos: int) -> tuple[int, int]:
    if pos >= len(b):
        raise ListEncodingError("malformed list encoding: truncated header")
    k = b[pos]
    if k > 8 or pos + 1 + k > len(b):
        raise ListEncodingError("malformed list encoding: bad length header")
    raw = b[pos + 1:pos + 1 + k]
    if raw[:1] == b"\x00":
        raise ListEncodingError("malformed list encoding: non-minimal length header")
    return int.from_bytes(raw, "big"), pos + 1 + k


def decode_list(b: bytes) -> StringList:
    b = bytes(b)
    if not b:
        raise ListEncodingError("malformed list encoding: empty input")
    m, pos = _read_header(b, 0)
    if m == 0:
        raise ListEncodingError("malformed list encoding: zero elements")
    out = []
    for _ in range(m):
        length, pos = _read_header(b, pos)
        if pos + length > len(b):
            raise ListEncodingError("malformed list encoding: truncated element")
        out.append(b[pos:pos + length])
        pos += length
    if pos != len(b):
        raise ListEncodingError(f"trailing bytes: {len(b) - pos} after list encoding")
    try:
        return StringList(tuple(out))
    except ValueError:
        raise ListEncodingError("malformed list encoding: elements not in canonical order") from None


# ---------------------------------------------------------------------------
# bit lists (toy machine alphabet)


def encode_bit_list(X: Union[StringList, Sequence[str]]) -> str:
    elems = X.elements if isinstance(X, StringList) else tuple(X)
    return "".join(elias_gamma(len(x) + 1) + x for x in elems)


def decode_bit_list(bits: str) -> tuple:
    pos = 0
    out = []
    while pos < len(bits):
        length, pos = read_elias_gamma(bits, pos)
        end = pos + length - 1
        if end > len(bits):
            raise ListEncodingError("malformed list encoding: truncated element")
        out.append(bits[pos:end])
        pos = end
    return tuple(out)


def all_bitstrings(max_len: int) -> list[str]:
    """Every bit string of length <= max_len in length-increasing lexicographic order."""
    out = [""]
    for k in range(1, max_len + 1):
        out.extend(format(i, f"0{k}b") for i in range(2 ** k))
    return out
