"""Exact bounded complexities C_{L,S}(x|y) and a priori probabilities on the toy machine.

A table holds every halting program of at most ``L`` bits that halts within
``S`` steps.  Programs that never read the condition register produce the same
output under every condition and are tallied once; the rest are rendered per
condition on first use and memoized.  Lookups answer ``None`` when no program
within budget prints the target: an absent value, never zero.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from ..core import StringList, canonicalize, encode_bit_list
from .machine import MACHINE_ID, MAX_PROGRAM_BITS, check_budget, enumerate_templates, render_chunk, uses_condition

DEFAULT_L = 20
DEFAULT_S = 10_000


@lru_cache(maxsize=4)
def _templates(L: int) -> tuple:
    return tuple((len(p), steps, chunks) for p, steps, chunks in enumerate_templates(L))


def _check_bits(s: str, what: str) -> str:
    if not isinstance(s, str) or s.strip("01"):
        raise TypeError(f"{what} must be a '0'/'1' bit string, got {s!r}")
    return s


def _tally(table: dict, out: str, length: int) -> None:
    hit = table.get(out)
    if hit is None:
        table[out] = [length, 2.0 ** -length]
    else:
        if length < hit[0]:
            hit[0] = length
        hit[1] += 2.0 ** -length


class OracleTable:
    """Read-only after construction apart from the per-condition memo."""

    def __init__(self, L: int = DEFAULT_L, S: int = DEFAULT_S, max_bits: int = MAX_PROGRAM_BITS):
        check_budget(L, max_bits)
        if S < 0:
            raise ValueError("step budget must be >= 0")
        self.L, self.S = L, S
        self.machine = MACHINE_ID
        self._free: dict = {}
        self._dep: list = []
        for length, steps, chunks in _templates(L):
            if steps > S:
                continue
            if uses_condition(chunks):
                self._dep.append((length, chunks))
            else:
                _tally(self._free, "".join(c[1] for c in chunks), length)
        self._chunk_kinds = {c for _, chunks in self._dep for c in chunks}
        self._memo: dict = {}

    def _conditioned(self, y: str) -> dict:
        table = self._memo.get(y)
        if table is None:
            table = {}
            rendered = {c: render_chunk(c, y) for c in self._chunk_kinds}
            get = rendered.__getitem__
            for length, chunks in self._dep:
                _tally(table, "".join(map(get, chunks)), length)
            self._memo[y] = table
        return table

    def lookup(self, x: str, y: str = "") -> tuple[Optional[int], float]:
        """(C_{L,S}(x|y) or None, sum of 2^-|p| over programs printing x)."""
        _check_bits(x, "target")
        _check_bits(y, "condition")
        a = self._free.get(x)
        b = self._conditioned(y).get(x)
        lengths = [h[0] for h in (a, b) if h is not None]
        q = sum(h[1] for h in (a, b) if h is not None)
        return (min(lengths) if lengths else None), q

    def complexity(self, x: str, y: str = "") -> Optional[int]:
        return self.lookup(x, y)[0]

    def apriori(self, x: str, y: str = "") -> float:
        return self.lookup(x, y)[1]

    def outputs(self, y: str = "") -> dict:
        """Every output reachable under condition y, mapped to (C, Q)."""
        merged = {k: list(v) for k, v in self._free.items()}
        for out, (length, q) in self._conditioned(y).items():
            if out in merged:
                merged[out][0] = min(merged[out][0], length)
                merged[out][1] += q
            else:
                merged[out] = [length, q]
        return {k: (v[0], v[1]) for k, v in merged.items()}

    def kraft_sum(self, y: str = "") -> float:
        return sum(q for _, q in self.outputs(y).values())

    def to_json(self, conditions: Iterable[str] = ("",)) -> str:
        entries = []
        for y in conditions:
            for out, (c, q) in sorted(self.outputs(y).items(), key=lambda kv: (len(kv[0]), kv[0])):
                entries.append({"target": out, "condition": y, "bits": c, "apriori": q})
        return json.dumps({"schema": "mid.oracle-table/1", "machine": self.machine,
                           "L": self.L, "S": self.S, "entries": entries}, indent=1)


@lru_cache(maxsize=16)
def oracle(L: int = DEFAULT_L, S: int = DEFAULT_S) -> OracleTable:
    return OracleTable(L, S)


def bounded_complexity(x: str, condition: str = "", L: int = DEFAULT_L, S: int = DEFAULT_S) -> Optional[int]:
    return oracle(L, S).complexity(x, condition)


def apriori_probability(x: str, condition: str = "", L: int = DEFAULT_L, S: int = DEFAULT_S) -> float:
    return oracle(L, S).apriori(x, condition)


def coding_check(x: str, L: int = DEFAULT_L, S: int = DEFAULT_S, condition: str = "") -> Optional[float]:
    """C(x) + log2 Q(x); absent when C is absent."""
    c, q = oracle(L, S).lookup(x, condition)
    if c is None:
        return None
    return c + math.log2(q)


def pair_bits(x: str, y: str) -> str:
    return encode_bit_list(canonicalize([x, y]))


@dataclass(frozen=True)
class SoiResidual:
    x: str
    y: str
    xy: float  # C(x,y) - C(x) - C(y|x)
    yx: float  # C(x,y) - C(y) - C(x|y)

    @property
    def worst(self) -> float:
        return max(abs(self.xy), abs(self.yx))


def soi_residual(x: str, y: str, L: int = DEFAULT_L, S: int = DEFAULT_S) -> Optional[SoiResidual]:
    t = oracle(L, S)
    # unconditional terms first: they are cheap and usually decide absence
    terms = []
    for target, cond in ((pair_bits(x, y), ""), (x, ""), (y, ""), (y, x), (x, y)):
        v = t.complexity(target, cond)
        if v is None:
            return None
        terms.append(v)
    joint, cx, cy, cy_x, cx_y = terms
    return SoiResidual(x, y, joint - cx - cy_x, joint - cy - cx_y)


def bounded_emax(X, L: int = DEFAULT_L, S: int = DEFAULT_S) -> Optional[int]:
    """max over x in X of C(X|x), or None if any term is absent."""
    X = X if isinstance(X, StringList) else canonicalize(X)
    t = oracle(L, S)
    target = encode_bit_list(X)
    worst = 0
    for x in set(X):
        v = t.complexity(target, x)
        if v is None:
            return None
        worst = max(worst, v)
    return worst


class OracleSource:
    """The estimator-facing complexity surface backed by an oracle table."""

    mode = "exact-bounded"

    def __init__(self, L: int = DEFAULT_L, S: int = DEFAULT_S):
        self.table = oracle(L, S)

    @property
    def id(self) -> str:
        return f"{MACHINE_ID}/L={self.table.L}/S={self.table.S}"

    def size(self, x: str):
        return self.table.complexity(x)

    def conditional(self, target: str, condition: str):
        return self.table.complexity(target, condition)

    def joint(self, x: str, y: str):
        return self.table.complexity(pair_bits(x, y))

    def list_size(self, X: StringList):
        return self.table.complexity(encode_bit_list(X))

    def list_conditional(self, X: StringList, x: str):
        return self.table.complexity(encode_bit_list(X), x)
