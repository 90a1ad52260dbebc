"""Density and dominance of list distances over a finite toy universe.

A distance is given as a mapping (or callable) from :class:`StringList` to
bits.  ``None`` and ``inf`` mean "no finite value": such lists add nothing to
a density sum and impose nothing on dominance.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from ..core import StringList, all_bitstrings, canonicalize, elias_gamma, encode_bit_list
from .oracle import DEFAULT_L, DEFAULT_S, bounded_emax

Distance = Union[Mapping, Callable[[StringList], Optional[float]]]


def _value(D: Distance, X: StringList) -> Optional[float]:
    v = D(X) if callable(D) else D.get(X)
    if v is None or math.isinf(v):
        return None
    return float(v)


def toy_universe(max_m: int = 3, max_len: int = 5) -> list[StringList]:
    """All lists of 1..max_m elements over bit strings of length <= max_len."""
    strings = all_bitstrings(max_len)
    out = []
    for m in range(1, max_m + 1):
        for combo in itertools.combinations_with_replacement(strings, m):
            out.append(canonicalize(combo))
    return out


@dataclass
class DensityReport:
    anchor: str
    sum: float
    passed: bool
    counted: int
    skipped: int  # lists without the anchor
    unresolved: int  # lists containing the anchor with no finite value


def density_check(D: Distance, x: str, universe: Iterable[StringList]) -> DensityReport:
    total = 0.0
    counted = skipped = unresolved = 0
    for X in universe:
        if x not in X.elements:
            skipped += 1
            continue
        v = _value(D, X)
        if v is None:
            unresolved += 1
            continue
        if v > 0:
            total += 2.0 ** -v
            counted += 1
    return DensityReport(x, total, total <= 1.0, counted, skipped, unresolved)


def density_all(D: Distance, universe: Sequence[StringList]) -> list[DensityReport]:
    """density_check at every anchor occurring in the universe, in one pass."""
    sums: dict = {}
    counted: dict = {}
    unresolved: dict = {}
    containing: dict = {}
    for X in universe:
        v = _value(D, X)
        for x in set(X.elements):
            containing[x] = containing.get(x, 0) + 1
            if v is None:
                unresolved[x] = unresolved.get(x, 0) + 1
            elif v > 0:
                sums[x] = sums.get(x, 0.0) + 2.0 ** -v
                counted[x] = counted.get(x, 0) + 1
    n = len(universe)
    out = []
    for x in sorted(containing, key=lambda s: (len(s), s)):
        t = sums.get(x, 0.0)
        out.append(DensityReport(x, t, t <= 1.0, counted.get(x, 0), n - containing[x], unresolved.get(x, 0)))
    return out


@dataclass
class DominanceReport:
    c: Optional[int]
    passed: bool
    admissible: bool
    checked: int = 0
    unresolved: int = 0
    failures: list = field(default_factory=list)  # anchors where density fails


def emax_table(universe: Sequence[StringList], L: int = DEFAULT_L, S: int = DEFAULT_S) -> dict:
    return {X: bounded_emax(X, L, S) for X in universe}


def dominance_check(D: Distance, universe: Sequence[StringList], emax: Mapping,
                    c_bound: int = 64) -> DominanceReport:
    """Smallest c >= 0 with E_max(X) <= D(X) + c over the resolved part of the universe.

    ``emax`` maps each list to its bounded-exact E_max (``None`` when absent).
    Distances failing the density condition at some anchor are rejected
    without a search.
    """
    failures = [r.anchor for r in density_all(D, universe) if not r.passed]
    if failures:
        return DominanceReport(None, False, False, failures=failures)
    c = 0
    checked = unresolved = 0
    for X in universe:
        e = emax.get(X)
        if e is None:
            unresolved += 1
            continue
        checked += 1
        d = _value(D, X)
        if d is not None:
            c = max(c, math.ceil(e - d))
    return DominanceReport(c, c <= c_bound, True, checked, unresolved)


# ---------------------------------------------------------------------------
# candidate distances


def literal_length(X: StringList) -> float:
    """Bits of a self-delimiting literal description: gamma(m) then the bit-list encoding."""
    return float(len(elias_gamma(X.m)) + len(encode_bit_list(X)))


def _spread(X: StringList) -> int:
    # largest pairwise Hamming distance, counting a length difference as mismatches
    best = 0
    for a, b in itertools.combinations(X.elements, 2):
        n = max(len(a), len(b))
        d = sum(1 for i in range(n) if i >= len(a) or i >= len(b) or a[i] != b[i])
        best = max(best, d)
    return best


def hamming_distance(offset: float) -> Callable[[StringList], float]:
    def D(X: StringList) -> float:
        return 2.0 * _spread(X) + 2.0 * X.m + offset
    return D


def admissible_offset(D0: Callable[[StringList], float], universe: Sequence[StringList]) -> int:
    """Smallest integer o >= 0 with ``D0 + o`` passing density at every anchor.

    ``D0`` must be positive wherever finite; adding o scales every density sum
    by 2^-o.
    """
    worst = max(r.sum for r in density_all(D0, universe))
    return max(0, math.ceil(math.log2(worst))) if worst > 0 else 0
