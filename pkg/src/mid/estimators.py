"""Information distances of lists and pairs over a complexity source.

A complexity source is anything with the methods of
:class:`mid.compressors.CompressionSource`: ``size``, ``conditional``,
``joint``, ``list_size`` and ``list_conditional`` plus an ``id``.  The toy
oracle in :mod:`mid.toylab` implements the same surface with exact bounded
complexities and may answer ``None`` (no program within budget), which
surfaces here as :class:`AbsentComplexity`.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

from .core import ComplexityEstimate, StringList, canonicalize

SCHEMES = ("emax", "emin", "sum-bound")
NORM_MAX_SUBLIST = "norm-max-sublist"
NORM_DROP_MAXIMIZER = "norm-drop-maximizer"
NORM_SET_MAX_SUBLIST = "norm-set-max-sublist"
NORM_SET_DROP_MAXIMIZER = "norm-set-drop-maximizer"
NORMALIZED_SCHEMES = (NORM_MAX_SUBLIST, NORM_DROP_MAXIMIZER, NORM_SET_MAX_SUBLIST, NORM_SET_DROP_MAXIMIZER)
PAIR_SCHEMES = ("ncd", "e1", "emax-pair")


class EstimatorError(ValueError):
    pass


class AbsentComplexity(EstimatorError):
    """The source has no finite value for a term (bounded oracle ran out of budget)."""


@dataclass
class DistanceReport:
    value: float
    scheme: str
    numerator_bits: float
    denominator_bits: Optional[float]
    per_element: list = field(default_factory=list)
    source: str = ""
    index: Optional[int] = None  # maximizer / center / denominator choice, scheme dependent

    def to_dict(self) -> dict:
        return asdict(self)


def _need(v):
    if v is None:
        raise AbsentComplexity("complexity source returned no value within budget")
    return v


def _as_list(X) -> StringList:
    return X if isinstance(X, StringList) else canonicalize(X)


def _per_element(X: StringList, src) -> list:
    return [(i, _need(src.list_conditional(X, x))) for i, x in enumerate(X)]


def emax(X, src) -> DistanceReport:
    X = _as_list(X)
    per = _per_element(X, src)
    value = max(v for _, v in per)
    index = next(i for i, v in per if v == value)
    return DistanceReport(value, "emax", value, None, per, src.id, index)


def emin(X, src) -> DistanceReport:
    X = _as_list(X)
    per = _per_element(X, src)
    value = min(v for _, v in per)
    index = next(i for i, v in per if v == value)
    return DistanceReport(value, "emin", value, None, per, src.id, index)


def pair_emax(x, y, src) -> float:
    """max{K(x|y), K(y|x)}: the pairwise information distance.

    In SOI mode both conditionals come from the one order-canonical joint
    size, K(x|y) = K(x,y) - K(y), so the value is exactly symmetric.  Other
    sources answer the two conditionals directly.
    """
    if getattr(src, "mode", None) == "conditional-via-SOI":
        joint = _need(src.joint(x, y))
        return max(0.0, joint - min(_need(src.size(x)), _need(src.size(y))))
    return max(_need(src.conditional(x, y)), _need(src.conditional(y, x)))


def _check_pair(x, y):
    if not x and not y:
        raise EstimatorError("degenerate pair: both inputs are empty")


def ncd_pair(x, y, src) -> DistanceReport:
    _check_pair(x, y)
    cx, cy = _need(src.size(x)), _need(src.size(y))
    cxy = _need(src.joint(x, y))
    den = max(cx, cy)
    if den <= 0:
        raise EstimatorError("degenerate pair: zero denominator")
    num = cxy - min(cx, cy)
    return DistanceReport(num / den, "ncd", num, den, [(0, cx), (1, cy)], src.id)


def e1_pair(x, y, src) -> DistanceReport:
    _check_pair(x, y)
    num = pair_emax(x, y, src)
    den = _need(src.joint(x, y))
    if den <= 0:
        raise EstimatorError("degenerate pair: zero denominator")
    return DistanceReport(num / den, "e1", num, den, [], src.id)


def emax_pair(x, y, src) -> DistanceReport:
    v = pair_emax(x, y, src)
    return DistanceReport(v, "emax-pair", v, None, [], src.id)


def sum_bound(X, src) -> DistanceReport:
    X = _as_list(X)
    if X.m < 2:
        raise EstimatorError("sum bound needs at least two elements")
    pair = {}
    for i in range(X.m):
        for k in range(i + 1, X.m):
            pair[i, k] = pair[k, i] = pair_emax(X[i], X[k], src)
    sums = [(i, sum(pair[i, k] for k in range(X.m) if k != i)) for i in range(X.m)]
    value = min(s for _, s in sums)
    index = next(i for i, s in sums if s == value)
    return DistanceReport(value, "sum-bound", value, None, sums, src.id, index)


def _sublist(elements: tuple, as_set: bool) -> StringList:
    return canonicalize(set(elements) if as_set else elements)


def normalized_list(X, scheme: str, src) -> DistanceReport:
    if scheme not in NORMALIZED_SCHEMES:
        raise EstimatorError(f"unknown normalization scheme {scheme!r}")
    X = _as_list(X)
    if X.m < 2:
        raise EstimatorError("normalization undefined for singletons")
    top = emax(X, src)
    as_set = scheme in (NORM_SET_MAX_SUBLIST, NORM_SET_DROP_MAXIMIZER)
    if scheme in (NORM_MAX_SUBLIST, NORM_SET_MAX_SUBLIST):
        dens = [_need(src.list_size(_sublist(X.without(i), as_set))) for i in range(X.m)]
        den = max(dens)
        index = dens.index(den)
    else:
        index = top.index
        den = _need(src.list_size(_sublist(X.without(index), as_set)))
    if den <= 0:
        raise EstimatorError("zero denominator")
    return DistanceReport(top.value / den, scheme, top.value, den, top.per_element, src.id, index)


def list_distance(X, scheme: str, src) -> DistanceReport:
    if scheme == "emax":
        return emax(X, src)
    if scheme == "emin":
        return emin(X, src)
    if scheme == "sum-bound":
        return sum_bound(X, src)
    return normalized_list(X, scheme, src)


def mutual_information(x, y, src):
    """I(y:x) = K(x) - K(x|y), the information about x contained in y."""
    bits = max(0.0, _need(src.size(x)) - _need(src.conditional(x, y)))
    return ComplexityEstimate(bits, src.id, getattr(src, "mode", "conditional-via-SOI"))


# ---------------------------------------------------------------------------
# distance matrices

_PAIR_FUNCS = {"ncd": ncd_pair, "e1": e1_pair, "emax-pair": emax_pair}


@dataclass
class DistanceMatrix:
    labels: list
    entries: list
    scheme: str
    source: str
    tolerance: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.labels)
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise ValueError("matrix shape does not match labels")

    def is_symmetric(self) -> bool:
        n = len(self.labels)
        return all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(n))

    def to_json(self) -> str:
        doc = {
            "schema": "mid.distance-matrix/1",
            "labels": list(self.labels),
            "scheme": self.scheme,
            "source": self.source,
            "tolerance": self.tolerance,
            "entries": [v for row in self.entries for v in row],
            **({"meta": self.meta} if self.meta else {}),
        }
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "DistanceMatrix":
        doc = json.loads(text)
        n = len(doc["labels"])
        flat = doc["entries"]
        rows = [flat[i * n:(i + 1) * n] for i in range(n)]
        return cls(doc["labels"], rows, doc["scheme"], doc["source"], doc.get("tolerance", 0.0), doc.get("meta", {}))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["label", *self.labels])
        for label, row in zip(self.labels, self.entries):
            w.writerow([label, *(repr(float(v)) for v in row)])
        return buf.getvalue()


def distance_matrix(corpus: Sequence[tuple], scheme: str, src, jobs: int = 1) -> DistanceMatrix:
    """Pairwise distances of ``(label, bytes)`` items; the diagonal is computed too."""
    if scheme not in _PAIR_FUNCS:
        raise EstimatorError(f"unknown pair scheme {scheme!r}")
    if len(corpus) < 2:
        raise EstimatorError("distance matrix needs at least two items")
    fn = _PAIR_FUNCS[scheme]
    labels = [label for label, _ in corpus]
    n = len(corpus)
    cells = [(i, j) for i in range(n) for j in range(i, n)]

    def cell(ij):
        i, j = ij
        try:
            return fn(corpus[i][1], corpus[j][1], src).value
        except EstimatorError as exc:
            raise EstimatorError(f"{labels[i]} vs {labels[j]}: {exc}") from exc

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            values = list(pool.map(cell, cells))
    else:
        values = [cell(ij) for ij in cells]
    entries = [[0.0] * n for _ in range(n)]
    for (i, j), v in zip(cells, values):
        entries[i][j] = entries[j][i] = float(v)
    tol = max(entries[i][i] for i in range(n))
    return DistanceMatrix(labels, entries, scheme, src.id, tol)


def slack_allowance(*bits: float) -> float:
    """64 + 4 log2(max bits): the additive allowance standing in for O(log K)."""
    top = max([b for b in bits if b is not None] + [2.0])
    return 64.0 + 4.0 * math.log2(max(top, 2.0))
