"""Deterministic agglomerative clustering of a distance matrix, written out as Newick."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from ..estimators import DistanceMatrix

LINKAGES = ("single", "average", "complete")

_PLAIN = re.compile(r"[A-Za-z0-9_.\-]+")


class ClusterError(ValueError):
    pass


def quote_label(label: str) -> str:
    if _PLAIN.fullmatch(label):
        return label
    return "'" + label.replace("'", "''") + "'"


@dataclass
class Node:
    members: tuple  # leaf indices
    key: str  # smallest member label, used for ordering and tie breaks
    height: float
    children: tuple = ()

    def newick(self, labels: list) -> str:
        if not self.children:
            return quote_label(labels[self.members[0]])
        parts = [f"{c.newick(labels)}:{self.height - c.height!r}" for c in self.children]
        return "(" + ",".join(parts) + ")"


@dataclass
class Dendrogram:
    root: Node
    labels: list
    linkage: str
    merges: list  # (left key, right key, height) in merge order

    def newick(self) -> str:
        return self.root.newick(self.labels) + ";"


def cluster(matrix: DistanceMatrix, linkage: str = "average") -> Dendrogram:
    if linkage not in LINKAGES:
        raise ClusterError(f"unknown linkage {linkage!r}")
    labels = list(matrix.labels)
    n = len(labels)
    if n < 2:
        raise ClusterError("clustering needs at least two items")
    if len(set(labels)) != n:
        raise ClusterError("labels must be unique")
    d = matrix.entries
    if any(math.isnan(v) for row in d for v in row):
        raise ClusterError("matrix has NaN entries")
    if not matrix.is_symmetric():
        raise ClusterError("matrix is not symmetric")

    def between(a: Node, b: Node) -> float:
        vals = [d[i][j] for i in a.members for j in b.members]
        if linkage == "single":
            return min(vals)
        if linkage == "complete":
            return max(vals)
        return math.fsum(vals) / len(vals)  # exact sum: independent of member order

    nodes = [Node((i,), labels[i], 0.0) for i in range(n)]
    merges = []
    while len(nodes) > 1:
        best = None
        for p in range(len(nodes)):
            for q in range(p + 1, len(nodes)):
                a, b = nodes[p], nodes[q]
                key = (between(a, b), *sorted((a.key, b.key)))
                if best is None or key < best[0]:
                    best = (key, p, q)
        (h, _, _), p, q = best
        a, b = sorted((nodes[p], nodes[q]), key=lambda nd: nd.key)
        h = max(h, a.height, b.height)
        merged = Node(tuple(sorted(a.members + b.members)), a.key, h, (a, b))
        merges.append((a.key, b.key, h))
        nodes = [nd for k, nd in enumerate(nodes) if k not in (p, q)] + [merged]
    return Dendrogram(nodes[0], labels, linkage, merges)
