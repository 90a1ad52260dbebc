"""Shared-core conversion programs: the prefixed-string / vector coloring construction.

Given m, k1 <= k2 and a set B of m-vectors, every vector gets a color and every
component string s gets an l-bit prefix r (l = k2 - k1) such that the pair
(r, color) identifies the vector among all vectors adjacent to the node ``r s``.
A decoder holding any component x of X plus ``r``, the color and a rotation
``delta`` recovers X and any other component.

Indices are 0-based.  A vector with a repeated component has one edge per
distinct component, and rotations are measured from the first occurrence.
"""
from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .core import canonical_key, canonicalize, encode_bit_list
from .toylab.oracle import oracle


class OverlapError(ValueError):
    pass


def _bits(v: int, width: int) -> str:
    return format(v, f"0{width}b") if width else ""


def index_bits(m: int) -> int:
    return math.ceil(math.log2(m)) if m > 1 else 0


@dataclass(frozen=True)
class OverlapInstance:
    m: int
    k1: int
    k2: int
    vectors: tuple  # tuple of m-tuples of bytes, enumeration order is significant

    def __post_init__(self):
        if self.m < 1:
            raise OverlapError("m must be >= 1")
        if not 0 <= self.k1 <= self.k2:
            raise OverlapError("need 0 <= k1 <= k2")
        seen = set()
        for v in self.vectors:
            if len(v) != self.m:
                raise OverlapError(f"vector of length {len(v)} in an instance with m={self.m}")
            keys = [canonical_key(s) for s in v]
            if keys != sorted(keys):
                raise OverlapError("vector components are not in canonical order")
            if v in seen:
                raise OverlapError("duplicate vector in B")
            seen.add(v)

    @property
    def l(self) -> int:
        return self.k2 - self.k1

    @property
    def color_bits(self) -> int:
        return self.k1 + index_bits(self.m)

    @property
    def side_bits(self) -> int:
        """Side information beyond x: prefix + color + rotation."""
        return self.l + self.color_bits + index_bits(self.m)

    def to_dict(self) -> dict:
        return {"m": self.m, "k1": self.k1, "k2": self.k2,
                "vectors": [[s.hex() for s in v] for v in self.vectors]}

    @classmethod
    def from_dict(cls, d: dict) -> "OverlapInstance":
        return cls(d["m"], d["k1"], d["k2"], tuple(tuple(bytes.fromhex(s) for s in v) for v in d["vectors"]))


@dataclass
class ColoredGraph:
    instance: OverlapInstance
    colors: list = field(default_factory=list)  # per vector, int
    prefixes: dict = field(default_factory=dict)  # (vector index, component) -> r
    nodes: dict = field(default_factory=dict)  # (r, s) -> {color: vector index}
    uses: dict = field(default_factory=dict)  # s -> use count

    def color(self, j: int) -> str:
        return _bits(self.colors[j], self.instance.color_bits)

    def degree(self, r: str, s: bytes) -> int:
        return len(self.nodes.get((r, s), ()))

    def max_degree(self) -> int:
        return max((len(e) for e in self.nodes.values()), default=0)

    def to_json(self) -> str:
        edges = [{"vector": j, "component": s.hex(), "prefix": r, "color": self.color(j)}
                 for (j, s), r in self.prefixes.items()]
        return json.dumps({"schema": "mid.overlap-graph/1", "instance": self.instance.to_dict(),
                           "edges": edges}, indent=1)


def build(instance: OverlapInstance) -> ColoredGraph:
    m, k1, l = instance.m, instance.k1, instance.l
    cap = 2 ** instance.k2
    ncolors = 2 ** instance.color_bits
    g = ColoredGraph(instance)
    for j, v in enumerate(instance.vectors):
        ends = []
        for s in dict.fromkeys(v):  # distinct components, order kept
            i = g.uses.get(s, 0) + 1
            if i > cap:
                raise OverlapError(f"promise violated: component {s.hex() or '<empty>'} used more than 2^{instance.k2} times")
            g.uses[s] = i
            r = _bits(math.ceil(i / 2 ** k1) - 1, l)
            g.prefixes[j, s] = r
            ends.append((r, s))
        taken = set()
        for node in ends:
            taken.update(g.nodes.get(node, ()))
        # every endpoint has at most 2^k1 - 1 edges so far, hence < m 2^k1 <= ncolors taken
        assert len(taken) <= m * (2 ** k1 - 1)
        c = next((c for c in range(ncolors) if c not in taken), None)
        if c is None:
            raise OverlapError("coloring invariant broken: no free color")
        g.colors.append(c)
        for node in ends:
            g.nodes.setdefault(node, {})[c] = j
    assert g.max_degree() <= 2 ** k1
    return g


@dataclass(frozen=True)
class Codeword:
    r: str
    c: str
    delta: str

    @property
    def bits(self) -> int:
        return len(self.r) + len(self.c) + len(self.delta)


def encode(graph: ColoredGraph, X: Sequence[bytes], i: int, k: int) -> Codeword:
    inst = graph.instance
    X = tuple(X)
    try:
        j = inst.vectors.index(X)
    except ValueError:
        raise OverlapError("vector not in B") from None
    if not (0 <= i < inst.m and 0 <= k < inst.m):
        raise OverlapError("element index out of range")
    first = X.index(X[i])
    delta = (k - first) % inst.m
    return Codeword(graph.prefixes[j, X[i]], graph.color(j), _bits(delta, index_bits(inst.m)))


def decode(instance: OverlapInstance, x: bytes, r: str, c: str, delta: str,
           graph: ColoredGraph = None) -> tuple:
    """(X, element) from x and the side information; rebuilds the graph unless given one."""
    graph = build(instance) if graph is None else graph
    edges = graph.nodes.get((r, x), {})
    try:
        color = int(c, 2) if c else 0
    except ValueError:
        raise OverlapError("undecodable: malformed color") from None
    if len(c) != instance.color_bits or color not in edges:
        raise OverlapError("undecodable: no edge with that color at this node")
    X = instance.vectors[edges[color]]
    d = int(delta, 2) if delta else 0
    return X, X[(X.index(x) + d) % instance.m]


def random_instance(rng: random.Random, max_m: int = 8, max_k1: int = 6, max_k2: int = 10,
                    max_vectors: int = 120, m: int = None, k1: int = None, k2: int = None) -> OverlapInstance:
    """A capacity-respecting instance over a small pool so components are heavily shared.

    Parameters left as None are drawn within the ``max_*`` bounds.
    """
    m = rng.randint(1, max_m) if m is None else m
    k1 = rng.randint(0, max_k1) if k1 is None else k1
    k2 = rng.randint(k1, max(k1, max_k2)) if k2 is None else k2
    cap = 2 ** k2
    pool = [rng.randbytes(rng.randint(0, 3)) for _ in range(rng.randint(1, 12))]
    pool = sorted(set(pool), key=canonical_key)
    uses = dict.fromkeys(pool, 0)
    vectors, seen = [], set()
    for _ in range(max_vectors * 4):
        if len(vectors) >= max_vectors:
            break
        v = tuple(sorted((rng.choice(pool) for _ in range(m)), key=canonical_key))
        distinct = set(v)
        if v in seen or any(uses[s] >= cap for s in distinct):
            continue
        for s in distinct:
            uses[s] += 1
        seen.add(v)
        vectors.append(v)
    return OverlapInstance(m, k1, k2, tuple(vectors))


def random_instances(seed: int = 0, count: int = 50, **kw) -> list[OverlapInstance]:
    rng = random.Random(seed)
    return [random_instance(rng, **kw) for _ in range(count)]


def instance_from_oracle(strings: Sequence[str], m: int, k1: int, k2: int, L: int = 20,
                         S: int = 10_000) -> OverlapInstance:
    """B from bounded complexities: m-vectors X over ``strings`` with C(X|x) <= k2 for every x in X.

    Bit-string components are stored as their ASCII bytes.
    """
    t = oracle(L, S)
    vectors = []
    for combo in itertools.combinations_with_replacement(sorted(strings, key=canonical_key), m):
        X = canonicalize(combo)
        target = encode_bit_list(X)
        ok = True
        for x in set(X):
            v = t.complexity(target, x)
            if v is None or v > k2:
                ok = False
                break
        if ok:
            vectors.append(tuple(s.encode() for s in X))
    vectors.sort(key=lambda v: [canonical_key(s) for s in v])
    return OverlapInstance(m, k1, k2, tuple(vectors))


@dataclass
class RoundTrip:
    """Construction and codec outcome over a batch of instances."""

    instances: int = 0
    vectors: int = 0
    trials: int = 0
    failures: int = 0
    build_errors: int = 0
    max_degree_ok: bool = True
    color_width_ok: bool = True

    @property
    def rate(self) -> float:
        return 1.0 - self.failures / self.trials if self.trials else 1.0

    @property
    def passed(self) -> bool:
        return (self.failures == 0 and self.build_errors == 0
                and self.max_degree_ok and self.color_width_ok)


def roundtrip(instances: Sequence[OverlapInstance]) -> RoundTrip:
    """Build every instance and decode every (X, i, k) from a freshly rebuilt graph."""
    out = RoundTrip()
    for inst in instances:
        out.instances += 1
        try:
            g = build(inst)
        except OverlapError:
            out.build_errors += 1
            continue
        g2 = build(inst)  # the decoder side reconstructs the same graph independently
        out.max_degree_ok &= g.max_degree() <= 2 ** inst.k1
        for X in inst.vectors:
            out.vectors += 1
            for i in range(inst.m):
                for k in range(inst.m):
                    out.trials += 1
                    cw = encode(g, X, i, k)
                    out.color_width_ok &= len(cw.c) == inst.k1 + index_bits(inst.m)
                    try:
                        ok = decode(inst, X[i], cw.r, cw.c, cw.delta, graph=g2) == (X, X[k])
                    except OverlapError:
                        ok = False
                    out.failures += not ok
    return out
