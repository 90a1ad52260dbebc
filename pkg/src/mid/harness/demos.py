"""Empirical checks of list-distance properties over a complexity source."""
from __future__ import annotations

import hashlib
import random
from typing import Iterable, Iterator, Optional

import numpy as np

from ..core import StringList, canonicalize, encode_list
from ..estimators import (NORM_SET_DROP_MAXIMIZER, NORM_SET_MAX_SUBLIST, NORMALIZED_SCHEMES, EstimatorError,
                          emax, emin, mutual_information, normalized_list, slack_allowance, sum_bound)
from .reports import DemoReport, ViolationReport

PD_RATIO = 0.05


class HarnessError(RuntimeError):
    pass


def _digest(X: StringList) -> str:
    return hashlib.sha256(encode_list(X)).hexdigest()[:16]


def _draw(it: Iterator[StringList]) -> StringList:
    try:
        return next(it)
    except StopIteration:
        raise HarnessError("sampler exhausted") from None


def _permuted(X: StringList, rng: random.Random) -> StringList:
    items = list(X.elements)
    rng.shuffle(items)
    return canonicalize(items)


def metric_check(sampler: Iterable[StringList], src, trials: int, seed: int = 0) -> tuple:
    """Positive definiteness, symmetry and triangle inequality of E_max on sampled triples."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    it = iter(sampler)
    rng = random.Random(seed)
    pd, sym, tri = [], [], []
    for t in range(trials):
        X, Y, Z = _draw(it), _draw(it), _draw(it)
        x = X[0]
        same = canonicalize([x] * (2 + t % 2))
        e_same = emax(same, src).value
        c_x = src.size(x)
        pd.append({"trial": t, "kind": "all-equal", "inputs": [_digest(same)], "emax": e_same,
                   "element_bits": c_x, "slack": e_same / c_x if c_x else 0.0, "allowance": PD_RATIO})
        XY = X + Y
        if not XY.all_equal():
            e_mixed = emax(XY, src).value
            pd.append({"trial": t, "kind": "mixed", "inputs": [_digest(XY)], "emax": e_mixed,
                       "slack": 0.0 if e_mixed > 0 else 1.0, "allowance": 0.0})
        e_xy = emax(XY, src).value
        e_yx = emax(_permuted(Y + X, rng), src).value
        sym.append({"trial": t, "inputs": [_digest(XY)], "emax": e_xy, "emax_permuted": e_yx,
                    "slack": abs(e_xy - e_yx), "allowance": 0.0})
        XZ, ZY = X + Z, Z + Y
        e_xz, e_zy = emax(XZ, src).value, emax(ZY, src).value
        top = max(src.list_size(L) for L in (XY, XZ, ZY))
        tri.append({"trial": t, "inputs": [_digest(X), _digest(Y), _digest(Z)],
                    "e_xy": e_xy, "e_xz": e_xz, "e_zy": e_zy, "max_bits": top,
                    "slack": e_xy - e_xz - e_zy, "allowance": slack_allowance(top)})
    return (ViolationReport("positive-definiteness", trials, pd),
            ViolationReport("symmetry", trials, sym),
            ViolationReport("triangle", trials, tri))


def _random_bits(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.integers(0, 2, n, dtype=np.uint8)


def _pack(bits: np.ndarray) -> bytes:
    return np.packbits(bits).tobytes()


def additivity_demo(n: int, src, seed: int = 0) -> DemoReport:
    """Both directions of non-additivity of E_max under list concatenation."""
    if n < 1000:
        raise ValueError("n must be >= 1000")
    rng = np.random.default_rng(seed)
    x = _pack(_random_bits(rng, n))
    X = canonicalize([b"", x])
    a_x, a_xy = emax(X, src).value, emax(X + X, src).value
    u, v = _pack(_random_bits(rng, n)), _pack(_random_bits(rng, n))
    U, V = canonicalize([u, u]), canonicalize([v, v])
    b_x, b_y, b_xy = emax(U, src).value, emax(V, src).value, emax(U + V, src).value
    values = {"a": {"E_X": a_x, "E_Y": a_x, "E_XY": a_xy},
              "b": {"E_X": b_x, "E_Y": b_y, "E_XY": b_xy}}
    checks = {"a_subadditive": a_xy <= 0.6 * (2 * a_x),
              "b_superadditive": b_xy >= b_x + b_y + 0.5 * n}
    return DemoReport("additivity", {"n": n, "seed": seed, "source": src.id}, values, checks)


def counterexample_strings(n: int, seed: int = 0) -> tuple[bytes, bytes]:
    """x: n random bits; y: 0.9n random bits then 0.1n zero bits."""
    if n < 10_000 or n % 10:
        raise ValueError("n must be >= 10000 and divisible by 10")
    rng = np.random.default_rng(seed)
    x = _pack(_random_bits(rng, n))
    y = _pack(np.concatenate([_random_bits(rng, 9 * n // 10), np.zeros(n // 10, dtype=np.uint8)]))
    return x, y


def flip_bit(b: bytes, i: int) -> bytes:
    """Flip bit i, counting from the most significant bit of byte 0."""
    out = bytearray(b)
    out[i // 8] ^= 0x80 >> (i % 8)
    return bytes(out)


def normalization_violation_demo(n: int, scheme: str, src, seed: int = 0) -> DemoReport:
    if scheme not in NORMALIZED_SCHEMES:
        raise EstimatorError(f"unknown normalization scheme {scheme!r}")
    x, y = counterexample_strings(n, seed)
    X, Y = canonicalize([x]), canonicalize([y])
    if scheme in (NORM_SET_MAX_SUBLIST, NORM_SET_DROP_MAXIMIZER):
        Z = canonicalize([flip_bit(y, 0), flip_bit(y, 1)])
    else:
        Z = canonicalize([y, y])
    e = {name: normalized_list(L, scheme, src) for name, L in (("XY", X + Y), ("XZ", X + Z), ("ZY", Z + Y))}
    values = {f"e_{k}": r.value for k, r in e.items()}
    values.update({f"num_{k}": r.numerator_bits for k, r in e.items()})
    values.update({f"den_{k}": r.denominator_bits for k, r in e.items()})
    checks = {"violation": values["e_XY"] > values["e_XZ"] + values["e_ZY"]}
    return DemoReport("normalization-violation", {"n": n, "scheme": scheme, "seed": seed, "source": src.id},
                      values, checks)


# a fixed description "x is the bitwise XOR of the two conditions" does not depend on n;
# compressors cannot execute it, so its length is charged as a constant
XOR_WITNESS_BITS = 8.0


def minimal_overlap_demo(n: int, src, seed: int = 0) -> DemoReport:
    """x = y XOR z for independent random y, z: two disjoint routes from y to x."""
    if n < 1000:
        raise ValueError("n must be >= 1000")
    rng = np.random.default_rng(seed)
    ybits, zbits = _random_bits(rng, n), _random_bits(rng, n)
    y, z, x = _pack(ybits), _pack(zbits), _pack(ybits ^ zbits)
    values = {
        "I_z_y": mutual_information(z, y, src).bits,
        "I_z_x": mutual_information(z, x, src).bits,
        "I_y_x": mutual_information(y, x, src).bits,
        "C_x": src.size(x),
        "C_x_given_y": src.conditional(x, y),
        "C_x_given_yz_compressor": src.conditional(x, y + z),
        "C_x_given_yz_witness": XOR_WITNESS_BITS,
    }
    checks = {
        "independent_z_y": values["I_z_y"] <= 0.1 * n,
        "independent_z_x": values["I_z_x"] <= 0.1 * n,
        "x_needs_n_given_y": values["C_x_given_y"] >= 0.9 * n,
        "x_from_pair": values["C_x_given_yz_witness"] <= 0.1 * n,
    }
    return DemoReport("minimal-overlap", {"n": n, "seed": seed, "source": src.id}, values, checks)


def inequality_chain_check(X, src, allowance: Optional[float] = None) -> DemoReport:
    X = X if isinstance(X, StringList) else canonicalize(X)
    if X.m < 2:
        raise EstimatorError("inequality chain needs at least two elements")
    lo, hi, sb = emin(X, src), emax(X, src), sum_bound(X, src)
    if allowance is None:
        allowance = slack_allowance(src.list_size(X))
    values = {"E_min": lo.value, "E_max": hi.value, "sum_bound": sb.value, "allowance": allowance,
              "left_slack": lo.value - hi.value, "right_slack": hi.value - sb.value}
    checks = {"min_le_max": lo.value <= hi.value, "max_le_sum": hi.value <= sb.value + allowance}
    return DemoReport("inequality-chain", {"m": X.m, "input": _digest(X), "source": src.id}, values, checks)
