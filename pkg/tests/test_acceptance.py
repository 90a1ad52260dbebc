"""The eight acceptance criteria at their stated tolerances and time limits.

Each test records a one-line verdict (printed in the terminal summary) before
asserting, so a failing criterion still reports its measured numbers.
"""
import itertools
import random
import time

import pytest

from conftest import ACCEPTANCE_LINES, seeded_random
from mid.compressors import CompressionSource, SizeCache, profile_from_spec
from mid.core import all_bitstrings
from mid.estimators import NORM_MAX_SUBLIST, NORMALIZED_SCHEMES, distance_matrix, ncd_pair
from mid.harness import (ListSampler, additivity_demo, inequality_chain_check, metric_check,
                         normalization_violation_demo)
from mid.harness.corpus import load_corpus
from mid.overlap import build, encode, decode, index_bits, random_instances
from mid.toylab import (admissible_offset, coding_check, density_all, dominance_check, emax_table,
                        enumerate_templates, hamming_distance, literal_length, oracle, soi_residual,
                        toy_universe)
from mid.toylab.oracle import OracleTable

C_SOI = 9
C_CODING = 4.944712061043486


def fresh():
    return CompressionSource(cache=SizeCache())


def verdict(n, ok, detail):
    ACCEPTANCE_LINES[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(ACCEPTANCE_LINES[n])


def test_criterion_1_normalization_counterexample():
    t0 = time.perf_counter()
    src = fresh()
    main = normalization_violation_demo(10_000, NORM_MAX_SUBLIST, src)
    flags = {s: normalization_violation_demo(10_000, s, src).checks["violation"] for s in NORMALIZED_SCHEMES}
    dt = time.perf_counter() - t0
    v = main.values
    ok = (v["e_XY"] >= 0.8 and 0.35 <= v["e_XZ"] <= 0.65 and v["e_ZY"] <= 0.15
          and v["e_XY"] > v["e_XZ"] + v["e_ZY"] and all(flags.values()) and dt < 10)
    verdict(1, ok, f"e(XY)={v['e_XY']:.3f} e(XZ)={v['e_XZ']:.3f} e(ZY)={v['e_ZY']:.3f} "
                   f"violations {sum(flags.values())}/4 in {dt:.1f}s")
    assert ok


def test_criterion_2_metric_suite():
    t0 = time.perf_counter()
    sampler = ListSampler(seed=0, min_size=1024, max_size=50 * 1024)
    pd, sym, tri = metric_check(sampler, fresh(), trials=100, seed=0)
    dt = time.perf_counter() - t0
    equal = [r for r in pd.records if r["kind"] == "all-equal"]
    ok = (not tri.violations() and sym.worst_slack == 0.0 and all(r["slack"] == 0.0 for r in sym.records)
          and all(r["emax"] <= 0.05 * r["element_bits"] for r in equal) and dt < 120)
    verdict(2, ok, f"triangle violations {len(tri.violations())}/100 (worst slack {tri.worst_slack:g} "
                   f"vs allowance {tri.allowance:g}), symmetry slack {sym.worst_slack:g}, "
                   f"all-equal worst ratio {max(r['slack'] for r in equal):.4f} in {dt:.1f}s")
    assert ok


def test_criterion_3_additivity():
    t0 = time.perf_counter()
    r = additivity_demo(8000, fresh())
    dt = time.perf_counter() - t0
    a, b = r.values["a"], r.values["b"]
    ok = (a["E_XY"] <= 0.6 * (a["E_X"] + a["E_Y"]) and b["E_XY"] >= b["E_X"] + b["E_Y"] + 0.5 * 8000
          and dt < 5)
    verdict(3, ok, f"(a) {a['E_XY']:g} vs {a['E_X'] + a['E_Y']:g}; (b) {b['E_XY']:g} vs "
                   f"{b['E_X'] + b['E_Y']:g} + 4000 in {dt:.2f}s")
    assert ok


def test_criterion_4_inequality_chain():
    t0 = time.perf_counter()
    src = fresh()
    it = iter(ListSampler(seed=0, m=(3, 5)))
    reports = [inequality_chain_check(next(it), src) for _ in range(100)]
    dt = time.perf_counter() - t0
    left = sum(not r.checks["min_le_max"] for r in reports)
    right = [r for r in reports if not r.checks["max_le_sum"]]
    excess = max((r.values["right_slack"] - r.values["allowance"] for r in right), default=0.0)
    ok = left == 0 and not right and dt < 120
    verdict(4, ok, f"E_min > E_max in {left}/100; E_max > sum_bound + allowance in {len(right)}/100 "
                   f"(worst excess {excess:g} bits) in {dt:.1f}s")
    assert ok


def test_criterion_5_toylab():
    t0 = time.perf_counter()
    halting = sorted(p for p, _, _ in enumerate_templates(20))
    prefix_free = all(not b.startswith(a) for a, b in zip(halting, halting[1:]))
    t = oracle(20, 10_000)
    strings = all_bitstrings(8)
    kraft = max(t.kraft_sum(y) for y in ("",) + tuple(all_bitstrings(3)))
    soi = [soi_residual(x, y) for x, y in itertools.combinations_with_replacement(strings, 2)]
    soi_worst = max(r.worst for r in soi if r is not None)
    coding = [coding_check(x) for x in strings]
    coding_worst = max(abs(v) for v in coding if v is not None)
    monotone = True
    for y in ("", "01"):
        for small, big in ((OracleTable(16, 10_000), t), (OracleTable(20, 3), t)):
            lo, hi = small.outputs(y), big.outputs(y)
            monotone &= all(hi[x][0] <= lo[x][0] for x in strings if x in lo)
    dt = time.perf_counter() - t0
    ok = prefix_free and kraft <= 1 and soi_worst <= C_SOI and coding_worst <= C_CODING and monotone and dt < 120
    verdict(5, ok, f"{len(halting)} halting programs prefix-free={prefix_free}, max Kraft {kraft:.4f}, "
                   f"max |soi| {soi_worst:g} <= {C_SOI}, max |coding| {coding_worst:.3f}, "
                   f"monotone={monotone} in {dt:.1f}s")
    assert ok


def test_criterion_6_overlap():
    t0 = time.perf_counter()
    instances = random_instances(seed=0, count=50)
    assert all(i.m <= 8 and i.k1 <= 6 and i.k2 <= 10 for i in instances)
    build_errors = trials = failures = 0
    degree_ok = width_ok = True
    for inst in instances:
        try:
            g = build(inst)
        except Exception:
            build_errors += 1
            continue
        degree_ok &= g.max_degree() <= 2 ** inst.k1
        width = inst.k1 + index_bits(inst.m)
        width_ok &= all(len(g.color(j)) == width for j in range(len(inst.vectors)))
        for X in inst.vectors:
            for i, k in itertools.product(range(inst.m), repeat=2):
                trials += 1
                cw = encode(g, X, i, k)
                failures += decode(inst, X[i], cw.r, cw.c, cw.delta, g) != (X, X[k])
    dt = time.perf_counter() - t0
    ok = build_errors == 0 and degree_ok and width_ok and failures == 0 and dt < 30
    verdict(6, ok, f"build errors {build_errors}, degree ok={degree_ok}, width ok={width_ok}, "
                   f"round trip {trials - failures}/{trials} in {dt:.1f}s")
    assert ok


def test_criterion_7_density_and_minimality():
    t0 = time.perf_counter()
    universe = toy_universe(3, 5)
    emax = emax_table(universe)
    density = density_all(emax, universe)
    family = {
        "emax": emax,
        "emax+5": {X: None if v is None else v + 5 for X, v in emax.items()},
        "literal": literal_length,
        "hamming": hamming_distance(float(admissible_offset(hamming_distance(0.0), universe))),
        "constant-1": lambda X: 1.0,
    }
    dom = {name: dominance_check(D, universe, emax) for name, D in family.items()}
    dt = time.perf_counter() - t0
    admissible = {k: r for k, r in dom.items() if r.admissible}
    ok = (all(r.passed for r in density) and all(r.c is not None and r.passed for r in admissible.values())
          and dom["emax"].c == 0 and set(admissible) == {"emax", "emax+5", "literal", "hamming"})
    verdict(7, ok, f"{len(universe)} lists, density passes at {sum(r.passed for r in density)}/{len(density)} "
                   f"anchors, c = " + ", ".join(f"{k}:{r.c}" for k, r in admissible.items())
                   + f", rejected {sorted(set(dom) - set(admissible))} in {dt:.1f}s")
    assert ok


def test_criterion_8_external_compressor(corpus_dir, tmp_path):
    xz = profile_from_spec("xz")
    src = CompressionSource(xz, SizeCache(tmp_path / "sizes.tsv"))
    x = seeded_random(2, 100 * 1024)
    self_ncd = ncd_pair(x, x, src).value
    corpus = load_corpus(corpus_dir)
    m = distance_matrix(corpus, "ncd", src)
    values = [v for row in m.entries for v in row]
    warm = CompressionSource(xz, SizeCache(tmp_path / "sizes.tsv"))
    again = distance_matrix(corpus, "ncd", warm)
    cold = distance_matrix(corpus, "ncd", CompressionSource(xz, SizeCache()))
    cache_ok = again.entries == cold.entries == m.entries and warm.cache.hits > 0 and warm.cache.misses == 0
    ok = self_ncd <= 0.05 and all(0 <= v <= 1.1 for v in values) and cache_ok
    verdict(8, ok, f"xz NCD(x,x)={self_ncd:.4f}, corpus NCD range [{min(values):.4f}, {max(values):.4f}], "
                   f"cache hits {warm.cache.hits} identical={cache_ok}")
    assert ok
