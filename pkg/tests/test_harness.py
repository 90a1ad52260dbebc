import json
import random
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from mid.compressors import CompressionSource, SizeCache
from mid.core import canonicalize
from mid.estimators import NORMALIZED_SCHEMES, DistanceMatrix, EstimatorError, distance_matrix
from mid.harness import (ClusterError, DemoReport, ListSampler, ViolationReport, additivity_demo, cluster,
                         counterexample_strings, flip_bit, inequality_chain_check, metric_check,
                         minimal_overlap_demo, normalization_violation_demo, to_json)
from mid.harness.cluster import quote_label
from mid.harness.corpus import build_corpus, load_corpus, manifest, write_counterexample
from mid.harness.sampler import KINDS, make_bytes, mutate


# ---------------------------------------------------------------- sampler

def test_sampler_deterministic():
    a = ListSampler(seed=9, max_size=4096)
    b = ListSampler(seed=9, max_size=4096)
    for _ in range(10):
        assert a.draw() == b.draw()
    assert ListSampler(seed=10, max_size=4096).draw() != ListSampler(seed=9, max_size=4096).draw()


def test_sampler_bounds():
    s = ListSampler(seed=1, m=(3, 5), min_size=1024, max_size=50 * 1024)
    for _ in range(30):
        X = s.draw()
        assert 3 <= X.m <= 5
        for x in X:
            assert len(x) <= 50 * 1024


@pytest.mark.parametrize("kind", KINDS)
def test_make_bytes_exact_length(kind):
    assert len(make_bytes(random.Random(0), kind, 1234)) == 1234
    with pytest.raises(ValueError):
        make_bytes(random.Random(0), "nope", 10)


def test_mutate_keeps_most_content():
    base = make_bytes(random.Random(1), "text", 5000)
    m = mutate(random.Random(2), base, edits=5)
    assert m != base
    assert 3 * len(base) // 4 - 1 <= len(m) <= len(base) + 64


# ---------------------------------------------------------------- reports

def test_violation_report_headline():
    recs = [{"slack": 100.0, "allowance": 200.0}, {"slack": 50.0, "allowance": 40.0}]
    r = ViolationReport("triangle", 2, recs)
    # the second trial is worse relative to its allowance despite the smaller slack
    assert (r.worst_trial, r.worst_slack, r.allowance, r.passed) == (1, 50.0, 40.0, False)
    assert r.violations() == [recs[1]]
    assert ViolationReport("empty", 0).passed


@settings(max_examples=100)
@given(st.lists(st.tuples(st.floats(-1e6, 1e6), st.floats(0, 1e6)), min_size=1, max_size=20))
def test_violation_pass_iff_all_within(pairs):
    recs = [{"slack": s, "allowance": a} for s, a in pairs]
    r = ViolationReport("p", len(recs), recs)
    assert r.passed == all(s <= a for s, a in pairs)
    assert r.passed == (r.worst_slack <= r.allowance)


def test_report_json():
    d = DemoReport("demo", {"n": 1}, {"v": 2.0}, {"ok": True})
    doc = json.loads(to_json(d, meta={"seed": 0}))
    assert doc["schema"] == "mid.report/1"
    assert doc["reports"][0]["passed"] is True and doc["meta"] == {"seed": 0}


# ---------------------------------------------------------------- demos

def test_counterexample_strings():
    x, y = counterexample_strings(10_000)
    assert len(x) == len(y) == 1250
    assert y[-125:] == bytes(125)
    assert flip_bit(b"\x00\x00", 0) == b"\x80\x00" and flip_bit(b"\x00\x00", 9) == b"\x00\x40"
    with pytest.raises(ValueError):
        counterexample_strings(10_001)
    with pytest.raises(ValueError):
        counterexample_strings(5000)


def test_counterexample_fixtures_match(counterexample_dir):
    x, y = counterexample_strings(10_000, 0)
    assert (counterexample_dir / "x.bin").read_bytes() == x
    assert (counterexample_dir / "y.bin").read_bytes() == y
    assert (counterexample_dir / "y-flip1.bin").read_bytes() == flip_bit(y, 1)


def test_write_counterexample(tmp_path):
    man = write_counterexample(tmp_path)
    assert set(man) == {"x.bin", "y.bin", "y-flip0.bin", "y-flip1.bin"}


def test_normalization_max_sublist(src):
    r = normalization_violation_demo(10_000, "norm-max-sublist", src)
    v = r.values
    assert v["e_XY"] >= 0.8 and abs(v["e_XY"] - 1) <= 0.15
    assert 0.35 <= v["e_XZ"] <= 0.65 and abs(v["e_XZ"] - 0.5) <= 0.15
    assert v["e_ZY"] <= 0.15
    assert r.checks["violation"]
    # pass/fail is recomputable from the raw values
    for k in ("XY", "XZ", "ZY"):
        assert v[f"e_{k}"] == v[f"num_{k}"] / v[f"den_{k}"]


@pytest.mark.parametrize("scheme", NORMALIZED_SCHEMES)
def test_normalization_all_schemes_flag(src, scheme):
    assert normalization_violation_demo(10_000, scheme, src).checks["violation"]


def test_normalization_unknown_scheme(src):
    with pytest.raises(EstimatorError):
        normalization_violation_demo(10_000, "emax", src)


def test_additivity(src):
    r = additivity_demo(8000, src)
    a, b = r.values["a"], r.values["b"]
    assert a["E_XY"] < a["E_X"] + a["E_Y"]
    assert b["E_XY"] > b["E_X"] + b["E_Y"]
    assert r.passed
    with pytest.raises(ValueError):
        additivity_demo(999, src)


def test_minimal_overlap(src):
    r = minimal_overlap_demo(8000, src)
    assert r.passed, r.values
    assert r.values["C_x_given_y"] >= 0.9 * 8000


def test_chain_all_equal(src):
    x = make_bytes(random.Random(4), "binary", 10_000)
    r = inequality_chain_check([x, x, x], src)
    assert r.passed
    assert r.values["E_max"] <= 0.05 * src.size(x)
    assert r.values["left_slack"] <= 0
    with pytest.raises(EstimatorError):
        inequality_chain_check([x], src)


def test_chain_related_lists(src):
    s = ListSampler(seed=3, m=(3, 5), max_size=8 * 1024, related=0.8)
    for _ in range(5):
        r = inequality_chain_check(s.draw(), src)
        assert r.checks["min_le_max"]


def test_metric_check_small(src):
    pd, sym, tri = metric_check(ListSampler(seed=2, max_size=8 * 1024), src, trials=6)
    assert sym.worst_slack == 0.0 and sym.passed
    assert pd.passed
    assert tri.trials == 6 and len(tri.records) == 6
    with pytest.raises(ValueError):
        metric_check(ListSampler(), src, 0)


# ---------------------------------------------------------------- corpus and clustering

def test_corpus_fixtures_match_generator(corpus_dir):
    files = dict(load_corpus(corpus_dir))
    assert files == build_corpus()
    man = json.loads((corpus_dir / "MANIFEST.json").read_text())["sha256"]
    assert man == manifest(files)


def matrix(labels, rows):
    return DistanceMatrix(labels, rows, "ncd", "test")


def test_cluster_two_items():
    d = cluster(matrix(["a", "b"], [[0.0, 0.7], [0.7, 0.0]]))
    assert d.merges == [("a", "b", 0.7)]
    assert d.newick() == "(a:0.7,b:0.7);"


def test_cluster_ties_lowest_label_pair():
    rows = [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
    d = cluster(matrix(["c", "a", "b"], rows), "single")
    assert d.merges[0][:2] == ("a", "b")


@pytest.mark.parametrize("linkage", ["single", "average", "complete"])
def test_cluster_corpus_groups(corpus_dir, linkage):
    m = distance_matrix(load_corpus(corpus_dir), "ncd", CompressionSource(cache=SizeCache()))
    d = cluster(m, linkage)
    fam = lambda label: label.split("-")[0]
    # the first six merges join near-duplicates within a family
    for left, right, _ in d.merges[:6]:
        assert fam(left) == fam(right)
    assert d.newick() == cluster(m, linkage).newick()


@settings(max_examples=40, deadline=None)
@given(st.permutations(range(5)), st.lists(st.floats(0.1, 1.0), min_size=10, max_size=10))
def test_cluster_permutation_invariant(perm, vals):
    labels = ["p", "q", "r", "s", "t"]
    full = [[0.0] * 5 for _ in range(5)]
    it = iter(vals)
    for i in range(5):
        for j in range(i + 1, 5):
            full[i][j] = full[j][i] = next(it)
    shuffled = [[full[perm[i]][perm[j]] for j in range(5)] for i in range(5)]
    a = cluster(matrix(labels, full)).newick()
    b = cluster(matrix([labels[k] for k in perm], shuffled)).newick()
    assert a == b


def test_cluster_errors():
    with pytest.raises(ClusterError, match="NaN"):
        cluster(matrix(["a", "b"], [[0.0, float("nan")], [float("nan"), 0.0]]))
    with pytest.raises(ClusterError):
        cluster(matrix(["a", "b"], [[0.0, 1.0], [0.5, 0.0]]))
    with pytest.raises(ClusterError):
        cluster(matrix(["a"], [[0.0]]))
    with pytest.raises(ClusterError):
        cluster(matrix(["a", "b"], [[0, 1], [1, 0]]), "ward")


def test_quote_label():
    assert quote_label("text-0.txt") == "text-0.txt"
    assert quote_label("it's (x)") == "'it''s (x)'"
