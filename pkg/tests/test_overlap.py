import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from mid.overlap import (OverlapError, OverlapInstance, build, decode, encode, index_bits,
                         instance_from_oracle, random_instance, random_instances, roundtrip)
from mid.core import all_bitstrings


def hand_instance():
    return OverlapInstance(2, 1, 2, ((b"a", b"b"), (b"a", b"c"), (b"a", b"d"), (b"a", b"e")))


def test_hand_simulated_instance():
    g = build(hand_instance())
    assert [g.prefixes[j, b"a"] for j in range(4)] == ["0", "0", "1", "1"]
    assert [g.color(j) for j in range(4)] == ["00", "01", "00", "01"]
    assert g.degree("0", b"a") == 2 and g.degree("1", b"a") == 2
    assert g.max_degree() <= 2


def test_single_element_vectors():
    inst = OverlapInstance(1, 2, 3, tuple((bytes([i]),) for i in range(5)))
    g = build(inst)
    assert inst.color_bits == 2
    assert all(len(g.color(j)) == 2 for j in range(5))
    assert len(g.prefixes) == 5
    cw = encode(g, (b"\x03",), 0, 0)
    assert cw.delta == ""
    assert decode(inst, b"\x03", cw.r, cw.c, cw.delta) == ((b"\x03",), b"\x03")


def test_promise_violated():
    vectors = tuple((b"a", bytes([98 + i])) for i in range(5))
    with pytest.raises(OverlapError, match="promise violated"):
        build(OverlapInstance(2, 1, 2, vectors))


def test_instance_validation():
    with pytest.raises(OverlapError):
        OverlapInstance(2, 3, 1, ())
    with pytest.raises(OverlapError):
        OverlapInstance(2, 1, 2, ((b"b", b"a"),))
    with pytest.raises(OverlapError):
        OverlapInstance(2, 1, 2, ((b"a",),))
    with pytest.raises(OverlapError):
        OverlapInstance(2, 1, 2, ((b"a", b"b"), (b"a", b"b")))


def test_codec_errors():
    inst = hand_instance()
    g = build(inst)
    with pytest.raises(OverlapError, match="not in B"):
        encode(g, (b"x", b"y"), 0, 1)
    with pytest.raises(OverlapError, match="out of range"):
        encode(g, (b"a", b"b"), 0, 2)
    with pytest.raises(OverlapError, match="undecodable"):
        decode(inst, b"a", "0", "11", "0", g)
    with pytest.raises(OverlapError, match="undecodable"):
        decode(inst, b"a", "0", "0", "0", g)


def test_repeated_components_share_one_edge():
    inst = OverlapInstance(3, 1, 2, ((b"a", b"a", b"b"),))
    g = build(inst)
    assert g.uses == {b"a": 1, b"b": 1}
    for i in range(3):
        for k in range(3):
            cw = encode(g, inst.vectors[0], i, k)
            assert decode(inst, inst.vectors[0][i], cw.r, cw.c, cw.delta, g) == (inst.vectors[0], inst.vectors[0][k])


def test_side_information_size():
    inst = random_instance(random.Random(1), m=5, k1=3, k2=6)
    g = build(inst)
    cw = encode(g, inst.vectors[0], 0, 4)
    assert cw.bits == inst.side_bits == (6 - 3) + (3 + 3) + 3
    assert index_bits(1) == 0 and index_bits(2) == 1 and index_bits(5) == 3


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_instance_invariants(seed):
    inst = random_instance(random.Random(seed), max_vectors=40)
    g = build(inst)
    assert g.max_degree() <= 2 ** inst.k1
    # colors are proper at every node
    for edges in g.nodes.values():
        assert len(edges) == len(set(edges))
    assert all(0 <= c < 2 ** inst.color_bits for c in g.colors)
    assert max(g.uses.values(), default=0) <= 2 ** inst.k2
    assert roundtrip([inst]).passed


def test_batch_round_trip():
    rt = roundtrip(random_instances(0, 50))
    assert rt.passed and rt.rate == 1.0
    assert rt.trials > 10_000


def test_build_deterministic():
    a = build(random_instance(random.Random(4)))
    b = build(random_instance(random.Random(4)))
    assert a.to_json() == b.to_json()


def test_graph_json_and_instance_round_trip():
    inst = hand_instance()
    doc = json.loads(build(inst).to_json())
    assert doc["schema"] == "mid.overlap-graph/1"
    assert len(doc["edges"]) == 8
    assert OverlapInstance.from_dict(doc["instance"]) == inst


def test_instance_from_oracle():
    inst = instance_from_oracle(all_bitstrings(2), 2, 2, 14)
    assert inst.vectors
    assert roundtrip([inst]).passed
