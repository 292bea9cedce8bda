import json

import pytest

import jedidist

MOVIE_A = (
    '{"title":"Star Wars - A New Hope","running time":125,'
    '"cast":{"Han":"Ford","Leia":"Fisher"}}'
)
MOVIE_B = (
    '{"cast":["Ford","Fisher"],"running time":125,'
    '"name":"Star Wars - A New Hope"}'
)


def test_distance_engines_agree():
    assert jedidist.distance(MOVIE_A, MOVIE_B) == 5
    assert jedidist.distance(MOVIE_A, MOVIE_B, engine="baseline") == 5
    assert jedidist.distance(MOVIE_A, MOVIE_A) == 0
    with pytest.raises(ValueError):
        jedidist.distance(MOVIE_A, MOVIE_B, engine="warp")


def test_order_distance_bounds_from_above():
    assert jedidist.order_distance(MOVIE_A, MOVIE_B) == 8
    assert jedidist.within(MOVIE_A, MOVIE_B, 8)
    assert not jedidist.within(MOVIE_A, MOVIE_B, 7)
    assert jedidist.label_bound(MOVIE_A, MOVIE_B) <= 5


def test_canonical_forms():
    assert jedidist.canonicalize("125") == jedidist.canonicalize("1.25e2")
    assert jedidist.distance('{"x":0.5}', '{"x":5e-1}') == 0
    canon = jedidist.canonicalize(MOVIE_A)
    assert jedidist.canonicalize(canon) == canon
    sorted_doc = jedidist.sort_doc('{"b":1,"a":2}')
    assert list(json.loads(sorted_doc)) == ["a", "b"]
    with pytest.raises(RuntimeError):
        jedidist.canonicalize("{broken")


def test_member_order_is_free():
    a = '{"a":1,"b":[2,3]}'
    b = '{"b":[2,3],"a":1}'
    assert jedidist.distance(a, b) == 0
    assert jedidist.distance("[1,2]", "[2,1]") == 2


def test_index_roundtrip(tmp_path):
    docs = jedidist.synth(30, profile="mixed", seed=7, perturb=0.4)
    assert len(docs) == 30
    index = jedidist.Index()
    for i, doc in enumerate(docs):
        index.insert(i, doc)
    assert len(index) == 30
    assert 5 in index
    candidates = index.lookup(docs[3], 2)
    assert 3 in candidates

    path = str(tmp_path / "snapshot.bin")
    index.save(path)
    restored = jedidist.Index.load(path)
    assert restored.lookup(docs[3], 2) == candidates


def test_lookup_jsonl():
    docs = jedidist.synth(25, profile="flat", seed=11, perturb=0.5, edits=1)
    jsonl = "\n".join(docs)
    hits = jedidist.lookup_jsonl(jsonl, docs[0], 3, exact=True)
    ids = [hit[0] for hit in hits]
    assert 0 in ids
    exact0 = dict(hits)[0]
    assert exact0 == 0
    for _, dist in hits:
        assert dist is not None and 0 <= dist <= 3
