import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from danmaku_highlights.chains import LexicalChain, build_chains, calibrate, chain_score
from danmaku_highlights.concept import ConceptMap
from danmaku_highlights.embedding import EmbeddingStore
from danmaku_highlights.errors import ConfigError, ConsistencyError

from conftest import stream_of


def store_with(counts):
    vecs = {w: np.eye(len(counts))[i] for i, w in enumerate(sorted(counts))}
    return EmbeddingStore(vecs, counts)


def spans(index, concept):
    return [[e.time_s for e in ch.entries] for ch in index.chains[concept]]


def test_gap_beyond_l_max_splits():
    s = stream_of([(0, "goal"), (5, "goal"), (20, "goal")])
    idx = build_chains(s, ConceptMap.identity(["goal"]), l_max=11)
    assert spans(idx, "goal") == [[0, 5], [20]]


def test_gap_equal_to_l_max_extends():
    s = stream_of([(0, "goal"), (11, "goal")])
    idx = build_chains(s, ConceptMap.identity(["goal"]), l_max=11)
    assert spans(idx, "goal") == [[0, 11]]


def test_gap_is_measured_from_last_mention():
    s = stream_of([(0, "a"), (10, "a"), (20, "a"), (40, "a")])
    idx = build_chains(s, ConceptMap.identity(["a"]), l_max=11)
    assert spans(idx, "a") == [[0, 10, 20], [40]]


def test_single_comment_single_chain():
    s = stream_of([(3, "x y")])
    idx = build_chains(s, ConceptMap.identity(["x", "y"]))
    assert [len(ch) for ch in idx] == [1, 1]


def test_concept_map_merges_words_into_one_chain():
    s = stream_of([(0, "goal"), (4, "score")])
    idx = build_chains(s, ConceptMap({"goal": "goal", "score": "goal"}))
    assert [[e.word for e in ch.entries] for ch in idx] == [["goal", "score"]]


def test_bad_l_max():
    with pytest.raises(ConfigError):
        build_chains(stream_of([(0, "a")]), ConceptMap.identity(["a"]), l_max=0)


def test_chain_score_values():
    store = store_with({"common": 100, "rarer": 1000, "once": 1})
    s = stream_of([(0, "common"), (1, "rarer"), (2, "once")])
    idx = build_chains(s, ConceptMap({"common": "k", "rarer": "k", "once": "o"}))
    k, o = idx.chains["k"][0], idx.chains["o"][0]
    assert chain_score(k, store) == pytest.approx(1 / math.log(100) + 1 / math.log(1000))
    assert chain_score(k, store) == pytest.approx(0.3620, abs=2e-4)
    # counts below 2 are floored to 2
    assert chain_score(o, store) == pytest.approx(1.4427, abs=1e-4)


def test_empty_chain_score_rejected():
    with pytest.raises(ValueError):
        chain_score(LexicalChain("k"), store_with({"a": 5}))


def test_calibration_snaps_to_chain_head():
    s = stream_of([(0, "goal"), (9, "goal")])
    cmap = ConceptMap.identity(["goal"])
    cal = calibrate(s, build_chains(s, cmap), cmap, store_with({"goal": 50}))
    assert [c.calibrated_time_s for c in cal.comments] == [0, 0]
    assert [c.time_s for c in cal.comments] == [0, 9]


def test_calibration_prefers_higher_scoring_chain():
    s = stream_of([(12, "rare"), (15, "common"), (20, "rare common")])
    cmap = ConceptMap.identity(["rare", "common"])
    store = store_with({"rare": 1, "common": 1000})
    cal = calibrate(s, build_chains(s, cmap), cmap, store)
    assert cal.comments[2].calibrated_time_s == 12


def test_calibration_tie_prefers_earlier_head():
    s = stream_of([(2, "a"), (5, "b"), (8, "a b")])
    cmap = ConceptMap.identity(["a", "b"])
    cal = calibrate(s, build_chains(s, cmap), cmap, store_with({"a": 40, "b": 40}))
    assert cal.comments[2].calibrated_time_s == 2


def test_calibration_tie_same_head_prefers_smaller_concept():
    s = stream_of([(2, "zed alpha"), (8, "zed alpha")])
    cmap = ConceptMap.identity(["zed", "alpha"])
    idx = build_chains(s, cmap)
    cal = calibrate(s, idx, cmap, store_with({"zed": 40, "alpha": 40}))
    assert cal.comments[1].calibrated_time_s == 2


def test_missing_chain_is_a_consistency_error():
    s = stream_of([(0, "a")])
    idx = build_chains(s, ConceptMap.identity(["a"]))
    with pytest.raises(ConsistencyError):
        calibrate(s, idx, ConceptMap({"a": "other"}), store_with({"a": 10}))


events = st.lists(
    st.tuples(st.floats(0, 300, allow_nan=False), st.lists(st.sampled_from("abcde"), min_size=1, max_size=3)),
    min_size=1, max_size=40)


@settings(max_examples=80, deadline=None)
@given(events, st.floats(0.5, 30))
def test_chain_and_calibration_invariants(rows, l_max):
    s = stream_of(rows)
    cmap = ConceptMap({"a": "a", "b": "a", "c": "c", "d": "d", "e": "e"})
    idx = build_chains(s, cmap, l_max)
    # chains of a concept, concatenated, replay every occurrence in time order
    for k, chains in idx.chains.items():
        replay = [(e.comment_id, e.word) for ch in chains for e in ch.entries]
        expected = [(c.id, w) for c in s.comments for w in c.tokens if cmap[w] == k]
        assert replay == expected
        for ch in chains:
            gaps = [b.time_s - a.time_s for a, b in zip(ch.entries, ch.entries[1:])]
            assert all(g <= l_max for g in gaps)
        for a, b in zip(chains, chains[1:]):
            assert b.head_time - a.last_time > l_max
    store = store_with({w: 10 + 7 * i for i, w in enumerate("abcde")})
    cal = calibrate(s, idx, cmap, store)
    originals = {c.time_s for c in s.comments}
    assert len(cal) == len(s)
    for before, after in zip(s.comments, cal.comments):
        assert after.calibrated_time_s <= before.time_s
        assert after.calibrated_time_s in originals
