import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from danmaku_highlights.concept import ConceptMap
from danmaku_highlights.corpus import CommentStream
from danmaku_highlights.detect import (Shot, baseline_select, budget, concept_weights, emotion_concentration,
                                       emotion_distribution, score_shots, segment, select_highlights,
                                       shot_importance, topic_concentration, topic_distribution)
from danmaku_highlights.embedding import EmbeddingStore
from danmaku_highlights.errors import ConfigError
from danmaku_highlights.lexicon import EMOTIONS, EmotionLexicon

from conftest import stream_of

LEX = EmotionLexicon({"joy": "happy", "tears": "sad", "scary": "fear", "mad": "anger", "wow": "surprise",
                      "yay": "happy"})


def shot_of(texts, index=0):
    s = stream_of([(index * 15 + 1, t) for t in texts])
    return Shot(index, index * 15.0, index * 15.0 + 15, s.comments)


def store_with(counts):
    vecs = {w: np.eye(len(counts))[i] for i, w in enumerate(sorted(counts))}
    return EmbeddingStore(vecs, counts)


# -- segmentation

def test_segment_floor_assignment():
    shots = segment(stream_of([(2, "a"), (14, "b"), (16, "c")]), 15)
    assert [len(s.comments) for s in shots] == [2, 1]
    assert (shots[1].start_s, shots[1].end_s) == (15, 30)


def test_segment_single_shot_and_empty():
    assert len(segment(stream_of([(1, "a"), (3, "b")]), 15)) == 1
    assert segment(CommentStream("v", ()), 15) == []


def test_segment_keeps_empty_shots_and_uses_calibrated_time():
    s = stream_of([(1, "a"), (50, "b")]).with_calibrated_times({1: 31.0})
    shots = segment(s, 15)
    assert [len(x.comments) for x in shots] == [1, 0, 1]


def test_segment_boundary_goes_right():
    assert [len(s.comments) for s in segment(stream_of([(0, "a"), (15, "b")]), 15)] == [1, 1]


def test_segment_grid_too_small():
    with pytest.raises(ConfigError):
        segment(stream_of([(40, "a")]), 15, n_shots=2)


# -- concentrations

def test_emotion_uniform_over_five():
    val = emotion_concentration(shot_of(["joy tears scary mad wow"]), LEX)
    assert val == pytest.approx(1 / (math.log(5) + 0.01))
    assert val == pytest.approx(0.6175, abs=1e-4)


def test_emotion_single_and_none():
    assert emotion_concentration(shot_of(["joy yay", "joy"]), LEX) == pytest.approx(100)
    assert emotion_concentration(shot_of(["plain words"]), LEX) == 0


def test_emotion_counts_occurrences():
    p = emotion_distribution(shot_of(["joy joy tears"]), LEX)
    assert p["happy"] == pytest.approx(2 / 3) and p["sad"] == pytest.approx(1 / 3)


def test_topic_single_two_and_empty():
    store = store_with({"a": 50, "b": 50, "c": 50})
    assert topic_concentration(shot_of(["a a"]), ConceptMap.identity("abc"), store) == pytest.approx(100)
    two = topic_concentration(shot_of(["a b"]), ConceptMap.identity("abc"), store)
    assert two == pytest.approx(1 / (math.log(2) + 0.01))
    assert two == pytest.approx(1.4222, abs=1e-4)
    assert topic_concentration(Shot(0, 0, 15, ()), ConceptMap.identity("abc"), store) == 0


def test_topic_weights_by_inverse_log_count():
    store = store_with({"a": 100, "b": 1000})
    u = concept_weights(shot_of(["a a b"]), ConceptMap({"a": "k", "b": "k"}), store)
    assert u == {"k": pytest.approx(2 / math.log(100) + 1 / math.log(1000))}


def test_strict_topic_uses_only_lexicon_words():
    store = store_with({"joy": 50, "tears": 50, "a": 50})
    cmap = ConceptMap.identity(["joy", "tears", "a"])
    shot = shot_of(["joy a"])
    assert topic_concentration(shot, cmap, store) == pytest.approx(1 / (math.log(2) + 0.01))
    assert topic_concentration(shot, cmap, store, strict_lexicon=LEX) == pytest.approx(100)


# -- importance

def test_importance_examples():
    s = shot_importance(20, 100, 1.4225, 0.9)
    assert s.j_comment == pytest.approx(90.14225)
    # 90.14225 * ln 20 = 270.042 (a quoted 270.06 is a rounding slip)
    assert s.importance == pytest.approx(90.14225 * math.log(20))
    assert s.importance == pytest.approx(270.04, abs=0.01)
    assert shot_importance(5, 7.0, 3.0, 1.0).j_comment == 7.0
    assert shot_importance(5, 7.0, 3.0, 0.0).j_comment == 3.0
    assert shot_importance(1, 100, 100).importance == 0
    assert shot_importance(0, 100, 100).importance == 0


def test_bad_lambda():
    with pytest.raises(ConfigError):
        shot_importance(3, 1, 1, 1.5)


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 100), st.floats(0, 100), st.floats(0, 100), st.floats(0.01, 1))
def test_j_monotone_in_emotion(c_e, extra, c_t, lam):
    assert shot_importance(3, c_e + extra, c_t, lam).j_comment >= shot_importance(3, c_e, c_t, lam).j_comment


texts = st.lists(st.lists(st.sampled_from(["joy", "tears", "wow", "a", "b", "c"]), min_size=1, max_size=4)
                 .map(" ".join), min_size=1, max_size=6)


@settings(max_examples=60, deadline=None)
@given(texts)
def test_duplication_invariance(rows):
    store = store_with({w: 20 + 13 * i for i, w in enumerate(["joy", "tears", "wow", "a", "b", "c"])})
    cmap = ConceptMap({"joy": "joy", "tears": "joy", "wow": "wow", "a": "a", "b": "a", "c": "c"})
    once, twice = shot_of(rows), shot_of(rows * 2)
    [s1], [s2] = score_shots([once], LEX, cmap, store), score_shots([twice], LEX, cmap, store)
    assert s2.c_emotion == pytest.approx(s1.c_emotion)
    assert s2.c_topic == pytest.approx(s1.c_topic)
    if s1.importance > 0:
        assert s2.importance > s1.importance
    for dist in (emotion_distribution(once, LEX), topic_distribution(once, cmap, store)):
        if dist:
            assert all(0 <= p <= 1 for p in dist.values())
            assert sum(dist.values()) == pytest.approx(1, abs=1e-9)


# -- selection

def test_budget():
    assert budget(0.29, 100) == 29
    assert budget(0.01, 10) == 1
    assert budget(1.0, 7) == 7
    with pytest.raises(ConfigError):
        budget(0, 10)


def test_select_examples():
    assert [h.shot_index for h in select_highlights([3, 1, 2], 2 / 3)] == [0, 2]
    assert [h.shot_index for h in select_highlights([4, 4, 4], 1 / 3)] == [0]
    h = select_highlights([0, 5], 0.5, l_scene=15, candidate_len_s=15)[0]
    assert (h.start_s, h.end_s, h.importance) == (15, 30, 5)


def brute_force(importances, k):
    best = max(itertools.combinations(range(len(importances)), k),
               key=lambda sub: (sum(importances[i] for i in sub), [-i for i in sub]))
    return sum(importances[i] for i in best)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 6).map(float), min_size=1, max_size=12), st.floats(0.01, 1))
def test_select_matches_subset_search(imp, tau):
    chosen = select_highlights(imp, tau)
    k = budget(tau, len(imp))
    assert len(chosen) == k == len({h.shot_index for h in chosen})
    assert sum(h.importance for h in chosen) == brute_force(imp, k)
    assert [h.start_s for h in chosen] == sorted(h.start_s for h in chosen)


def shots_with_counts(counts):
    return [Shot(i, i * 15.0, i * 15.0 + 15, shot_of(["x"] * c, i).comments if c else ()) for i, c in
            enumerate(counts)]


def test_baselines():
    shots = shots_with_counts([5, 9, 9, 1])
    assert [h.shot_index for h in baseline_select("spike", shots, 0.5)] == [1, 2]
    ten = shots_with_counts([1] * 10)
    assert [h.shot_index for h in baseline_select("uniform", ten, 0.2)] == [0, 5]
    a = baseline_select("random", ten, 0.3, seed=4)
    assert a == baseline_select("random", ten, 0.3, seed=4)
    assert len(a) == 3 and len({h.shot_index for h in a}) == 3
    assert sorted(h.shot_index for h in a) == sorted(random.Random(4).sample(range(10), 3))
    with pytest.raises(ConfigError):
        baseline_select("oracle", ten, 0.3)
