import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from danmaku_highlights.corpus import load_stream, load_streams, normalize_token, shot_index
from danmaku_highlights.errors import ConfigError, DataError


@pytest.mark.parametrize("raw, expected", [
    ("66666", "66"),
    ("abc", "abc"),
    ("2333333", "233"),
    ("哈哈哈哈哈", "哈哈"),
    ("aa", "aa"),
    ("", ""),
    ("LOOOL", "lool"),
    ("aaAA", "aa"),
])
def test_normalize_token(raw, expected):
    assert normalize_token(raw) == expected


@given(st.text())
def test_normalize_idempotent(s):
    once = normalize_token(s)
    assert normalize_token(once) == once


@given(st.text())
def test_normalize_leaves_no_triple_runs(s):
    out = normalize_token(s)
    assert not any(out[i] == out[i + 1] == out[i + 2] for i in range(len(out) - 2))


def _write(tmp_path, records, name="s.jsonl"):
    p = tmp_path / name
    p.write_text("".join((r if isinstance(r, str) else json.dumps(r, ensure_ascii=False)) + "\n" for r in records),
                 encoding="utf-8")
    return p


def test_load_sorts_and_tokenizes(tmp_path):
    p = _write(tmp_path, [
        {"video_id": "v", "t": 9.5, "text": "b c"},
        {"video_id": "v", "t": 1.0, "text": "ignored", "tokens": ["哈哈哈哈", "X"]},
        {"video_id": "v", "t": 3.0, "text": "a"},
    ])
    s = load_stream(p)
    assert [c.time_s for c in s] == [1.0, 3.0, 9.5]
    assert s.comments[0].tokens == ("哈哈", "x")
    assert s.comments[2].tokens == ("b", "c")
    assert all(c.calibrated_time_s == c.time_s for c in s)
    assert sorted(c.id for c in s) == [0, 1, 2]


def test_negative_timestamp_names_record(tmp_path):
    p = _write(tmp_path, [{"video_id": "v", "t": 1, "text": "a"}, {"video_id": "v", "t": -1, "text": "b"}])
    with pytest.raises(DataError, match=r":2:.*negative"):
        load_stream(p)


def test_malformed_line_names_line(tmp_path):
    p = _write(tmp_path, [{"video_id": "v", "t": 1, "text": "a"}, "{not json"])
    with pytest.raises(DataError, match=r":2:"):
        load_stream(p)


def test_missing_field(tmp_path):
    p = _write(tmp_path, [{"video_id": "v", "text": "a"}])
    with pytest.raises(DataError, match="'t'"):
        load_stream(p)


def test_punctuation_run_kept(tmp_path):
    p = _write(tmp_path, [{"video_id": "v", "t": 0, "text": "!!!!!"}])
    assert load_stream(p).comments[0].tokens == ("!!",)


def test_empty_comments_dropped(tmp_path):
    p = _write(tmp_path, [{"video_id": "v", "t": 0, "text": "   "}, {"video_id": "v", "t": 1, "text": "x"}])
    s = load_stream(p)
    assert len(s) == 1 and s.comments[0].id == 1


def test_ties_broken_by_id(tmp_path):
    p = _write(tmp_path, [{"video_id": "v", "t": 2, "text": "a", "id": 7}, {"video_id": "v", "t": 2, "text": "b", "id": 3}])
    assert [c.id for c in load_stream(p)] == [3, 7]


def test_duplicate_ids_rejected(tmp_path):
    p = _write(tmp_path, [{"video_id": "v", "t": 2, "text": "a", "id": 1}, {"video_id": "v", "t": 3, "text": "b", "id": 1}])
    with pytest.raises(DataError, match="duplicate"):
        load_stream(p)


def test_multiple_videos(tmp_path):
    p = _write(tmp_path, [{"video_id": "b", "t": 2, "text": "a"}, {"video_id": "a", "t": 3, "text": "b"}])
    assert list(load_streams(p)) == ["a", "b"]
    with pytest.raises(DataError, match="one video"):
        load_stream(p)


@given(st.lists(st.tuples(st.floats(0, 1e4), st.lists(st.sampled_from(["a", "bbb", "!!!", " ", "Zz"]), max_size=3)),
                max_size=20))
def test_load_loses_nothing(tmp_path_factory, rows):
    d = tmp_path_factory.mktemp("s")
    p = _write(d, [{"video_id": "v", "t": t, "text": " ".join(toks)} for t, toks in rows])
    kept = sum(1 for _, toks in rows if " ".join(toks).split())
    streams = load_streams(p)
    s = streams.get("v")
    assert (len(s) if s else 0) == kept
    if s:
        keys = [(c.time_s, c.id) for c in s]
        assert keys == sorted(keys)


@pytest.mark.parametrize("t, expected", [(0.0, 0), (14.99, 0), (15.0, 1), (29.999, 1), (30.0, 2)])
def test_shot_index(t, expected):
    assert shot_index(t, 15) == expected


@pytest.mark.parametrize("bad", [0, -15])
def test_shot_index_bad_length(bad):
    with pytest.raises(ConfigError):
        shot_index(3.0, bad)


@given(st.floats(0, 1e6), st.floats(0.1, 100))
def test_shot_index_half_open(t, l):
    k = shot_index(t, l)
    assert k * l <= t + 1e-9 * max(1, t)
    assert t < (k + 1) * l
