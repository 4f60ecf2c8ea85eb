"""Loading, token normalization and shot bucketing of time-sync comment streams.

Stream files are JSON lines, one comment per line::

    {"video_id": "av123", "t": 12.5, "text": "233333 哈哈哈哈", "tokens": ["233333", "哈哈哈哈"]}

``tokens`` is optional; without it ``text`` is split on whitespace.  An integer
``id`` field is honored when present, otherwise ids are assigned per video in
file order.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ConfigError, DataError

_RUN = re.compile(r"(.)\1{2,}", re.DOTALL)


def normalize_token(raw: str) -> str:
    """Lowercase and squeeze every run of 3+ identical characters down to 2.

    >>> normalize_token("2333333")
    '233'
    """
    return _RUN.sub(r"\1\1", raw.lower())


@dataclass(frozen=True)
class Comment:
    id: int
    video_id: str
    time_s: float
    raw_text: str
    tokens: tuple[str, ...]
    calibrated_time_s: float | None = None

    def __post_init__(self):
        if self.calibrated_time_s is None:
            object.__setattr__(self, "calibrated_time_s", self.time_s)


@dataclass(frozen=True)
class CommentStream:
    video_id: str
    comments: tuple[Comment, ...] = field(default_factory=tuple)

    def __post_init__(self):
        ordered = tuple(sorted(self.comments, key=lambda c: (c.time_s, c.id)))
        object.__setattr__(self, "comments", ordered)
        ids = [c.id for c in ordered]
        if len(set(ids)) != len(ids):
            raise DataError(f"duplicate comment ids in stream {self.video_id!r}")

    def __len__(self):
        return len(self.comments)

    def __iter__(self):
        return iter(self.comments)

    def vocabulary(self) -> list[str]:
        """Distinct tokens in first-occurrence order."""
        seen = {}
        for c in self.comments:
            for w in c.tokens:
                seen.setdefault(w, None)
        return list(seen)

    def with_calibrated_times(self, times: dict[int, float]) -> "CommentStream":
        return CommentStream(
            self.video_id,
            tuple(replace(c, calibrated_time_s=times.get(c.id, c.calibrated_time_s)) for c in self.comments),
        )


def make_comment(id: int, video_id: str, time_s: float, text: str, tokens: Sequence[str] | None = None) -> Comment | None:
    """Build a comment with normalized tokens; ``None`` when nothing survives."""
    raw_tokens = tokens if tokens is not None else text.split()
    normed = tuple(t for t in (normalize_token(x) for x in raw_tokens) if t and not t.isspace())
    if not normed:
        return None
    return Comment(id=id, video_id=video_id, time_s=float(time_s), raw_text=text, tokens=normed)


def _parse_record(line: str, lineno: int, path) -> dict:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}:{lineno}: malformed JSON ({exc.msg})") from None
    if not isinstance(rec, dict):
        raise DataError(f"{path}:{lineno}: expected a JSON object")
    for key in ("video_id", "t", "text"):
        if key not in rec:
            raise DataError(f"{path}:{lineno}: missing field {key!r}")
    t = rec["t"]
    if isinstance(t, bool) or not isinstance(t, (int, float)) or not math.isfinite(t):
        raise DataError(f"{path}:{lineno}: field 't' must be a finite number")
    if t < 0:
        raise DataError(f"{path}:{lineno}: negative timestamp t={t} (video {rec['video_id']!r})")
    tokens = rec.get("tokens")
    if tokens is not None and (not isinstance(tokens, list) or not all(isinstance(x, str) for x in tokens)):
        raise DataError(f"{path}:{lineno}: 'tokens' must be a list of strings")
    if "id" in rec and (isinstance(rec["id"], bool) or not isinstance(rec["id"], int)):
        raise DataError(f"{path}:{lineno}: 'id' must be an integer")
    return rec


def load_streams(path: str | Path) -> dict[str, CommentStream]:
    """Parse a JSON-lines comment file into one stream per video id."""
    grouped: dict[str, list[Comment]] = {}
    next_id: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            rec = _parse_record(line, lineno, path)
            vid = str(rec["video_id"])
            cid = rec.get("id", next_id.get(vid, 0))
            next_id[vid] = max(next_id.get(vid, 0), cid + 1)
            c = make_comment(cid, vid, rec["t"], str(rec["text"]), rec.get("tokens"))
            grouped.setdefault(vid, [])
            if c is not None:
                grouped[vid].append(c)
    try:
        return {vid: CommentStream(vid, tuple(cs)) for vid, cs in sorted(grouped.items())}
    except DataError as exc:
        raise DataError(f"{path}: {exc}") from None


def load_stream(path: str | Path) -> CommentStream:
    """Load a file holding exactly one video's comments."""
    streams = load_streams(path)
    if len(streams) != 1:
        raise DataError(f"{path}: expected one video, found {len(streams)}")
    return next(iter(streams.values()))


def write_stream(stream: CommentStream, path_or_fh, calibrated: bool = False) -> None:
    """Write a stream back out as JSON lines (tokens included)."""
    own = isinstance(path_or_fh, (str, Path))
    fh = open(path_or_fh, "w", encoding="utf-8") if own else path_or_fh
    try:
        for c in stream.comments:
            rec = {"video_id": c.video_id, "id": c.id, "t": c.time_s, "text": c.raw_text, "tokens": list(c.tokens)}
            if calibrated:
                rec["t_calibrated"] = c.calibrated_time_s
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
    finally:
        if own:
            fh.close()


def check_l_scene(l_scene: float) -> None:
    if not l_scene > 0:
        raise ConfigError(f"l_scene must be positive, got {l_scene}")


def shot_index(time_s: float, l_scene: float) -> int:
    """Index of the half-open window [k*l_scene, (k+1)*l_scene) containing time_s."""
    check_l_scene(l_scene)
    if time_s < 0:
        raise DataError(f"negative timestamp {time_s}")
    return int(math.floor(time_s / l_scene))


def iter_tokens(comments: Iterable[Comment]):
    for c in comments:
        yield from c.tokens
