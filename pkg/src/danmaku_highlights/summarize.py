"""SumBasic with word + concept probability tracks and an emotion bias."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .concept import ConceptMap
from .detect import Shot
from .errors import ConfigError
from .lexicon import EmotionLexicon


@dataclass(frozen=True)
class SummaryConfig:
    tau_summary: float
    b_emotion: float = 0.3

    def __post_init__(self):
        if not 0 < self.tau_summary <= 1:
            raise ConfigError(f"tau_summary must lie in (0, 1], got {self.tau_summary}")
        if self.b_emotion < 0:
            raise ConfigError(f"b_emotion must be non-negative, got {self.b_emotion}")


@dataclass(frozen=True)
class Summary:
    shot_index: int
    selected: tuple[int, ...]


def summary_budget(tau_summary: float, n_comments: int) -> int:
    # tolerance keeps 0.3*10 from rounding up to 4
    return min(n_comments, max(1, math.ceil(tau_summary * n_comments - 1e-9)))


class _Tracks:
    """Word and concept probabilities stored in shared cells.

    A concept with a single member word in the shot is the same unit as that
    word, so both levels of the update land on one cell.  With the identity
    concept map this makes every word squared twice per pick.
    """

    def __init__(self, comments, cmap: ConceptMap, lexicon: EmotionLexicon, b_emotion: float):
        counts = Counter(w for c in comments for w in c.tokens)
        f = {w: n * (1 + b_emotion * (w in lexicon)) for w, n in counts.items()}
        total = sum(f.values())
        self.cells: list[float] = []
        self.word_cell: dict[str, int] = {}
        for w in sorted(f):
            self.word_cell[w] = len(self.cells)
            self.cells.append(f[w] / total)
        members: dict[str, list[str]] = {}
        for w in sorted(f):
            members.setdefault(cmap[w], []).append(w)
        self.concept_cell: dict[str, int] = {}
        for k in sorted(members):
            ws = members[k]
            if len(ws) == 1:
                self.concept_cell[k] = self.word_cell[ws[0]]
            else:
                self.concept_cell[k] = len(self.cells)
                self.cells.append(sum(f[w] for w in ws) / total)
        self.cmap = cmap

    def p_word(self, w):
        return self.cells[self.word_cell[w]]

    def p_concept(self, k):
        return self.cells[self.concept_cell[k]]

    def comment_score(self, tokens) -> float:
        return sum(0.5 * (self.p_word(w) + self.p_concept(self.cmap[w])) for w in tokens) / len(tokens)

    def top_concept(self) -> str:
        return min(self.concept_cell, key=lambda k: (-self.p_concept(k), k))

    def squash(self, tokens) -> None:
        words = set(tokens)
        for w in words:
            self.cells[self.word_cell[w]] **= 2
        for k in {self.cmap[w] for w in words}:
            self.cells[self.concept_cell[k]] **= 2


def initial_probabilities(shot: Shot, cmap: ConceptMap, lexicon: EmotionLexicon,
                          b_emotion: float) -> tuple[dict[str, float], dict[str, float]]:
    """(p_word, p_concept) before any pick."""
    t = _Tracks(shot.comments, cmap, lexicon, b_emotion)
    return ({w: t.p_word(w) for w in t.word_cell}, {k: t.p_concept(k) for k in t.concept_cell})


def summarize_shot(shot: Shot, cmap: ConceptMap, lexicon: EmotionLexicon, config: SummaryConfig) -> Summary:
    """Greedy extractive summary of one shot's comments.

    Each round picks the most probable concept, takes the best-scoring unpicked
    comment mentioning it (falling back to the best comment overall), then
    squares the probabilities of the words and concepts it covered.
    """
    if not shot.comments:
        raise ValueError(f"shot {shot.index} has no comments to summarize")
    tracks = _Tracks(shot.comments, cmap, lexicon, config.b_emotion)
    n = summary_budget(config.tau_summary, len(shot.comments))
    remaining = list(shot.comments)
    picked: list[int] = []
    while len(picked) < n and remaining:
        target = tracks.top_concept()
        pool = [c for c in remaining if any(cmap[w] == target for w in c.tokens)] or remaining
        # rounding lets mathematically equal means (e.g. "a a" vs "a") tie exactly
        best = min(pool, key=lambda c: (-round(tracks.comment_score(c.tokens), 12), c.calibrated_time_s, c.id))
        picked.append(best.id)
        remaining.remove(best)
        tracks.squash(best.tokens)
    return Summary(shot.index, tuple(picked))


def format_summary(shot: Shot, summary: Summary) -> str:
    """Header line then the picked comments re-sorted by time."""
    by_id = {c.id: c for c in shot.comments}
    rows = sorted((by_id[i] for i in summary.selected), key=lambda c: (c.time_s, c.id))
    out = [f"{shot.index}\t{shot.start_s!r}\t{shot.end_s!r}\n"]
    for c in rows:
        text = " ".join(c.raw_text.split())
        out.append(f"{c.id}\t{c.time_s!r}\t{text}\n")
    return "".join(out)


def summarize_shots(shots: Sequence[Shot], cmap, lexicon, config: SummaryConfig) -> list[Summary]:
    return [summarize_shot(s, cmap, lexicon, config) for s in shots if s.comments]
