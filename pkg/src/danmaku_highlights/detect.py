"""Shot segmentation, emotion/topic concentration scoring and highlight selection."""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .concept import ConceptMap
from .corpus import Comment, CommentStream, check_l_scene, shot_index
from .embedding import EmbeddingStore
from .errors import ConfigError
from .lexicon import EmotionLexicon

DELTA_ENT = 0.01
CANDIDATE_LEN_S = 15.0
BASELINES = ("random", "uniform", "spike")


@dataclass(frozen=True)
class Shot:
    index: int
    start_s: float
    end_s: float
    comments: tuple[Comment, ...]

    def tokens(self):
        for c in self.comments:
            yield from c.tokens


@dataclass(frozen=True)
class ShotScore:
    c_emotion: float
    c_topic: float
    j_comment: float
    importance: float


@dataclass(frozen=True)
class Highlight:
    shot_index: int
    start_s: float
    end_s: float
    importance: float


def segment(stream: CommentStream, l_scene: float = 15.0, n_shots: int | None = None) -> list[Shot]:
    """Bucket comments into fixed-width shots by calibrated time.

    Without ``n_shots`` the grid ends at the shot holding the latest
    calibrated comment; empty shots in between are kept.
    """
    check_l_scene(l_scene)
    if not stream.comments and n_shots is None:
        return []
    buckets: dict[int, list[Comment]] = {}
    for c in stream.comments:
        buckets.setdefault(shot_index(c.calibrated_time_s, l_scene), []).append(c)
    needed = max(buckets) + 1 if buckets else 0
    if n_shots is None:
        n_shots = needed
    elif n_shots < needed:
        raise ConfigError(f"n_shots={n_shots} does not cover comments up to shot {needed - 1}")
    return [
        Shot(k, k * l_scene, (k + 1) * l_scene,
             tuple(sorted(buckets.get(k, ()), key=lambda c: (c.calibrated_time_s, c.id))))
        for k in range(n_shots)
    ]


def _entropy(weights: Sequence[float]) -> float:
    total = sum(weights)
    return -sum((w / total) * math.log(w / total) for w in weights if w > 0)


def emotion_distribution(shot: Shot, lexicon: EmotionLexicon) -> dict[str, float]:
    counts = Counter(lexicon.emotion_of(w) for w in shot.tokens() if w in lexicon)
    total = sum(counts.values())
    if total == 0:
        return {}
    return {e: counts.get(e, 0) / total for e in lexicon.emotions}


def emotion_concentration(shot: Shot, lexicon: EmotionLexicon, delta_ent: float = DELTA_ENT) -> float:
    """Reciprocal (smoothed) entropy of the shot's emotion-token distribution; 0 without emotion tokens."""
    p = emotion_distribution(shot, lexicon)
    if not p:
        return 0.0
    return 1.0 / (_entropy(list(p.values())) + delta_ent)


def concept_weights(shot: Shot, cmap: ConceptMap, store: EmbeddingStore,
                    strict_lexicon: EmotionLexicon | None = None) -> dict[str, float]:
    """Per-concept sum of n_w / ln(N(w)).  With ``strict_lexicon`` only its words count."""
    n_w = Counter(shot.tokens())
    u: dict[str, float] = {}
    for w in sorted(n_w):
        if strict_lexicon is not None and w not in strict_lexicon:
            continue
        k = cmap[w]
        u[k] = u.get(k, 0.0) + n_w[w] * store.inverse_log_count(w)
    return u


def topic_distribution(shot: Shot, cmap: ConceptMap, store: EmbeddingStore,
                       strict_lexicon: EmotionLexicon | None = None) -> dict[str, float]:
    u = concept_weights(shot, cmap, store, strict_lexicon)
    total = sum(u.values())
    return {k: v / total for k, v in u.items()} if total > 0 else {}


def topic_concentration(shot: Shot, cmap: ConceptMap, store: EmbeddingStore, delta_ent: float = DELTA_ENT,
                        strict_lexicon: EmotionLexicon | None = None) -> float:
    u = concept_weights(shot, cmap, store, strict_lexicon)
    if not u:
        return 0.0
    return 1.0 / (_entropy(list(u.values())) + delta_ent)


def shot_importance(shot: Shot | int, c_e: float, c_t: float, lam: float = 0.9) -> ShotScore:
    """Mix the concentrations with weight ``lam`` and scale by ln(#comments).

    ``shot`` may be a Shot or a plain comment count.
    """
    if not 0 <= lam <= 1:
        raise ConfigError(f"lambda must lie in [0, 1], got {lam}")
    n = shot if isinstance(shot, int) else len(shot.comments)
    j = lam * c_e + (1 - lam) * c_t
    importance = j * math.log(n) if n >= 2 else 0.0
    return ShotScore(c_e, c_t, j, importance)


def score_shots(shots: Sequence[Shot], lexicon: EmotionLexicon, cmap: ConceptMap, store: EmbeddingStore,
                lam: float = 0.9, delta_ent: float = DELTA_ENT, eq5_strict: bool = False) -> list[ShotScore]:
    strict = lexicon if eq5_strict else None
    return [
        shot_importance(s, emotion_concentration(s, lexicon, delta_ent),
                        topic_concentration(s, cmap, store, delta_ent, strict), lam)
        for s in shots
    ]


def budget(tau_highlight: float, n_shots: int) -> int:
    """Number of shots to keep: floor(tau*N), at least 1, at most N."""
    if not 0 < tau_highlight <= 1:
        raise ConfigError(f"tau_highlight must lie in (0, 1], got {tau_highlight}")
    # tolerance absorbs products like 0.29*100 = 28.999999999999996
    return min(n_shots, max(1, math.floor(tau_highlight * n_shots + 1e-9)))


def _as_highlights(chosen, values, l_scene, candidate_len_s) -> list[Highlight]:
    return [Highlight(i, i * l_scene, i * l_scene + candidate_len_s, float(values[i])) for i in sorted(chosen)]


def select_highlights(importances: Sequence[float], tau_highlight: float, l_scene: float = 15.0,
                      candidate_len_s: float = CANDIDATE_LEN_S) -> list[Highlight]:
    """Top-k shots by importance (earlier shot wins ties), returned in time order."""
    if not importances:
        raise ValueError("no shots to select from")
    k = budget(tau_highlight, len(importances))
    chosen = sorted(range(len(importances)), key=lambda i: (-importances[i], i))[:k]
    return _as_highlights(chosen, importances, l_scene, candidate_len_s)


def baseline_select(method: str, shots: Sequence[Shot], tau_highlight: float, seed: int = 0,
                    l_scene: float = 15.0, candidate_len_s: float = CANDIDATE_LEN_S) -> list[Highlight]:
    """Random, uniform or spike (most comments) selection; scores are comment counts."""
    if method not in BASELINES:
        raise ConfigError(f"unknown baseline {method!r}; choose from {', '.join(BASELINES)}")
    if not shots:
        raise ValueError("no shots to select from")
    n = len(shots)
    k = budget(tau_highlight, n)
    counts = [len(s.comments) for s in shots]
    if method == "random":
        chosen = random.Random(seed).sample(range(n), k)
    elif method == "uniform":
        chosen = [i * n // k for i in range(k)]
    else:
        chosen = sorted(range(n), key=lambda i: (-counts[i], i))[:k]
    return _as_highlights(chosen, counts, l_scene, candidate_len_s)


def format_highlights(highlights: Sequence[Highlight]) -> str:
    return "".join(f"{h.start_s!r}\t{h.end_s!r}\t{h.importance!r}\t{h.shot_index}\n" for h in highlights)

