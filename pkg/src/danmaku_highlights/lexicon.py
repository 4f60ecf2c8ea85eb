"""Emotion lexicon bootstrapped from seed words by embedding-neighborhood expansion."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .embedding import EmbeddingStore
from .errors import DataError

EMOTIONS = ("happy", "sad", "fear", "anger", "surprise")


@dataclass(frozen=True)
class EmotionLexicon:
    labels: Mapping[str, str]
    seeds: Mapping[str, frozenset] = field(default_factory=dict)
    emotions: tuple[str, ...] = EMOTIONS

    def __post_init__(self):
        bad = sorted({e for e in self.labels.values() if e not in self.emotions})
        if bad:
            raise DataError(f"unknown emotion label(s): {', '.join(bad)}")

    def __contains__(self, word):
        return word in self.labels

    def __len__(self):
        return len(self.labels)

    def emotion_of(self, word: str) -> str | None:
        return self.labels.get(word)

    def members(self, emotion: str) -> list[str]:
        return sorted(w for w, e in self.labels.items() if e == emotion)


def expand_lexicon(seeds: Mapping[str, Iterable[str]], store: EmbeddingStore, gamma_overlap: float = 0.05,
                   sim_min: float = 0.6, top_n_exp: int = 15, rounds: int = 1,
                   stop_list: Iterable[str] = (), emotions: tuple[str, ...] | None = None) -> EmotionLexicon:
    """Grow each emotion's word set from its seeds.

    In every pass a candidate (a top-``top_n_exp`` neighbor of some current
    member, not yet labeled and not stop-listed) joins emotion ``e`` when at
    least ``gamma_overlap`` of e's current members have cosine >= ``sim_min``
    with it.  Candidates qualifying for several emotions go to the highest
    ratio; exact ties are left out of that pass.
    """
    if not 0 < gamma_overlap <= 1:
        raise ValueError("gamma_overlap must lie in (0, 1]")
    if not -1 <= sim_min <= 1:
        raise ValueError("sim_min must lie in [-1, 1]")
    if top_n_exp < 1 or rounds < 1:
        raise ValueError("top_n_exp and rounds must be positive")
    emotions = tuple(emotions) if emotions else tuple(e for e in EMOTIONS if e in seeds) + tuple(
        sorted(e for e in seeds if e not in EMOTIONS))
    stop = set(stop_list)

    labels: dict[str, str] = {}
    seed_sets = {}
    missing = []
    for e in emotions:
        words = sorted(set(seeds.get(e, ())))
        missing.extend(w for w in words if w not in store)
        for w in words:
            if w in labels and labels[w] != e:
                raise DataError(f"seed {w!r} listed under both {labels[w]!r} and {e!r}")
            if w in stop:
                raise DataError(f"seed {w!r} is on the stop list")
            labels[w] = e
        seed_sets[e] = frozenset(words)
    if missing:
        raise DataError("seed words missing from the embedding: " + ", ".join(sorted(missing)))
    empty = [e for e in emotions if not seed_sets[e]]
    if empty:
        raise DataError("no seeds for emotion(s): " + ", ".join(empty))

    for _ in range(rounds):
        members = {e: sorted(w for w, lab in labels.items() if lab == e) for e in emotions}
        ratios: dict[str, dict[str, float]] = {}
        for e in emotions:
            pool = set()
            for m in members[e]:
                pool.update(w for w, _ in store.top_n_neighbors(m, top_n_exp))
            for w in sorted(pool - labels.keys() - stop):
                hits = sum(1 for m in members[e] if store.cosine(w, m) >= sim_min)
                ratio = hits / len(members[e])
                if ratio >= gamma_overlap:
                    ratios.setdefault(w, {})[e] = ratio
        accepted = {}
        for w in sorted(ratios):
            by_e = ratios[w]
            best = max(by_e.values())
            winners = [e for e, r in by_e.items() if r == best]
            if len(winners) == 1:
                accepted[w] = winners[0]
        if not accepted:
            break
        labels.update(accepted)
    return EmotionLexicon(labels=labels, seeds=seed_sets, emotions=emotions)


def read_labeled_words(path: str | Path) -> list[tuple[str, str]]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise DataError(f"{path}:{lineno}: expected 'word<TAB>emotion'")
            rows.append((parts[0], parts[1].strip()))
    return rows


def load_seeds(path: str | Path) -> dict[str, set[str]]:
    seeds: dict[str, set[str]] = {}
    for w, e in read_labeled_words(path):
        seeds.setdefault(e, set()).add(w)
    return seeds


def load_lexicon(path: str | Path, emotions: tuple[str, ...] = EMOTIONS) -> EmotionLexicon:
    labels = {}
    for w, e in read_labeled_words(path):
        if labels.get(w, e) != e:
            raise DataError(f"{path}: word {w!r} carries two emotions")
        labels[w] = e
    return EmotionLexicon(labels=labels, emotions=emotions)


def write_lexicon(lexicon: EmotionLexicon, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for e in lexicon.emotions:
            for w in lexicon.members(e):
                fh.write(f"{w}\t{e}\n")


def load_stop_list(path: str | Path) -> set[str]:
    with open(path, encoding="utf-8") as fh:
        return {line.strip() for line in fh if line.strip()}
