"""Word -> concept mapping by agglomerating embedding neighborhoods."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .embedding import EmbeddingStore
from .errors import ConfigError


@dataclass(frozen=True)
class ConceptMap:
    """A concept id is the word that founded the concept.

    Words the map was not built for are treated as their own concept.
    """

    mapping: Mapping[str, str]

    def __getitem__(self, word: str) -> str:
        return self.mapping.get(word, word)

    def __contains__(self, word):
        return word in self.mapping

    def __len__(self):
        return len(self.mapping)

    def concepts(self) -> set[str]:
        return set(self.mapping.values())

    @classmethod
    def identity(cls, words: Iterable[str]) -> "ConceptMap":
        return cls({w: w for w in words})

    def dump(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for w in sorted(self.mapping):
                fh.write(f"{w}\t{self.mapping[w]}\n")


def build_concept_map(stream_vocab: Iterable[str], store: EmbeddingStore, top_n: int = 15,
                      phi_overlap: float = 0.5, on_assign=None) -> ConceptMap:
    """Assign every vocabulary word a concept.

    Words are visited by descending global count (ties by word).  An
    unassigned word looks at its ``top_n`` nearest in-vocabulary neighbors; if
    some concept already holds at least ``phi_overlap`` of them, the word and
    its still-unassigned neighbors join it, otherwise they found a new concept
    named after the word.  Out-of-vocabulary words are their own concept.

    ``on_assign(word, concept)`` is called once per assignment if given.
    """
    if top_n < 1:
        raise ConfigError(f"top_n must be positive, got {top_n}")
    if not 0 < phi_overlap <= 1:
        raise ConfigError(f"phi_overlap must lie in (0, 1], got {phi_overlap}")
    vocab = sorted(set(stream_vocab))
    local = store.restricted(vocab)
    order = sorted(vocab, key=lambda w: (-store.global_count(w), w))
    assigned: dict[str, str] = {}

    def assign(word, concept):
        assigned[word] = concept
        if on_assign is not None:
            on_assign(word, concept)

    for w0 in order:
        if w0 in assigned:
            continue
        if w0 not in local:
            assign(w0, w0)
            continue
        neighbors = [w for w, _ in local.top_n_neighbors(w0, top_n)]
        target = w0
        if neighbors:
            held = Counter(assigned[w] for w in neighbors if w in assigned)
            passing = [(cnt / len(neighbors), k) for k, cnt in held.items() if cnt / len(neighbors) >= phi_overlap]
            if passing:
                target = min(passing, key=lambda fk: (-fk[0], fk[1]))[1]
        assign(w0, target)
        for w in neighbors:
            if w not in assigned:
                assign(w, target)
    return ConceptMap(dict(sorted(assigned.items())))
