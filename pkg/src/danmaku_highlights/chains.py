"""Per-concept lexical chains over the comment timeline and lag calibration."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .concept import ConceptMap
from .corpus import CommentStream
from .embedding import EmbeddingStore
from .errors import ConfigError, ConsistencyError


@dataclass(frozen=True)
class ChainEntry:
    word: str
    time_s: float
    comment_id: int


@dataclass
class LexicalChain:
    concept: str
    entries: list[ChainEntry] = field(default_factory=list)

    @property
    def head_time(self) -> float:
        return self.entries[0].time_s

    @property
    def last_time(self) -> float:
        return self.entries[-1].time_s

    def __len__(self):
        return len(self.entries)


@dataclass
class ChainIndex:
    chains: dict[str, list[LexicalChain]] = field(default_factory=dict)
    # (concept, comment id) -> the one chain of that concept holding the comment
    by_comment: dict[tuple[str, int], LexicalChain] = field(default_factory=dict)

    def __iter__(self):
        for concept in self.chains:
            yield from self.chains[concept]

    def dump(self, path: str | Path, store: EmbeddingStore) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for ch in self:
                fh.write(f"{ch.concept}\t{ch.head_time!r}\t{ch.last_time!r}\t{len(ch)}\t{chain_score(ch, store)!r}\n")


def build_chains(stream: CommentStream, cmap: ConceptMap, l_max: float = 11.0) -> ChainIndex:
    """Scan comments in time order, extending a concept's latest chain while the
    silence since its last mention is at most ``l_max`` and opening a new one
    otherwise.  Every token occurrence becomes one entry."""
    if not l_max > 0:
        raise ConfigError(f"l_max must be positive, got {l_max}")
    index = ChainIndex()
    for c in stream.comments:
        for word in c.tokens:
            k = cmap[word]
            chains = index.chains.get(k)
            if chains is None:
                chains = index.chains[k] = [LexicalChain(k)]
            elif c.time_s - chains[-1].last_time > l_max:
                chains.append(LexicalChain(k))
            chain = chains[-1]
            chain.entries.append(ChainEntry(word, c.time_s, c.id))
            index.by_comment[(k, c.id)] = chain
    return index


def chain_score(chain: LexicalChain, store: EmbeddingStore) -> float:
    """Sum of 1/ln(global count) over the chain's entries; rare words weigh more."""
    if not chain.entries:
        raise ValueError("empty chain has no score")
    return sum(store.inverse_log_count(e.word) for e in chain.entries)


def calibrate(stream: CommentStream, index: ChainIndex, cmap: ConceptMap, store: EmbeddingStore) -> CommentStream:
    """Move each comment to the head of its highest-scoring chain.

    Equal scores prefer the earlier head, then the smaller concept id.
    """
    scores: dict[int, float] = {}

    def score(ch):
        key = id(ch)
        if key not in scores:
            scores[key] = chain_score(ch, store)
        return scores[key]

    times = {}
    for c in stream.comments:
        best = None
        for k in sorted({cmap[w] for w in c.tokens}):
            ch = index.by_comment.get((k, c.id))
            if ch is None:
                raise ConsistencyError(f"comment {c.id} has no chain for concept {k!r}")
            key = (-score(ch), ch.head_time, k)
            if best is None or key < best[0]:
                best = (key, ch)
        if best is not None:
            times[c.id] = best[1].head_time
    return stream.with_calibrated_times(times)
