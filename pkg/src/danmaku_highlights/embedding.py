"""Pre-trained word vectors plus global corpus counts, with exact cosine kNN."""

from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import DataError, OOVError

log = logging.getLogger(__name__)

DEFAULT_COUNT = 3
COUNT_FLOOR = 2


class EmbeddingStore:
    """Immutable word -> (unit vector, count) table.

    Vectors are held L2-normalized so cosine is a dot product.  Neighbor
    search is a linear scan; ties are broken by word so results never depend
    on insertion order.
    """

    def __init__(self, vectors: Mapping[str, Iterable[float]], counts: Mapping[str, int] | None = None,
                 default_count: int = DEFAULT_COUNT):
        if default_count < COUNT_FLOOR:
            raise ValueError(f"default_count must be >= {COUNT_FLOOR}")
        self.default_count = int(default_count)
        words = sorted(vectors)
        mat = np.array([np.asarray(vectors[w], dtype=np.float64) for w in words], dtype=np.float64)
        if mat.ndim != 2:
            if len(words) == 0:
                mat = mat.reshape(0, 0)
            else:
                raise ValueError("vectors must share one dimensionality")
        norms = np.linalg.norm(mat, axis=1) if len(words) else np.zeros(0)
        if np.any(norms == 0):
            raise ValueError("zero-norm vector")
        self.words: tuple[str, ...] = tuple(words)
        self.dim = mat.shape[1] if len(words) else 0
        self._unit = mat / norms[:, None] if len(words) else mat
        self._index = {w: i for i, w in enumerate(words)}
        counts = counts or {}
        self._counts = {w: int(counts.get(w, self.default_count)) for w in words}

    def __len__(self):
        return len(self.words)

    def __contains__(self, word):
        return word in self._index

    def _row(self, word: str) -> np.ndarray:
        try:
            return self._unit[self._index[word]]
        except KeyError:
            raise OOVError(word) from None

    def vector(self, word: str) -> np.ndarray:
        return self._row(word).copy()

    def count(self, word: str) -> int:
        """Stored count, without the floor applied."""
        if word not in self._counts:
            raise OOVError(word)
        return self._counts[word]

    def cosine(self, w1: str, w2: str) -> float:
        sim = float(np.dot(self._row(w1), self._row(w2)))
        return min(1.0, max(-1.0, sim))

    def top_n_neighbors(self, word: str, n: int) -> list[tuple[str, float]]:
        """The ``n`` most cosine-similar other words, best first."""
        if n < 0:
            raise ValueError("n must be non-negative")
        query = self._row(word)
        if n == 0 or len(self.words) <= 1:
            return []
        sims = self._unit @ query
        sims[self._index[word]] = -np.inf
        n = min(n, len(self.words) - 1)
        # everything tied with the n-th best survives the cut, then word order decides
        cut = np.partition(sims, -n)[-n]
        cand = np.flatnonzero(sims >= cut)
        cand = sorted(cand, key=lambda i: (-sims[i], self.words[i]))[:n]
        return [(self.words[i], min(1.0, max(-1.0, float(sims[i])))) for i in cand]

    def global_count(self, word: str) -> int:
        """Corpus frequency floored at 2, so ``1/ln`` of it is always finite."""
        return max(self._counts.get(word, self.default_count), COUNT_FLOOR)

    def inverse_log_count(self, word: str) -> float:
        return 1.0 / math.log(self.global_count(word))

    def restricted(self, words: Iterable[str]) -> "EmbeddingStore":
        """Sub-store over the in-vocabulary subset of ``words``.

        Counts are carried over so global_count answers are unchanged.
        """
        keep = sorted({w for w in words if w in self._index})
        sub = EmbeddingStore.__new__(EmbeddingStore)
        sub.default_count = self.default_count
        sub.words = tuple(keep)
        sub.dim = self.dim
        idx = [self._index[w] for w in keep]
        sub._unit = self._unit[idx] if keep else np.zeros((0, self.dim))
        sub._index = {w: i for i, w in enumerate(keep)}
        sub._counts = dict(self._counts)
        return sub


def _read_counts(path) -> dict[str, int]:
    counts = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise DataError(f"{path}:{lineno}: expected 'word<TAB>count'")
            try:
                c = int(parts[1])
            except ValueError:
                raise DataError(f"{path}:{lineno}: count is not an integer") from None
            if c < 1:
                raise DataError(f"{path}:{lineno}: count must be >= 1")
            counts[parts[0]] = c
    return counts


def load_embeddings(vectors_path: str | Path, counts_path: str | Path | None = None,
                    default_count: int = DEFAULT_COUNT) -> EmbeddingStore:
    """Read word2vec text format (header ``V D``) and an optional counts file."""
    vectors: dict[str, list[float]] = {}
    with open(vectors_path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2 or not all(h.isdigit() for h in header):
            raise DataError(f"{vectors_path}:1: header must be 'vocab_size dim'")
        n_words, dim = int(header[0]), int(header[1])
        if dim <= 0:
            raise DataError(f"{vectors_path}:1: dimension must be positive")
        seen_lines = 0
        for lineno, line in enumerate(fh, 2):
            if not line.strip():
                continue
            seen_lines += 1
            parts = line.rstrip("\n").rstrip().split(" ")
            if len(parts) != dim + 1:
                raise DataError(f"{vectors_path}:{lineno}: expected {dim} components, got {len(parts) - 1}")
            word = parts[0]
            try:
                vec = [float(x) for x in parts[1:]]
            except ValueError:
                raise DataError(f"{vectors_path}:{lineno}: non-numeric component") from None
            if not all(math.isfinite(x) for x in vec):
                raise DataError(f"{vectors_path}:{lineno}: non-finite component")
            if not any(vec):
                log.warning("%s:%d: zero-norm vector for %r, word dropped", vectors_path, lineno, word)
                continue
            if word in vectors:
                log.warning("%s:%d: duplicate word %r, keeping the last vector", vectors_path, lineno, word)
            vectors[word] = vec
    if seen_lines != n_words:
        raise DataError(f"{vectors_path}: header announces {n_words} words, file has {seen_lines}")
    counts = _read_counts(counts_path) if counts_path else None
    return EmbeddingStore(vectors, counts, default_count=default_count)


def write_word2vec(vectors: Mapping[str, Iterable[float]], path: str | Path) -> None:
    words = sorted(vectors)
    rows = [[float(x) for x in vectors[w]] for w in words]
    dim = len(rows[0]) if rows else 0
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(words)} {dim}\n")
        for w, row in zip(words, rows):
            fh.write(w + " " + " ".join(repr(x) for x in row) + "\n")


def write_counts(counts: Mapping[str, int], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for w in sorted(counts):
            fh.write(f"{w}\t{int(counts[w])}\n")
