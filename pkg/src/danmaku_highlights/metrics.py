"""Highlight hit-with-relaxation P/R/F1 and pooled ROUGE-n / BLEU-n for summaries."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Tokens = Sequence[str]


@dataclass(frozen=True)
class Interval:
    start_s: float
    end_s: float

    def __post_init__(self):
        if not self.start_s < self.end_s:
            raise ValueError(f"empty interval ({self.start_s}, {self.end_s})")


@dataclass
class EvalReport:
    precision: float = 0.0
    recall: float = 0.0
    f1: float = 0.0
    rouge: dict[int, float] = field(default_factory=dict)
    bleu: dict[int, float] = field(default_factory=dict)
    f1_n: dict[int, float] = field(default_factory=dict)

    def as_dict(self) -> dict[str, float]:
        out = {"precision": self.precision, "recall": self.recall, "f1": self.f1}
        for n in sorted(self.rouge):
            out[f"rouge{n}"] = self.rouge[n]
        for n in sorted(self.bleu):
            out[f"bleu{n}"] = self.bleu[n]
        for n in sorted(self.f1_n):
            out[f"f1_{n}"] = self.f1_n[n]
        return out


def hit_eps(h: Interval, refs: Iterable[Interval], eps: float = 5.0) -> int:
    """1 if ``h`` overlaps some reference widened by ``eps`` on both sides (open intervals)."""
    if eps < 0:
        raise ValueError("eps must be non-negative")
    for r in refs:
        if max(h.start_s, r.start_s - eps) < min(h.end_s, r.end_s + eps):
            return 1
    return 0


def harmonic(a: float, b: float) -> float:
    return 0.0 if a + b == 0 else 2 * a * b / (a + b)


def highlight_prf(H: Sequence[Interval], Href: Sequence[Interval], eps: float = 5.0) -> tuple[float, float, float]:
    precision = sum(hit_eps(h, Href, eps) for h in H) / len(H) if H else 0.0
    recall = sum(hit_eps(r, H, eps) for r in Href) / len(Href) if Href else 0.0
    return precision, recall, harmonic(precision, recall)


def ngrams(sentences: Iterable[Tokens], n: int) -> Counter:
    """Pooled n-gram bag; n-grams never straddle two sentences."""
    if n < 1:
        raise ValueError("n must be >= 1")
    bag = Counter()
    for s in sentences:
        s = tuple(s)
        bag.update(s[i:i + n] for i in range(len(s) - n + 1))
    return bag


def _clipped(cand: Counter, ref: Counter) -> int:
    return sum(min(c, ref[g]) for g, c in cand.items())


def rouge_n(candidate: Iterable[Tokens], reference: Iterable[Tokens], n: int = 1) -> float:
    ref = ngrams(reference, n)
    total = sum(ref.values())
    if total == 0:
        return 0.0
    return _clipped(ngrams(candidate, n), ref) / total


def bleu_n(candidate: Iterable[Tokens], reference: Iterable[Tokens], n: int = 1) -> float:
    """Clipped n-gram precision times the brevity penalty (single n, no geometric mean)."""
    candidate = [tuple(s) for s in candidate]
    reference = [tuple(s) for s in reference]
    cand = ngrams(candidate, n)
    total = sum(cand.values())
    if total == 0:
        return 0.0
    c_len = sum(len(s) for s in candidate)
    r_len = sum(len(s) for s in reference)
    bp = 1.0 if c_len > r_len else math.exp(1 - r_len / c_len)
    return bp * _clipped(cand, ngrams(reference, n)) / total


def f1_n(bleu: float, rouge: float) -> float:
    return harmonic(bleu, rouge)


def summary_scores(candidate: Sequence[Tokens], reference: Sequence[Tokens], orders=(1, 2)) -> EvalReport:
    rep = EvalReport()
    for n in orders:
        rep.rouge[n] = rouge_n(candidate, reference, n)
        rep.bleu[n] = bleu_n(candidate, reference, n)
        rep.f1_n[n] = f1_n(rep.bleu[n], rep.rouge[n])
    return rep


def format_report(values: dict[str, float]) -> str:
    return "".join(f"{k}={v:.6f}\n" for k, v in values.items())
