"""Synthetic comment streams with planted highlights and lagged tail comments.

Vocabulary is organised in clusters: background chatter clusters, one topic
cluster per planted highlight and one cluster per emotion.  The toy embedding
gives every cluster its own axis plus a small per-member offset axis, so
cluster-mates sit at cosine ~0.99 and other words at ~0.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import Comment, CommentStream, write_stream
from .embedding import EmbeddingStore, write_counts, write_word2vec
from .errors import ConfigError
from .lexicon import EMOTIONS, EmotionLexicon, write_lexicon
from .metrics import Interval

BG_COUNT = 2000
TOPIC_COUNT = 60
EMOTION_COUNT = 400
OFFSET = 0.1


@dataclass(frozen=True)
class SynthParams:
    video_length_s: float = 600.0
    n_highlights: int = 4
    burst_size: int = 30
    background_rate: float = 0.3
    lag_tail_fraction: float = 0.0
    lag_spread_s: float = 8.0
    emotion_purity: float = 1.0
    seed: int = 0
    l_scene: float = 15.0
    cluster_size: int = 16
    n_background_clusters: int = 8

    def validate(self):
        if self.video_length_s <= 0 or self.l_scene <= 0:
            raise ConfigError("video_length_s and l_scene must be positive")
        if self.n_highlights < 0 or self.burst_size < 1 or self.background_rate < 0:
            raise ConfigError("n_highlights >= 0, burst_size >= 1 and background_rate >= 0 required")
        if not 0 <= self.lag_tail_fraction < 1:
            raise ConfigError("lag_tail_fraction must lie in [0, 1)")
        if self.lag_spread_s <= 0:
            raise ConfigError("lag_spread_s must be positive")
        if not 0 <= self.emotion_purity <= 1:
            raise ConfigError("emotion_purity must lie in [0, 1]")
        if self.cluster_size < 2 or self.n_background_clusters < 1:
            raise ConfigError("cluster_size >= 2 and n_background_clusters >= 1 required")
        return self

    @property
    def n_shots(self) -> int:
        return int(self.video_length_s // self.l_scene)

    @property
    def video_id(self) -> str:
        return f"synth{self.seed}"


@dataclass
class SynthVideo:
    params: SynthParams
    stream: CommentStream
    references: list[Interval]
    planted_shots: list[int]
    store: EmbeddingStore
    lexicon: EmotionLexicon
    vectors: dict[str, np.ndarray] = field(repr=False)
    counts: dict[str, int] = field(repr=False)
    reference_summaries: list[tuple[int, list[str]]] = field(default_factory=list)


def _clusters(params: SynthParams) -> dict[str, list[str]]:
    m = params.cluster_size
    out = {}
    for c in range(params.n_background_clusters):
        out[f"bg{c}"] = [f"bg{c}_{j:02d}" for j in range(m)]
    for c in range(params.n_highlights):
        out[f"topic{c}"] = [f"topic{c}_{j:02d}" for j in range(m)]
    for e in EMOTIONS:
        out[e] = [f"{e}_{j:02d}" for j in range(m)]
    return out


def toy_embedding(params: SynthParams):
    """Vectors, counts, store and lexicon; depends only on the vocabulary shape."""
    clusters = _clusters(params)
    n_c, m = len(clusters), params.cluster_size
    vectors, counts = {}, {}
    for ci, (name, words) in enumerate(clusters.items()):
        for j, w in enumerate(words):
            v = np.zeros(n_c + m)
            v[ci] = 1.0
            v[n_c + j] = OFFSET
            vectors[w] = v
            counts[w] = BG_COUNT if name.startswith("bg") else TOPIC_COUNT if name.startswith("topic") else EMOTION_COUNT
    lexicon = EmotionLexicon({w: e for e in EMOTIONS for w in clusters[e]}, emotions=EMOTIONS)
    return clusters, vectors, counts, EmbeddingStore(vectors, counts), lexicon


def plant_positions(params: SynthParams, rng: random.Random) -> list[int]:
    """Shot indices for the plants, separated so lag tails never reach another plant."""
    tail_shots = math.ceil(params.lag_spread_s / params.l_scene)
    slot = 1 + tail_shots + 1
    n, k = params.n_shots, params.n_highlights
    free = n - k * (slot - 1)
    if k and free < k:
        raise ConfigError(
            f"cannot pack {k} highlights (each needing {slot} shots) into {n} shots of {params.l_scene}s")
    picks = sorted(rng.sample(range(free), k)) if k else []
    return [p + i * (slot - 1) for i, p in enumerate(picks)]


def generate(params: SynthParams) -> SynthVideo:
    params.validate()
    rng = random.Random(params.seed)
    clusters, vectors, counts, store, lexicon = toy_embedding(params)
    planted = plant_positions(params, rng)
    bg_names = [c for c in clusters if c.startswith("bg")]
    rows: list[tuple[float, list[str]]] = []

    n_bg = int(round(params.background_rate * params.video_length_s))
    for _ in range(n_bg):
        t = rng.uniform(0, params.video_length_s)
        # chatter is topically diffuse: every token from an independent cluster
        rows.append((t, [rng.choice(clusters[rng.choice(bg_names)]) for _ in range(rng.randint(2, 3))]))

    ref_summaries = []
    for i, shot in enumerate(planted):
        start = shot * params.l_scene
        end = start + params.l_scene
        emotion = EMOTIONS[i % len(EMOTIONS)]
        others = [e for e in EMOTIONS if e != emotion]
        topic = clusters[f"topic{i}"]
        burst = []
        for _ in range(params.burst_size):
            t = rng.uniform(start, end)
            toks = [rng.choice(topic) for _ in range(rng.randint(1, 2))]
            for _ in range(rng.randint(1, 2)):
                e = emotion if rng.random() < params.emotion_purity else rng.choice(others)
                toks.append(rng.choice(clusters[e]))
            burst.append([t, toks])
        n_tail = int(round(params.lag_tail_fraction * params.burst_size))
        for row in rng.sample(burst, n_tail):
            # (0, lag_spread] past the end of the planted shot
            row[0] = end + params.lag_spread_s * (1.0 - rng.random())
        burst.sort(key=lambda r: r[0])
        wanted = max(1, round(0.15 * params.burst_size))
        ref = [" ".join(toks) for t, toks in burst if any(lexicon.emotion_of(w) == emotion for w in toks)]
        ref_summaries.append((shot, ref[:wanted]))
        rows.extend((t, toks) for t, toks in burst)

    comments = tuple(
        Comment(id=i, video_id=params.video_id, time_s=t, raw_text=" ".join(toks), tokens=tuple(toks))
        for i, (t, toks) in enumerate(rows)
    )
    refs = [Interval(s * params.l_scene, (s + 1) * params.l_scene) for s in planted]
    return SynthVideo(params, CommentStream(params.video_id, comments), refs, planted, store, lexicon,
                      vectors, counts, ref_summaries)


def write_synth(videos: list[SynthVideo], outdir: str | Path) -> dict[str, Path]:
    """Write stream, references, toy embedding, counts, lexicon and seed files."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {name: out / fn for name, fn in [
        ("stream", "stream.jsonl"), ("refs", "refs.tsv"), ("ref_summaries", "ref_summaries.tsv"),
        ("vectors", "vectors.txt"), ("counts", "counts.tsv"), ("lexicon", "lexicon.tsv"), ("seeds", "seeds.tsv")]}
    with open(paths["stream"], "w", encoding="utf-8") as fh:
        for v in videos:
            write_stream(v.stream, fh)
    with open(paths["refs"], "w", encoding="utf-8") as fh:
        for v in videos:
            fh.write(f"# video_id={v.params.video_id}\n")
            for iv in v.references:
                fh.write(f"{iv.start_s!r}\t{iv.end_s!r}\n")
    with open(paths["ref_summaries"], "w", encoding="utf-8") as fh:
        for v in videos:
            fh.write(f"# video_id={v.params.video_id}\n")
            for shot, texts in v.reference_summaries:
                start = shot * v.params.l_scene
                fh.write(f"{shot}\t{start!r}\t{start + v.params.l_scene!r}\n")
                for j, text in enumerate(texts):
                    fh.write(f"{j}\t{start!r}\t{text}\n")
                fh.write("\n")
    first = videos[0]
    write_word2vec({w: list(vec) for w, vec in first.vectors.items()}, paths["vectors"])
    write_counts(first.counts, paths["counts"])
    write_lexicon(first.lexicon, paths["lexicon"])
    with open(paths["seeds"], "w", encoding="utf-8") as fh:
        for e in EMOTIONS:
            for w in first.lexicon.members(e)[:3]:
                fh.write(f"{w}\t{e}\n")
    return paths
