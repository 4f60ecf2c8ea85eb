"""End-to-end detection/summarization over one video plus the text file formats.

Stage order is fixed: concept map, chains, calibration, segmentation, scoring,
selection.  Calibration must precede segmentation because it rewrites the
timestamps the shot scores are computed from.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .chains import ChainIndex, build_chains, calibrate
from .concept import ConceptMap, build_concept_map
from .config import PipelineConfig
from .corpus import CommentStream, shot_index, write_stream
from .detect import (Highlight, Shot, ShotScore, baseline_select, format_highlights, score_shots, segment,
                     select_highlights)
from .embedding import EmbeddingStore
from .errors import DataError
from .lexicon import EmotionLexicon
from .metrics import Interval
from .summarize import Summary, SummaryConfig, format_summary, summarize_shot


@dataclass
class Analysis:
    stream: CommentStream
    cmap: ConceptMap
    chains: ChainIndex
    shots: list[Shot]


@dataclass
class Detection:
    analysis: Analysis
    scores: list[ShotScore] | None
    highlights: list[Highlight]


def n_shots_for(stream: CommentStream, cfg: PipelineConfig) -> int:
    """Shot grid size from the video span, so calibrated and raw runs share N."""
    latest = max((c.time_s for c in stream.comments), default=0.0)
    if cfg.video_length_s is not None:
        if latest >= cfg.video_length_s:
            raise DataError(f"comment at {latest}s lies beyond video_length_s={cfg.video_length_s}")
        latest = cfg.video_length_s
        return max(1, -int(-latest // cfg.l_scene))
    return shot_index(latest, cfg.l_scene) + 1


def analyze(stream: CommentStream, store: EmbeddingStore, cfg: PipelineConfig) -> Analysis:
    cmap = build_concept_map(stream.vocabulary(), store, cfg.top_n, cfg.phi_overlap)
    chains = build_chains(stream, cmap, cfg.l_max)
    if cfg.calibrate:
        stream = calibrate(stream, chains, cmap, store)
    shots = segment(stream, cfg.l_scene, n_shots_for(stream, cfg))
    return Analysis(stream, cmap, chains, shots)


def detect(stream: CommentStream, store: EmbeddingStore, lexicon: EmotionLexicon, cfg: PipelineConfig,
           analysis: Analysis | None = None) -> Detection:
    cfg.require("tau_highlight")
    if analysis is None:
        analysis = analyze(stream, store, cfg)
    if not analysis.shots:
        return Detection(analysis, [], [])
    if cfg.baseline:
        hl = baseline_select(cfg.baseline, analysis.shots, cfg.tau_highlight, cfg.seed, cfg.l_scene,
                             cfg.candidate_len_s)
        return Detection(analysis, None, hl)
    scores = score_shots(analysis.shots, lexicon, analysis.cmap, store, cfg.lam, cfg.delta_ent, cfg.eq5_strict)
    hl = select_highlights([s.importance for s in scores], cfg.tau_highlight, cfg.l_scene, cfg.candidate_len_s)
    return Detection(analysis, scores, hl)


def summarize(analysis: Analysis, shot_indices: Sequence[int], lexicon: EmotionLexicon,
              cfg: PipelineConfig) -> list[tuple[Shot, Summary]]:
    cfg.require("tau_summary")
    sc = SummaryConfig(cfg.tau_summary, cfg.b_emotion)
    out = []
    for i in shot_indices:
        if not 0 <= i < len(analysis.shots):
            raise DataError(f"highlight shot {i} outside the {len(analysis.shots)}-shot grid")
        shot = analysis.shots[i]
        if shot.comments:
            out.append((shot, summarize_shot(shot, analysis.cmap, lexicon, sc)))
    return out


def dump_debug(analysis: Analysis, store: EmbeddingStore, directory: str | Path) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    vid = analysis.stream.video_id
    analysis.cmap.dump(d / f"{vid}.concepts.tsv")
    analysis.chains.dump(d / f"{vid}.chains.tsv", store)
    write_stream(analysis.stream, d / f"{vid}.calibrated.jsonl", calibrated=True)


# -- file formats -------------------------------------------------------------------

VIDEO_TAG = "# video_id="


def write_highlights(fh, per_video: dict[str, Sequence[Highlight]], cfg: PipelineConfig) -> None:
    fh.write(cfg.header())
    for vid in sorted(per_video):
        fh.write(f"{VIDEO_TAG}{vid}\n")
        fh.write(format_highlights(per_video[vid]))


def write_intervals(fh, per_video: dict[str, Sequence[Interval]]) -> None:
    for vid in sorted(per_video):
        fh.write(f"{VIDEO_TAG}{vid}\n")
        for iv in per_video[vid]:
            fh.write(f"{iv.start_s!r}\t{iv.end_s!r}\n")


def _blocks(path):
    """Yield (video_id, lineno, line) for payload lines; a video tag yields line None."""
    vid = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if line.startswith(VIDEO_TAG):
                vid = line[len(VIDEO_TAG):].strip()
                yield vid, lineno, None
            elif not line.startswith("#"):
                yield vid, lineno, line


def read_highlight_rows(path: str | Path) -> dict[str, list[tuple[float, float, int | None]]]:
    """(start, end, shot index or None) per video.  Two-column reference files are accepted."""
    out: dict[str, list] = {}
    for vid, lineno, line in _blocks(path):
        if line is None:
            out.setdefault(vid, [])
            continue
        if not line.strip():
            continue
        if vid is None:
            raise DataError(f"{path}:{lineno}: row before any '{VIDEO_TAG}' line")
        parts = line.split("\t")
        try:
            start, end = float(parts[0]), float(parts[1])
            shot = int(parts[3]) if len(parts) >= 4 else None
        except (ValueError, IndexError):
            raise DataError(f"{path}:{lineno}: expected 'start<TAB>end[...]'") from None
        if not start < end:
            raise DataError(f"{path}:{lineno}: start must precede end")
        out.setdefault(vid, []).append((start, end, shot))
    return out


def read_intervals(path: str | Path) -> dict[str, list[Interval]]:
    return {v: [Interval(s, e) for s, e, _ in rows] for v, rows in read_highlight_rows(path).items()}


def write_summaries(fh, per_video: dict[str, Sequence[tuple[Shot, Summary]]], cfg: PipelineConfig) -> None:
    fh.write(cfg.header())
    for vid in sorted(per_video):
        fh.write(f"{VIDEO_TAG}{vid}\n")
        for shot, summ in per_video[vid]:
            fh.write(format_summary(shot, summ))
            fh.write("\n")


def read_summaries(path: str | Path) -> dict[str, list[tuple[int, list[str]]]]:
    """(shot index, comment texts) blocks per video; blocks end at a blank line."""
    out: dict[str, list] = {}
    block = None
    for vid, lineno, line in _blocks(path):
        if line is None:
            out.setdefault(vid, [])
            block = None
            continue
        if not line.strip():
            block = None
            continue
        if vid is None:
            raise DataError(f"{path}:{lineno}: row before any '{VIDEO_TAG}' line")
        parts = line.split("\t", 2)
        if len(parts) != 3:
            raise DataError(f"{path}:{lineno}: expected three tab-separated fields")
        if block is None or block[0] != vid:
            try:
                block = (vid, (int(parts[0]), []))
            except ValueError:
                raise DataError(f"{path}:{lineno}: bad summary header") from None
            out.setdefault(vid, []).append(block[1])
        else:
            block[1][1].append(parts[2])
    return out
