"""Command line entry point: synth, expand-lexicon, detect, summarize, evaluate, sweep.

Exit codes: 0 success, 1 data error, 2 configuration error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import statistics
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import pipeline
from .config import PipelineConfig, build_config, read_config_file
from .corpus import load_streams, normalize_token
from .embedding import load_embeddings
from .errors import ConfigError, DataError
from .lexicon import EMOTIONS, EmotionLexicon, expand_lexicon, load_lexicon, load_seeds, load_stop_list, write_lexicon
from .metrics import EvalReport, Interval, format_report, highlight_prf, summary_scores
from .synth import SynthParams, generate, write_synth

log = logging.getLogger("danmaku_highlights")

SWEEPABLE = ("l_scene", "l_max", "phi_overlap", "top_n", "lambda", "b_emotion")

# flag -> (config field, type, help)
HYPER = [
    ("--l-scene", "l_scene", float, "shot length in seconds (default 15)"),
    ("--l-max", "l_max", float, "maximum silence inside a lexical chain (default 11)"),
    ("--top-n", "top_n", int, "neighbors per word for concept mapping (default 15)"),
    ("--phi-overlap", "phi_overlap", float, "concept merge threshold (default 0.5)"),
    ("--lambda", "lam", float, "emotion vs topic concentration weight (default 0.9)"),
    ("--tau-highlight", "tau_highlight", float, "fraction of shots kept as highlights (required)"),
    ("--tau-summary", "tau_summary", float, "fraction of comments kept per summary (required)"),
    ("--b-emotion", "b_emotion", float, "emotion bias in summarization (default 0.3)"),
    ("--gamma-overlap", "gamma_overlap", float, "lexicon expansion overlap ratio (default 0.05)"),
    ("--sim-min", "sim_min", float, "lexicon expansion minimum cosine (default 0.6)"),
    ("--top-n-exp", "top_n_exp", int, "neighbors per member during lexicon expansion (default 15)"),
    ("--rounds", "rounds", int, "lexicon expansion passes (default 1)"),
    ("--eps", "eps", float, "hit relaxation in seconds (default 5)"),
    ("--candidate-len", "candidate_len_s", float, "reported highlight length in seconds (default 15)"),
    ("--delta-ent", "delta_ent", float, "entropy smoothing (default 0.01)"),
    ("--baseline", "baseline", str, "random | uniform | spike instead of the full model"),
    ("--seed", "seed", int, "seed for the random baseline (default 0)"),
    ("--video-length", "video_length_s", float, "video length; fixes the shot grid size"),
    ("--default-count", "default_count", int, "global count for words absent from the counts file (default 3)"),
]


def _add_hyper(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("settings (override --config)")
    g.add_argument("--config", help="flat key=value settings file")
    for flag, dest, typ, help_ in HYPER:
        g.add_argument(flag, dest=dest, type=typ, default=None, help=help_)
    g.add_argument("--eq5-strict", dest="eq5_strict", action="store_const", const=True, default=None,
                   help="topic concentration counts emotion-lexicon words only")
    g.add_argument("--no-calibrate", dest="calibrate", action="store_const", const=False, default=None,
                   help="skip lag calibration")


def _config(args) -> PipelineConfig:
    file_values = read_config_file(args.config) if args.config else {}
    overrides = {dest: getattr(args, dest, None) for _, dest, _, _ in HYPER}
    overrides["eq5_strict"] = args.eq5_strict
    overrides["calibrate"] = args.calibrate
    try:
        return build_config(file_values, overrides)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def _add_inputs(p, lexicon_required=False):
    p.add_argument("--stream", required=True, help="JSON-lines comment file")
    p.add_argument("--embeddings", required=True, help="word2vec text format vectors")
    p.add_argument("--counts", help="word<TAB>count global frequencies")
    p.add_argument("--lexicon", required=lexicon_required, help="word<TAB>emotion lexicon")
    p.add_argument("--emotions", default=",".join(EMOTIONS), help="comma-separated emotion labels")
    p.add_argument("--jobs", type=int, default=1, help="videos processed concurrently")
    p.add_argument("--debug-dir", help="dump concept maps, chains and calibrated streams here")


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def _emotions(args) -> tuple[str, ...]:
    return tuple(e.strip() for e in args.emotions.split(",") if e.strip())


def _load_inputs(args, cfg):
    streams = load_streams(args.stream)
    store = load_embeddings(args.embeddings, args.counts, cfg.default_count)
    emotions = _emotions(args)
    lexicon = load_lexicon(args.lexicon, emotions) if args.lexicon else EmotionLexicon({}, emotions=emotions)
    return streams, store, lexicon


def _map_videos(fn, streams, jobs):
    vids = sorted(streams)
    if jobs > 1 and len(vids) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            return dict(zip(vids, ex.map(fn, vids)))
    return {v: fn(v) for v in vids}


def run_detection(streams, store, lexicon, cfg, jobs=1, debug_dir=None):
    def one(vid):
        d = pipeline.detect(streams[vid], store, lexicon, cfg)
        if debug_dir:
            pipeline.dump_debug(d.analysis, store, debug_dir)
        return d
    return _map_videos(one, streams, jobs)


def cmd_synth(args) -> int:
    params = SynthParams(video_length_s=args.video_length, n_highlights=args.n_highlights,
                         burst_size=args.burst_size, background_rate=args.background_rate,
                         lag_tail_fraction=args.lag_tail_fraction, lag_spread_s=args.lag_spread,
                         emotion_purity=args.emotion_purity, seed=args.seed, l_scene=args.l_scene)
    videos = [generate(SynthParams(**{**params.__dict__, "seed": args.seed + i})) for i in range(args.videos)]
    paths = write_synth(videos, args.out_dir)
    for name, p in paths.items():
        print(f"{name}\t{p}")
    print(f"tau_highlight\t{params.n_highlights / params.n_shots!r}")
    return 0


def cmd_expand_lexicon(args) -> int:
    cfg = _config(args)
    store = load_embeddings(args.embeddings, args.counts, cfg.default_count)
    seeds = load_seeds(args.seeds)
    stop = load_stop_list(args.stop_list) if args.stop_list else set()
    emotions = _emotions(args)
    unknown = sorted(set(seeds) - set(emotions))
    if unknown:
        raise DataError(f"seed file uses labels outside --emotions: {', '.join(unknown)}")
    lex = expand_lexicon(seeds, store, cfg.gamma_overlap, cfg.sim_min, cfg.top_n_exp, cfg.rounds, stop,
                         emotions=tuple(e for e in emotions if e in seeds))
    write_lexicon(lex, args.out)
    log.info("lexicon: %d seeds -> %d words", sum(len(s) for s in lex.seeds.values()), len(lex))
    return 0


def cmd_detect(args) -> int:
    cfg = _config(args)
    cfg.require("tau_highlight")
    streams, store, lexicon = _load_inputs(args, cfg)
    results = run_detection(streams, store, lexicon, cfg, args.jobs, args.debug_dir)
    with _output(args.out) as fh:
        pipeline.write_highlights(fh, {v: d.highlights for v, d in results.items()}, cfg)
    return 0


def cmd_summarize(args) -> int:
    cfg = _config(args)
    cfg.require("tau_summary")
    if not Path(args.highlights).is_file():
        raise DataError(f"highlights file not found: {args.highlights}")
    rows = pipeline.read_highlight_rows(args.highlights)
    streams, store, lexicon = _load_inputs(args, cfg)
    missing = sorted(set(rows) - set(streams))
    if missing:
        raise DataError(f"highlights name videos absent from the stream: {', '.join(missing)}")

    def one(vid):
        analysis = pipeline.analyze(streams[vid], store, cfg)
        if args.debug_dir:
            pipeline.dump_debug(analysis, store, args.debug_dir)
        idx = []
        for start, _, shot in rows[vid]:
            idx.append(shot if shot is not None else int(start // cfg.l_scene))
        return pipeline.summarize(analysis, idx, lexicon, cfg)

    results = _map_videos(one, {v: None for v in rows}, args.jobs)
    with _output(args.out) as fh:
        pipeline.write_summaries(fh, results, cfg)
    return 0


def _tokens(text: str) -> list[str]:
    return [t for t in (normalize_token(x) for x in text.split()) if t]


def _pooled(blocks) -> list[list[str]]:
    return [_tokens(text) for _, texts in blocks for text in texts]


def _same_videos(a: dict, b: dict, what: str) -> None:
    if set(a) != set(b):
        only_a, only_b = sorted(set(a) - set(b)), sorted(set(b) - set(a))
        raise DataError(f"{what}: video ids differ (candidate only: {only_a}, reference only: {only_b})")


def evaluate(cfg, highlights=None, ref_highlights=None, summaries=None, ref_summaries=None):
    """Macro-averaged report plus one record per video."""
    per_video: dict[str, dict] = {}
    if highlights or ref_highlights:
        if not (highlights and ref_highlights):
            raise ConfigError("--highlights and --ref-highlights go together")
        cand, ref = pipeline.read_intervals(highlights), pipeline.read_intervals(ref_highlights)
        _same_videos(cand, ref, "highlights")
        for vid in ref:
            p, r, f = highlight_prf(cand[vid], ref[vid], cfg.eps)
            per_video.setdefault(vid, {}).update(precision=p, recall=r, f1=f)
    if summaries or ref_summaries:
        if not (summaries and ref_summaries):
            raise ConfigError("--summaries and --ref-summaries go together")
        cand, ref = pipeline.read_summaries(summaries), pipeline.read_summaries(ref_summaries)
        _same_videos(cand, ref, "summaries")
        for vid in ref:
            rep = summary_scores(_pooled(cand[vid]), _pooled(ref[vid]))
            vals = {k: v for k, v in rep.as_dict().items() if k not in ("precision", "recall", "f1")}
            per_video.setdefault(vid, {}).update(vals)
    if not per_video:
        raise ConfigError("nothing to evaluate: give highlights and/or summaries")
    keys = list(next(iter(per_video.values())))
    mean = {k: statistics.fmean(per_video[v][k] for v in per_video) for k in keys}
    return mean, per_video


def cmd_evaluate(args) -> int:
    cfg = _config(args)
    mean, per_video = evaluate(cfg, args.highlights, args.ref_highlights, args.summaries, args.ref_summaries)
    with _output(args.out) as fh:
        fh.write(cfg.header())
        fh.write(format_report(mean))
    if args.json_out:
        with _output(args.json_out) as fh:
            for vid in sorted(per_video):
                fh.write(json.dumps({"video_id": vid, **per_video[vid]}, sort_keys=True) + "\n")
            fh.write(json.dumps({"video_id": "*mean*", **mean}, sort_keys=True) + "\n")
    return 0


def sweep(streams, store, lexicon, cfg, param, values, refs, ref_summaries=None):
    """One row (value, P, R, F1[, ROUGE-1, ROUGE-2]) per value, macro-averaged over videos."""
    if param not in SWEEPABLE:
        raise ConfigError(f"cannot sweep {param!r}; choose from {', '.join(SWEEPABLE)}")
    field = "lam" if param == "lambda" else param
    with_summary = param == "b_emotion"
    if with_summary and ref_summaries is None:
        raise ConfigError("sweeping b_emotion needs --ref-summaries")
    _same_videos(streams, refs, "sweep references")
    rows = []
    for value in values:
        run_cfg = cfg.replace(**{field: value})
        prf, rouge = [], []
        for vid in sorted(streams):
            d = pipeline.detect(streams[vid], store, lexicon, run_cfg)
            cand = [Interval(h.start_s, h.end_s) for h in d.highlights]
            prf.append(highlight_prf(cand, refs[vid], run_cfg.eps))
            if with_summary:
                summ = pipeline.summarize(d.analysis, [h.shot_index for h in d.highlights], lexicon, run_cfg)
                by_id = {c.id: c for c in d.analysis.stream.comments}
                cand_tokens = [list(by_id[i].tokens) for _, s in summ for i in s.selected]
                rep: EvalReport = summary_scores(cand_tokens, _pooled(ref_summaries.get(vid, [])))
                rouge.append((rep.rouge[1], rep.rouge[2]))
        row = [value] + [statistics.fmean(x[i] for x in prf) for i in range(3)]
        if with_summary:
            row += [statistics.fmean(x[i] for x in rouge) for i in range(2)]
        rows.append(row)
    return rows


def cmd_sweep(args) -> int:
    cfg = _config(args)
    if args.param not in SWEEPABLE:
        raise ConfigError(f"cannot sweep {args.param!r}; choose from {', '.join(SWEEPABLE)}")
    cfg.require("tau_highlight")
    if args.param == "b_emotion":
        cfg.require("tau_summary")
    caster = int if args.param == "top_n" else float
    try:
        values = [caster(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"bad --values for {args.param}: {args.values!r}") from None
    streams, store, lexicon = _load_inputs(args, cfg)
    refs = pipeline.read_intervals(args.ref_highlights)
    ref_summ = pipeline.read_summaries(args.ref_summaries) if args.ref_summaries else None
    rows = sweep(streams, store, lexicon, cfg, args.param, values, refs, ref_summ)
    cols = ["value", "precision", "recall", "f1"] + (["rouge1", "rouge2"] if args.param == "b_emotion" else [])
    with _output(args.out) as fh:
        fh.write(cfg.header())
        fh.write(",".join(cols) + "\n")
        for row in rows:
            fh.write(",".join(repr(x) for x in row) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="danmaku-highlights", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a synthetic stream with planted highlights")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--videos", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--video-length", type=float, default=600.0)
    p.add_argument("--n-highlights", type=int, default=4)
    p.add_argument("--burst-size", type=int, default=30)
    p.add_argument("--background-rate", type=float, default=0.3)
    p.add_argument("--lag-tail-fraction", type=float, default=0.0)
    p.add_argument("--lag-spread", type=float, default=8.0)
    p.add_argument("--emotion-purity", type=float, default=1.0)
    p.add_argument("--l-scene", type=float, default=15.0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("expand-lexicon", help="grow an emotion lexicon from seed words")
    _add_hyper(p)
    p.add_argument("--seeds", required=True, help="word<TAB>emotion seed file")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--counts")
    p.add_argument("--stop-list", help="words never admitted, one per line")
    p.add_argument("--emotions", default=",".join(EMOTIONS))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_expand_lexicon)

    p = sub.add_parser("detect", help="detect highlight shots")
    _add_hyper(p)
    _add_inputs(p)
    p.add_argument("--out", help="highlights file (default stdout)")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("summarize", help="summarize detected highlights")
    _add_hyper(p)
    _add_inputs(p)
    p.add_argument("--highlights", required=True, help="output of detect")
    p.add_argument("--out", help="summaries file (default stdout)")
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("evaluate", help="score highlights and/or summaries against references")
    _add_hyper(p)
    p.add_argument("--highlights")
    p.add_argument("--ref-highlights")
    p.add_argument("--summaries")
    p.add_argument("--ref-summaries")
    p.add_argument("--out", help="key=value report (default stdout)")
    p.add_argument("--json-out", help="per-video JSON lines")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="parameter sweep table as CSV")
    _add_hyper(p)
    _add_inputs(p)
    p.add_argument("--param", required=True, help=" | ".join(SWEEPABLE))
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--ref-highlights", required=True)
    p.add_argument("--ref-summaries")
    p.add_argument("--out", help="CSV file (default stdout)")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 1
