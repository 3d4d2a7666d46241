"""Command-line entry point.

Exit codes: 0 success, 1 validation/data error, 2 usage error.  File
outputs are written atomically; human-readable logging goes to stderr,
machine-readable results to files or stdout as JSON.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from .config import AlignConfig
from .corpus_builder import PairFilter, extract_pairs, pairs_to_jsonl
from .corpus_model import (
    atomic_write_text,
    load_alignment,
    load_meeting_dir,
    load_transcription,
    write_alignment,
    write_report,
)
from .errors import AlignsumError, ValidationError
from .gridsearch import METRICS, Stage, enumerate_configs, staged_search
from .metrics import evaluate_meeting, evaluation_report
from .pipeline import align_meeting, diagonal_alignment, resolve_embeddings
from .segmentation import DEFAULT_SPEAKER_PATTERNS, segment_report_text
from .similarity import tokenize
from . import baselines

log = logging.getLogger("alignsum")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(message)s")
    try:
        return args.func(args)
    except AlignsumError as exc:
        log.error("error: %s", exc)
        return 1
    except OSError as exc:
        log.error("i/o error: %s", exc)
        return 1


def entrypoint() -> None:
    sys.exit(main())


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="alignsum",
        description="Align meeting transcriptions with their written reports "
        "and build summarization training pairs.",
    )
    parser.add_argument(
        "--format", choices=["json"], default="json", help="output format"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segment", help="split raw report text into speaker segments")
    p.add_argument("--text", required=True, help="raw report text file")
    p.add_argument("--out", required=True, help="report JSON output path")
    p.add_argument("--patterns", help="JSON file with a list of speaker patterns")
    p.set_defaults(func=_cmd_segment)

    p = sub.add_parser("align", help="align one meeting's transcription to its report")
    p.add_argument("--meeting", required=True, help="meeting directory")
    p.add_argument("--config", help="alignment configuration JSON file")
    p.add_argument("--diagonal", action="store_true", help="use the diagonal baseline")
    p.add_argument("--embeddings", help="word vector file (overrides config)")
    p.add_argument("--out", required=True, help="alignment JSON output path")
    p.set_defaults(func=_cmd_align)

    p = sub.add_parser("baseline", help="run a linear segmentation baseline")
    p.add_argument("--algo", required=True, choices=["texttiling", "c99"])
    p.add_argument("--meeting", help="meeting directory")
    p.add_argument("--transcription", help="transcription JSON file")
    p.add_argument("--out", help="boundary JSON output path (default stdout)")
    p.add_argument("--block-size", type=int, default=2, help="texttiling block size")
    p.add_argument("--step", type=int, default=1, help="texttiling gap stride")
    p.add_argument("--sigma", type=float, default=0.5, help="texttiling depth threshold")
    p.add_argument("--segments", type=int, help="c99 segment count")
    p.add_argument("--rank-mask", type=int, default=11, help="c99 rank neighborhood")
    p.set_defaults(func=_cmd_baseline)

    p = sub.add_parser("eval", help="score hypothesis alignments against gold")
    p.add_argument(
        "--meeting",
        action="append",
        default=[],
        help="meeting directory (repeatable); --gold/--hyp are file names inside it",
    )
    p.add_argument("--gold", default="gold.json", help="gold alignment path or name")
    p.add_argument("--hyp", default="alignment.json", help="hypothesis path or name")
    p.add_argument("--k", type=int, help="boundary metric window size")
    p.add_argument("--out", help="report output path (default stdout)")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("grid", help="staged configuration search")
    p.add_argument("--space", required=True, help="parameter space JSON file")
    p.add_argument("--stages", required=True, help="stages JSON file")
    p.add_argument("--data", required=True, help="directory of meeting directories")
    p.add_argument("--out", required=True, help="ranking JSON output path")
    p.add_argument("--metric", choices=list(METRICS), default="windowdiff")
    p.add_argument("--cache", help="per-meeting result cache directory")
    p.add_argument("--jobs", type=int, help="parallel meeting evaluations")
    p.set_defaults(func=_cmd_grid)

    p = sub.add_parser("extract", help="emit summarization training pairs")
    p.add_argument("--meeting", action="append", required=True, help="meeting directory")
    p.add_argument(
        "--alignment", default="gold.json", help="alignment file name inside each meeting"
    )
    p.add_argument("--out", required=True, help="pairs.jsonl output path (or directory)")
    p.add_argument("--min-words", type=int, default=10)
    p.add_argument("--max-words", type=int, default=1000)
    p.add_argument("--min-sentences", type=int, default=3)
    p.add_argument("--max-sentences", type=int, default=50)
    p.add_argument(
        "--split-by-meeting",
        action="store_true",
        help="write one pairs file per meeting into --out as a directory",
    )
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("serve", help="run the annotation service")
    p.add_argument("--data", required=True, help="directory of meeting directories")
    p.add_argument("--config", help="pre-alignment configuration JSON file")
    p.add_argument("--embeddings", help="word vector file (overrides config)")
    p.add_argument("--ui", help="static UI bundle directory")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def _read_json(path: str | Path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc


def _emit(data, out: str | None) -> None:
    text = json.dumps(data, ensure_ascii=False, indent=2) + "\n"
    if out:
        atomic_write_text(out, text)
        log.info("wrote %s", out)
    else:
        sys.stdout.write(text)


def _cmd_segment(args: argparse.Namespace) -> int:
    raw = Path(args.text).read_text(encoding="utf-8")
    patterns = DEFAULT_SPEAKER_PATTERNS
    if args.patterns:
        loaded = _read_json(args.patterns)
        if not isinstance(loaded, list) or not all(isinstance(p, str) for p in loaded):
            raise ValidationError(f"{args.patterns} must hold a JSON list of strings")
        patterns = loaded
    doc = segment_report_text(raw, patterns)
    write_report(doc, args.out)
    log.info("wrote %s (%d segments)", args.out, doc.n_segments)
    return 0


def _load_config(path: str, embeddings_flag: str | None) -> AlignConfig:
    config = AlignConfig.from_dict(_read_json(path))
    if embeddings_flag:
        config = dataclasses.replace(config, embeddings=embeddings_flag)
    return config


def _cmd_align(args: argparse.Namespace) -> int:
    bundle = load_meeting_dir(args.meeting)
    if args.diagonal:
        alignment = diagonal_alignment(bundle)
    elif args.config:
        config = _load_config(args.config, args.embeddings)
        alignment = align_meeting(bundle, config)
    else:
        raise ValidationError("either --config or --diagonal is required")
    write_alignment(alignment, args.out)
    log.info("wrote %s (%d segments)", args.out, len(alignment.entries))
    return 0


def _cmd_baseline(args: argparse.Namespace) -> int:
    if args.meeting:
        bundle = load_meeting_dir(args.meeting)
        transcription = bundle.transcription
        default_segments = bundle.report.n_segments
    elif args.transcription:
        transcription = load_transcription(args.transcription)
        default_segments = None
    else:
        raise ValidationError("either --meeting or --transcription is required")
    tokens = [tokenize(s.text) for s in transcription.sentences]
    if args.algo == "texttiling":
        bounds = baselines.texttiling(
            tokens,
            block_size=args.block_size,
            step=args.step,
            depth_threshold_sigma=args.sigma,
        )
    else:
        n_segments = args.segments if args.segments is not None else default_segments
        if n_segments is None:
            raise ValidationError("c99 needs --segments (or --meeting to derive it)")
        bounds = baselines.c99(tokens, n_segments, rank_mask=args.rank_mask)
    _emit(bounds, args.out)
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    pairs: list[tuple[Path, Path, Path]] = []
    if args.meeting:
        for meeting_dir in args.meeting:
            meeting_dir = Path(meeting_dir)
            pairs.append((meeting_dir, meeting_dir / args.gold, meeting_dir / args.hyp))
    else:
        gold_path = Path(args.gold)
        pairs.append((gold_path.parent, gold_path, Path(args.hyp)))
    evals = []
    for meeting_dir, gold_path, hyp_path in pairs:
        gold = load_alignment(gold_path)
        hyp = load_alignment(hyp_path)
        if gold.meeting_id != hyp.meeting_id:
            raise ValidationError(
                f"meeting mismatch: gold is {gold.meeting_id!r}, "
                f"hypothesis is {hyp.meeting_id!r}"
            )
        bundle = load_meeting_dir(meeting_dir, meeting_id=gold.meeting_id)
        evals.append(evaluate_meeting(bundle, gold, hyp, k=args.k))
    _emit(evaluation_report(evals), args.out)
    return 0


def _cmd_grid(args: argparse.Namespace) -> int:
    space = _read_json(args.space)
    if not isinstance(space, dict):
        raise ValidationError(f"{args.space} must hold a JSON object")
    raw_stages = _read_json(args.stages)
    if not isinstance(raw_stages, list):
        raise ValidationError(f"{args.stages} must hold a JSON list of stages")
    stages = []
    for row in raw_stages:
        try:
            stages.append(
                Stage(meeting_ids=tuple(row["meetings"]), top_k=int(row["top_k"]))
            )
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed stage entry: {row!r}") from exc
    configs = enumerate_configs(space)
    log.info("searching %d configurations over %d stages", len(configs), len(stages))
    ranking = staged_search(
        configs,
        stages,
        args.metric,
        args.data,
        cache_dir=args.cache,
        jobs=args.jobs,
    )
    _emit({"metric": args.metric, "ranking": ranking}, args.out)
    return 0


def _cmd_extract(args: argparse.Namespace) -> int:
    filt = PairFilter(
        min_words=args.min_words,
        max_words=args.max_words,
        min_sentences=args.min_sentences,
        max_sentences=args.max_sentences,
    )
    per_meeting = []
    for meeting_dir in args.meeting:
        meeting_dir = Path(meeting_dir)
        bundle = load_meeting_dir(meeting_dir)
        alignment = load_alignment(meeting_dir / args.alignment)
        per_meeting.append((bundle.meeting_id, extract_pairs(bundle, alignment, filt)))
    if args.split_by_meeting:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        total = 0
        for meeting_id, pairs in per_meeting:
            atomic_write_text(out_dir / f"{meeting_id}.jsonl", pairs_to_jsonl(pairs))
            total += len(pairs)
        log.info("wrote %d pairs across %d files in %s", total, len(per_meeting), out_dir)
    else:
        pairs = [p for _, m_pairs in per_meeting for p in m_pairs]
        atomic_write_text(args.out, pairs_to_jsonl(pairs))
        log.info("wrote %d pairs to %s", len(pairs), args.out)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    config = _load_config(args.config, args.embeddings) if args.config else None
    if config is not None:
        resolve_embeddings(config)  # fail fast before binding the port
    static_dir = args.ui
    if static_dir is None:
        candidate = Path("frontend") / "dist"
        static_dir = candidate if candidate.is_dir() else None
    app = create_app(args.data, config=config, static_dir=static_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


if __name__ == "__main__":
    entrypoint()
