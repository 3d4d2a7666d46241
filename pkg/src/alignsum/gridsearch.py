"""Configuration enumeration and staged grid evaluation.

A grid stage evaluates every surviving configuration on its meeting set,
ranks them micro-averaged, and passes the best top_k on to the next, so
expensive large-set evaluation only happens for promising configurations.
Per-meeting results are cached by configuration digest and reused across
stages and runs.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .config import AlignConfig
from .corpus_model import (
    MeetingBundle,
    SegmentAlignment,
    atomic_write_text,
    load_alignment,
    load_meeting_dir,
)
from .errors import AlignsumError, ValidationError
from .metrics import EvalCounts, MeetingEval, evaluate_meeting, micro_average
from .pipeline import align_meeting, resolve_embeddings
from .similarity import POOLINGS, SCORER_KINDS
from .windows import AGGREGATIONS, REDUCTIONS

METRICS = ("windowdiff", "seg_acc")

_DEFAULT_SPACE = {
    "s": [1],
    "o": [0],
    "agg": ["sum"],
    "red": ["sum"],
    "p": [1.0],
    "hd": [0.0],
    "vd": [0.0],
    "pooling": ["mean"],
}


@dataclass(frozen=True)
class Stage:
    """One evaluation round: meeting ids and how many configs survive it."""

    meeting_ids: tuple[str, ...]
    top_k: int

    def __post_init__(self) -> None:
        if not self.meeting_ids:
            raise ValidationError("stage has no meetings")
        if self.top_k < 1:
            raise ValidationError("stage top_k must be positive")


def enumerate_configs(space: dict) -> list[AlignConfig]:
    """Expand a parameter-list space into valid, deduplicated configs.

    Combinations violating structural constraints (overlap ≥ size,
    text-scorer aggregation mismatches) are silently skipped; value typos
    in the lists fail fast instead.
    """
    if "scorer" not in space or not space["scorer"]:
        raise ValidationError("search space needs a non-empty 'scorer' list")
    merged = dict(_DEFAULT_SPACE)
    merged.update({k: v for k, v in space.items() if k != "embeddings"})
    embeddings = space.get("embeddings")
    for key, allowed in (
        ("scorer", SCORER_KINDS),
        ("agg", AGGREGATIONS),
        ("red", REDUCTIONS),
        ("pooling", POOLINGS),
    ):
        bad = set(merged[key]) - set(allowed)
        if bad:
            raise ValidationError(f"unknown {key} values: {sorted(bad)}")
    for key in merged:
        if not merged[key]:
            raise ValidationError(f"search space list {key!r} is empty")

    seen = {}
    for scorer, s, o, agg, red, p, hd, vd, pooling in itertools.product(
        merged["scorer"],
        merged["s"],
        merged["o"],
        merged["agg"],
        merged["red"],
        merged["p"],
        merged["hd"],
        merged["vd"],
        merged["pooling"],
    ):
        try:
            config = AlignConfig(
                scorer=scorer,
                s=s,
                o=o,
                agg=agg,
                red=red,
                p=p,
                hd=hd,
                vd=vd,
                pooling=pooling,
                embeddings=embeddings if scorer == "embedding" else None,
            )
        except ValidationError:
            continue
        seen.setdefault(config.canonical_string(), config)
    if not seen:
        raise ValidationError("search space is empty after constraint filtering")
    return [seen[key] for key in sorted(seen)]


class _Evaluator:
    """Aligns meetings under configs, with digest-keyed result caching."""

    def __init__(
        self,
        data_dir: Path,
        cache_dir: Path | None = None,
        jobs: int | None = None,
    ):
        self.data_dir = Path(data_dir)
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self.jobs = jobs if jobs and jobs > 0 else 1
        self._meetings: dict[str, tuple[MeetingBundle, SegmentAlignment]] = {}
        self._memory: dict[tuple[str, str], MeetingEval] = {}
        self._embeddings = {}

    def meeting(self, meeting_id: str) -> tuple[MeetingBundle, SegmentAlignment]:
        if meeting_id not in self._meetings:
            meeting_dir = self.data_dir / meeting_id
            bundle = load_meeting_dir(meeting_dir, meeting_id=meeting_id)
            gold_path = meeting_dir / "gold.json"
            if not gold_path.exists():
                raise ValidationError(
                    f"gold alignment missing for meeting {meeting_id!r} "
                    f"(expected {gold_path})"
                )
            self._meetings[meeting_id] = (bundle, load_alignment(gold_path))
        return self._meetings[meeting_id]

    def evaluate(self, config: AlignConfig, meeting_ids: tuple[str, ...]) -> list[MeetingEval]:
        if self.jobs > 1 and len(meeting_ids) > 1:
            with ThreadPoolExecutor(max_workers=self.jobs) as pool:
                return list(pool.map(lambda mid: self._one(config, mid), meeting_ids))
        return [self._one(config, mid) for mid in meeting_ids]

    def _one(self, config: AlignConfig, meeting_id: str) -> MeetingEval:
        key = (config.digest(), meeting_id)
        if key in self._memory:
            return self._memory[key]
        result = self._load_cached(key)
        if result is None:
            bundle, gold = self.meeting(meeting_id)
            table = None
            if config.scorer == "embedding":
                ref = config.embeddings or ""
                if ref not in self._embeddings:
                    self._embeddings[ref] = resolve_embeddings(config)
                table = self._embeddings[ref]
            hyp = align_meeting(bundle, config, table)
            result = evaluate_meeting(bundle, gold, hyp)
            self._store_cached(key, config, result)
        self._memory[key] = result
        return result

    def _cache_path(self, key: tuple[str, str]) -> Path | None:
        if self.cache_dir is None:
            return None
        return self.cache_dir / key[0] / f"{key[1]}.json"

    def _load_cached(self, key: tuple[str, str]) -> MeetingEval | None:
        path = self._cache_path(key)
        if path is None or not path.exists():
            return None
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
            return MeetingEval(
                meeting_id=data["meeting_id"],
                counts=EvalCounts(*data["counts"]),
                wd_num=data["wd"][0],
                wd_den=data["wd"][1],
                pk_num=data["pk"][0],
                pk_den=data["pk"][1],
                k=data["k"],
            )
        except (json.JSONDecodeError, KeyError, TypeError, AlignsumError):
            return None  # corrupt cache entries are recomputed

    def _store_cached(
        self, key: tuple[str, str], config: AlignConfig, result: MeetingEval
    ) -> None:
        path = self._cache_path(key)
        if path is None:
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        c = result.counts
        payload = {
            "config": config.canonical_string(),
            "meeting_id": result.meeting_id,
            "counts": [
                c.correct_segments,
                c.total_segments,
                c.correct_words,
                c.total_words,
                c.irrelevant_words,
            ],
            "wd": [result.wd_num, result.wd_den],
            "pk": [result.pk_num, result.pk_den],
            "k": result.k,
        }
        atomic_write_text(path, json.dumps(payload, indent=2) + "\n")


def _stage_metrics(evals: list[MeetingEval]) -> dict:
    micro = micro_average([e.counts for e in evals])
    wd_den = sum(e.wd_den for e in evals)
    pk_den = sum(e.pk_den for e in evals)
    return {
        "seg_acc": micro.seg_acc,
        "word_acc": micro.word_acc,
        "pos_word_acc": micro.pos_word_acc,
        "windowdiff": sum(e.wd_num for e in evals) / wd_den if wd_den else 0.0,
        "pk": sum(e.pk_num for e in evals) / pk_den if pk_den else 0.0,
    }


def staged_search(
    configs: list[AlignConfig],
    stages: list[Stage],
    metric: str,
    data_dir: str | Path,
    *,
    cache_dir: str | Path | None = None,
    jobs: int | None = None,
) -> list[dict]:
    """Run the staged evaluation and return the full ranking.

    The result lists every configuration with the metrics from the last
    stage it reached: final-stage survivors first in rank order, then
    earlier drop-outs stage by stage.
    """
    if metric not in METRICS:
        raise ValidationError(f"metric must be one of {METRICS}, got {metric!r}")
    if not configs:
        raise ValidationError("no configurations to search")
    if not stages:
        raise ValidationError("no stages given")
    evaluator = _Evaluator(Path(data_dir), Path(cache_dir) if cache_dir else None, jobs)
    ascending = metric == "windowdiff"

    def sort_key(row: dict) -> tuple:
        value = row["metrics"][metric]
        return (value if ascending else -value, row["canonical"])

    survivors = list(configs)
    finished: list[dict] = []
    for number, stage in enumerate(stages, start=1):
        rows = []
        for config in survivors:
            evals = evaluator.evaluate(config, stage.meeting_ids)
            rows.append(
                {
                    "config": config.to_dict(),
                    "canonical": config.canonical_string(),
                    "metrics": _stage_metrics(evals),
                    "stage_reached": number,
                    "_config": config,
                }
            )
        rows.sort(key=sort_key)
        if number < len(stages):
            finished = rows[stage.top_k :] + finished
            survivors = [row.pop("_config") for row in rows[: stage.top_k]]
        else:
            finished = rows + finished
    for row in finished:
        row.pop("_config", None)
    return finished
