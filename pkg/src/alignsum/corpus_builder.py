"""Training-pair extraction from aligned meetings.

Each report segment becomes the target of at most one pair whose source is
the concatenation of the transcription segments mapped to it, minus the
ones flagged irrelevant.  Length filters keep the pairs usable for
summarization training.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .corpus_model import MeetingBundle, SegmentAlignment, count_words
from .errors import ValidationError


@dataclass(frozen=True)
class PairFilter:
    """Inclusive word and sentence bounds applied to both pair sides."""

    min_words: int = 10
    max_words: int = 1000
    min_sentences: int = 3
    max_sentences: int = 50

    def __post_init__(self) -> None:
        if self.min_words < 0 or self.min_sentences < 0:
            raise ValidationError("filter minima must be non-negative")
        if self.min_words > self.max_words:
            raise ValidationError("min_words exceeds max_words")
        if self.min_sentences > self.max_sentences:
            raise ValidationError("min_sentences exceeds max_sentences")

    def admits(self, words: int, sentences: int) -> bool:
        return (
            self.min_words <= words <= self.max_words
            and self.min_sentences <= sentences <= self.max_sentences
        )


@dataclass(frozen=True)
class TrainingPair:
    """One source/target text pair extracted from a meeting."""

    meeting_id: str
    r_seg: int
    src: str
    tgt: str
    src_words: int
    tgt_words: int
    src_sentences: int
    tgt_sentences: int


def pair_filter(pair: TrainingPair, filt: PairFilter) -> bool:
    """True when both sides fall inside the configured bounds."""
    return filt.admits(pair.src_words, pair.src_sentences) and filt.admits(
        pair.tgt_words, pair.tgt_sentences
    )


def extract_pairs(
    bundle: MeetingBundle,
    alignment: SegmentAlignment,
    filt: PairFilter = PairFilter(),
) -> list[TrainingPair]:
    """Build filtered pairs, ordered by report segment."""
    alignment.validate_against(bundle)
    by_target: dict[int, list[int]] = {}
    for entry in alignment.entries:
        if entry.irrelevant:
            continue
        by_target.setdefault(entry.r_seg, []).append(entry.t_seg)
    pairs = []
    for n in range(bundle.report.n_segments):
        t_segs = by_target.get(n)
        if not t_segs:
            continue
        src = " ".join(bundle.transcription.segment_text(m) for m in t_segs)
        tgt = bundle.report.segment_text(n)
        pair = TrainingPair(
            meeting_id=bundle.meeting_id,
            r_seg=n,
            src=src,
            tgt=tgt,
            src_words=count_words(src),
            tgt_words=count_words(tgt),
            src_sentences=sum(len(bundle.transcription.segments[m]) for m in t_segs),
            tgt_sentences=len(bundle.report.segments[n].sentences),
        )
        if pair_filter(pair, filt):
            pairs.append(pair)
    return pairs


def pairs_to_jsonl(pairs: list[TrainingPair]) -> str:
    """Serialize pairs sorted by (meeting_id, r_seg), one object per line."""
    lines = []
    for p in sorted(pairs, key=lambda p: (p.meeting_id, p.r_seg)):
        lines.append(
            json.dumps(
                {
                    "meeting_id": p.meeting_id,
                    "r_seg": p.r_seg,
                    "src": p.src,
                    "tgt": p.tgt,
                    "src_words": p.src_words,
                    "tgt_words": p.tgt_words,
                },
                ensure_ascii=False,
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


def read_pairs_jsonl(path: str | Path) -> list[dict]:
    """Load a pairs file back into plain dicts."""
    rows = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append(json.loads(line))
    return rows
