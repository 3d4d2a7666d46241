"""Evaluation measures for segmentations and segment alignments.

Boundary metrics (WindowDiff, Pk) expose numerator/denominator pairs so
multi-meeting scores can be micro-averaged exactly like the accuracy
counts: sum the parts, divide once.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass

from .corpus_model import MeetingBundle, SegmentAlignment
from .errors import ValidationError


@dataclass(frozen=True)
class EvalCounts:
    """Raw correctness tallies for one meeting."""

    correct_segments: int
    total_segments: int
    correct_words: int
    total_words: int
    irrelevant_words: int

    def __post_init__(self) -> None:
        if not 0 <= self.correct_segments <= self.total_segments:
            raise ValidationError("segment counts out of order")
        if not 0 <= self.correct_words <= self.total_words:
            raise ValidationError("word counts out of order")
        if not 0 <= self.irrelevant_words <= self.total_words:
            raise ValidationError("irrelevant words exceed total words")


@dataclass(frozen=True)
class MicroScores:
    """Micro-averaged ratios; the flag marks an empty relevant-word pool."""

    seg_acc: float
    word_acc: float
    pos_word_acc: float
    no_relevant_content: bool = False


def _boundary_prefix(bounds: list[int], m: int) -> list[int]:
    """Cumulative boundary counts; prefix[p] = #boundaries ≤ p."""
    prev = 0
    for b in bounds:
        if not 0 < b < m:
            raise ValidationError(f"boundary {b} outside (0, {m})")
        if b <= prev:
            raise ValidationError(f"boundaries must be strictly increasing, got {b}")
        prev = b
    prefix = [0] * (m + 1)
    for b in bounds:
        prefix[b] += 1
    for p in range(1, m + 1):
        prefix[p] += prefix[p - 1]
    return prefix


def _check_window(m: int, k: int) -> None:
    if not 1 <= k < m:
        raise ValidationError(f"window size must satisfy 1 <= k < {m}, got {k}")


def windowdiff_counts(
    ref_bounds: list[int], hyp_bounds: list[int], m: int, k: int
) -> tuple[int, int]:
    """Disagreeing windows and total windows, for exact micro-averaging.

    A window (i, i+k] disagrees when the two boundary counts strictly
    inside it differ.
    """
    _check_window(m, k)
    ref = _boundary_prefix(sorted(ref_bounds), m)
    hyp = _boundary_prefix(sorted(hyp_bounds), m)
    num = 0
    for i in range(m - k):
        if ref[i + k] - ref[i] != hyp[i + k] - hyp[i]:
            num += 1
    return num, m - k


def windowdiff(ref_bounds: list[int], hyp_bounds: list[int], m: int, k: int) -> float:
    num, den = windowdiff_counts(ref_bounds, hyp_bounds, m, k)
    return num / den


def pk_counts(
    ref_bounds: list[int], hyp_bounds: list[int], m: int, k: int
) -> tuple[int, int]:
    """Pairs (i, i+k) judged inconsistently same/different segment."""
    _check_window(m, k)
    ref = _boundary_prefix(sorted(ref_bounds), m)
    hyp = _boundary_prefix(sorted(hyp_bounds), m)
    num = 0
    for i in range(m - k):
        ref_same = ref[i + k] - ref[i] == 0
        hyp_same = hyp[i + k] - hyp[i] == 0
        if ref_same != hyp_same:
            num += 1
    return num, m - k


def pk(ref_bounds: list[int], hyp_bounds: list[int], m: int, k: int) -> float:
    num, den = pk_counts(ref_bounds, hyp_bounds, m, k)
    return num / den


def default_window_size(ref_bounds: list[int], m: int) -> int:
    """Half the mean reference segment length, clamped to a legal k."""
    if m < 2:
        raise ValidationError("boundary metrics need at least two sentences")
    k = round(m / (2 * (len(ref_bounds) + 1)))
    return max(1, min(k, m - 1))


def alignment_accuracy(
    gold: SegmentAlignment, hyp: SegmentAlignment, bundle: MeetingBundle
) -> EvalCounts:
    """Count matching segments and their words against a gold alignment.

    Gold-irrelevant segments always count as incorrect for the automatic
    aligner; their word mass is recorded so the positive rate can exclude
    it.
    """
    gold.validate_against(bundle)
    hyp.validate_against(bundle)
    if len(gold.entries) != len(hyp.entries):
        raise ValidationError("alignments cover different segment sets")
    correct_segments = 0
    correct_words = 0
    total_words = 0
    irrelevant_words = 0
    for g, h in zip(gold.entries, hyp.entries):
        words = bundle.transcription.segment_word_count(g.t_seg)
        total_words += words
        if g.irrelevant:
            irrelevant_words += words
        elif h.r_seg == g.r_seg:
            correct_segments += 1
            correct_words += words
    return EvalCounts(
        correct_segments=correct_segments,
        total_segments=len(gold.entries),
        correct_words=correct_words,
        total_words=total_words,
        irrelevant_words=irrelevant_words,
    )


def micro_average(per_file: list[EvalCounts]) -> MicroScores:
    """Ratios of summed numerators to summed denominators."""
    if not per_file:
        raise ValidationError("micro average needs at least one file")
    cs = sum(c.correct_segments for c in per_file)
    ts = sum(c.total_segments for c in per_file)
    cw = sum(c.correct_words for c in per_file)
    tw = sum(c.total_words for c in per_file)
    iw = sum(c.irrelevant_words for c in per_file)
    if ts == 0:
        raise ValidationError("no segments to average over")
    relevant = tw - iw
    return MicroScores(
        seg_acc=cs / ts,
        word_acc=cw / tw if tw else 0.0,
        pos_word_acc=cw / relevant if relevant else 1.0,
        no_relevant_content=relevant == 0,
    )


def annotator_score(pre: SegmentAlignment, corrected: SegmentAlignment) -> float:
    """Fraction of pre-alignment entries the annotator left untouched."""
    if len(pre.entries) != len(corrected.entries):
        raise ValidationError("alignments cover different segment sets")
    if not pre.entries:
        raise ValidationError("empty alignment has no annotator score")
    same = sum(
        1
        for p, c in zip(pre.entries, corrected.entries)
        if p.r_seg == c.r_seg and p.irrelevant == c.irrelevant
    )
    return same / len(pre.entries)


def alignment_to_boundaries(
    alignment: SegmentAlignment, bundle: MeetingBundle
) -> list[int]:
    """Sentence-level boundaries where the mapped report segment changes."""
    alignment.validate_against(bundle)
    bounds = []
    entries = alignment.entries
    for m in range(1, len(entries)):
        if entries[m].r_seg != entries[m - 1].r_seg:
            bounds.append(bundle.transcription.segments[m][0])
    return bounds


@dataclass(frozen=True)
class MeetingEval:
    """Per-meeting evaluation parts, micro-averageable by summation."""

    meeting_id: str
    counts: EvalCounts
    wd_num: int
    wd_den: int
    pk_num: int
    pk_den: int
    k: int

    @property
    def windowdiff(self) -> float:
        return self.wd_num / self.wd_den if self.wd_den else 0.0

    @property
    def pk(self) -> float:
        return self.pk_num / self.pk_den if self.pk_den else 0.0


def evaluate_meeting(
    bundle: MeetingBundle,
    gold: SegmentAlignment,
    hyp: SegmentAlignment,
    k: int | None = None,
) -> MeetingEval:
    """Accuracy counts plus boundary-metric counts for one meeting."""
    counts = alignment_accuracy(gold, hyp, bundle)
    ref_bounds = alignment_to_boundaries(gold, bundle)
    hyp_bounds = alignment_to_boundaries(hyp, bundle)
    m = bundle.transcription.n_sentences
    if m < 2:
        return MeetingEval(bundle.meeting_id, counts, 0, 0, 0, 0, 0)
    if k is None:
        k = default_window_size(ref_bounds, m)
    wd_num, wd_den = windowdiff_counts(ref_bounds, hyp_bounds, m, k)
    pk_num, pk_den = pk_counts(ref_bounds, hyp_bounds, m, k)
    return MeetingEval(bundle.meeting_id, counts, wd_num, wd_den, pk_num, pk_den, k)


def evaluation_report(evals: list[MeetingEval]) -> dict:
    """Per-file scores plus exact micro averages, JSON-shaped."""
    if not evals:
        raise ValidationError("nothing to evaluate")
    per_file = []
    for e in evals:
        scores = micro_average([e.counts])
        row = {
            "meeting_id": e.meeting_id,
            "seg_acc": scores.seg_acc,
            "word_acc": scores.word_acc,
            "pos_word_acc": scores.pos_word_acc,
            "windowdiff": e.windowdiff,
            "pk": e.pk,
            "k": e.k,
        }
        if scores.no_relevant_content:
            row["no_relevant_content"] = True
        per_file.append(row)
    micro = micro_average([e.counts for e in evals])
    wd_den = sum(e.wd_den for e in evals)
    pk_den = sum(e.pk_den for e in evals)
    micro_row = {
        "seg_acc": micro.seg_acc,
        "word_acc": micro.word_acc,
        "pos_word_acc": micro.pos_word_acc,
        "windowdiff": sum(e.wd_num for e in evals) / wd_den if wd_den else 0.0,
        "pk": sum(e.pk_num for e in evals) / pk_den if pk_den else 0.0,
    }
    if micro.no_relevant_content:
        micro_row["no_relevant_content"] = True
    return {"per_file": per_file, "micro": micro_row}
