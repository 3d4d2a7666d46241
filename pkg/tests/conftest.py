"""Shared fixtures: synthetic meetings, embedding files, meeting directories."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from alignsum import (
    AlignmentEntry,
    MeetingBundle,
    ReportDoc,
    ReportSegment,
    SegmentAlignment,
    Sentence,
    TranscriptionDoc,
    write_alignment,
)
from alignsum.corpus_model import write_report, write_transcription

TOPIC_WORDS = ("alpha", "bravo", "carbon", "delta", "ember", "falcon", "granite")
FILLER_WORDS = ("well", "so", "right", "okay", "then")


def build_bundle(
    meeting_id: str,
    t_segments: list[list[str]],
    r_segments: list[list[str]],
    speakers: list[str | None] | None = None,
) -> MeetingBundle:
    """Assemble a meeting from per-segment sentence text lists."""
    flat = [text for seg in t_segments for text in seg]
    sentences = tuple(Sentence(id=k, text=t) for k, t in enumerate(flat))
    segments = []
    pos = 0
    for seg in t_segments:
        segments.append(tuple(range(pos, pos + len(seg))))
        pos += len(seg)
    transcription = TranscriptionDoc(sentences=sentences, segments=tuple(segments))
    rsegs = []
    next_id = 0
    for n, seg in enumerate(r_segments):
        speaker = speakers[n] if speakers is not None else f"S{n}"
        rsegs.append(
            ReportSegment(
                speaker=speaker,
                sentences=tuple(
                    Sentence(id=next_id + k, text=t) for k, t in enumerate(seg)
                ),
            )
        )
        next_id += len(seg)
    return MeetingBundle(
        meeting_id=meeting_id,
        transcription=transcription,
        report=ReportDoc(segments=tuple(rsegs)),
    )


def mapping_alignment(
    bundle: MeetingBundle,
    mapping: list[int],
    source: str = "gold",
    irrelevant: set[int] = frozenset(),
) -> SegmentAlignment:
    entries = [
        AlignmentEntry(t_seg=m, r_seg=r, irrelevant=m in irrelevant)
        for m, r in enumerate(mapping)
    ]
    return SegmentAlignment(
        meeting_id=bundle.meeting_id, source=source, entries=entries
    )


def random_meeting(rng: np.random.Generator, meeting_id: str) -> MeetingBundle:
    """Small random meeting over a shared vocabulary."""
    vocab = list(TOPIC_WORDS + FILLER_WORDS)

    def sentence() -> str:
        words = rng.choice(vocab, size=rng.integers(3, 7))
        return " ".join(words) + "."

    def segmented(n_segments: int, lo: int, hi: int) -> list[list[str]]:
        return [
            [sentence() for _ in range(rng.integers(lo, hi))]
            for _ in range(n_segments)
        ]

    n_r = int(rng.integers(2, 5))
    return build_bundle(
        meeting_id,
        t_segments=segmented(int(rng.integers(2, 6)), 1, 4),
        r_segments=segmented(n_r, 1, 3),
    )


def proportional_meeting(n_segments: int, verbosity: int, meeting_id: str) -> tuple:
    """Meeting whose gold alignment is exactly proportional (1:1 segments,
    each report sentence expanded into ``verbosity`` transcription ones)."""
    words = TOPIC_WORDS[:n_segments]
    t_segments = [
        [f"{w} {w} discussion point." for _ in range(verbosity)] for w in words
    ]
    r_segments = [[f"The {w} item was settled."] for w in words]
    bundle = build_bundle(meeting_id, t_segments, r_segments)
    gold = mapping_alignment(bundle, list(range(n_segments)))
    return bundle, gold


def shuffled_verbosity_meeting(meeting_id: str) -> tuple:
    """Meeting where report verbosity anti-correlates with speech length.

    The briefest intervention gets the longest report segment and vice
    versa, so position misleads while vocabulary still identifies topics.
    """
    t_lengths = [1, 6, 5]
    r_lengths = [4, 1, 1]
    words = TOPIC_WORDS[: len(t_lengths)]
    t_segments = [
        [f"{w} again {w} point." for _ in range(k)]
        for w, k in zip(words, t_lengths)
    ]
    r_segments = [
        [f"Item {w} number {k}." for k in range(n)]
        for w, n in zip(words, r_lengths)
    ]
    bundle = build_bundle(meeting_id, t_segments, r_segments)
    gold = mapping_alignment(bundle, list(range(len(t_lengths))))
    return bundle, gold


def write_meeting_dir(
    base: Path, bundle: MeetingBundle, gold: SegmentAlignment | None = None
) -> Path:
    meeting_dir = base / bundle.meeting_id
    meeting_dir.mkdir(parents=True, exist_ok=True)
    write_transcription(bundle.transcription, meeting_dir / "transcription.json")
    write_report(bundle.report, meeting_dir / "report.json")
    if gold is not None:
        write_alignment(gold, meeting_dir / "gold.json")
    return meeting_dir


@pytest.fixture
def bundle_factory():
    return build_bundle


@pytest.fixture
def alignment_factory():
    return mapping_alignment


@pytest.fixture
def meeting_dir_factory():
    return write_meeting_dir


@pytest.fixture(scope="session")
def embedding_path(tmp_path_factory) -> Path:
    """Word vector file covering the topic words plus some filler."""
    rng = np.random.default_rng(7)
    dim = len(TOPIC_WORDS)
    rows = []
    for k, word in enumerate(TOPIC_WORDS):
        vec = np.zeros(dim)
        vec[k] = 1.0
        rows.append((word, vec))
    for word in (*FILLER_WORDS, "point", "again", "item", "number"):
        rows.append((word, rng.uniform(0.01, 0.05, size=dim)))
    path = tmp_path_factory.mktemp("vectors") / "mini.vec"
    lines = [f"{len(rows)} {dim}"]
    for word, vec in rows:
        lines.append(word + " " + " ".join(repr(float(v)) for v in vec))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def embedding_table(embedding_path):
    from alignsum import load_embeddings

    return load_embeddings(embedding_path)
