"""Document and alignment data model with its on-disk JSON formats.

A meeting consists of a transcription (ASR sentences grouped into segments)
and a human-written report (speaker segments of sentences).  A segment
alignment is a total, monotone map from transcription segments to report
segments.  All ids are 0-based, in files and in APIs.

File formats (UTF-8, unknown fields ignored on read, never emitted):

* ``transcription.json``:
  ``{"sentences":[{"id":int,"text":str}],
     "segments":[{"id":int,"sentence_ids":[int,...]}]}``
* ``report.json``:
  ``{"segments":[{"id":int,"speaker":str|null,"sentences":[str,...]}]}``
* ``alignment.json``:
  ``{"meeting_id":str,"source":"gold|auto|diagonal","revision":int,
     "config":{...}|null,"map":[{"t_seg":int,"r_seg":int,"irrelevant":bool}]}``
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError, ValidationError

ALIGNMENT_SOURCES = ("gold", "auto", "diagonal")


def count_words(text: str) -> int:
    """Number of whitespace-separated tokens in ``text``."""
    return len(text.split())


@dataclass(frozen=True)
class Sentence:
    """One sentence of a document; ``id`` is its 0-based position."""

    id: int
    text: str

    @property
    def word_count(self) -> int:
        return count_words(self.text)


@dataclass(frozen=True)
class TranscriptionDoc:
    """ASR transcription: sentences plus their grouping into segments.

    ``segments[m]`` is the tuple of sentence ids of segment ``m``.  Segments
    are mutually exclusive, contiguous and cover all sentence ids in order.
    """

    sentences: tuple[Sentence, ...]
    segments: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        _check_sentences(self.sentences, "transcription")
        if not self.segments:
            raise ValidationError("transcription has no segments")
        covered: list[int] = []
        for seg in self.segments:
            if not seg:
                raise ValidationError("empty transcription segment")
            covered.extend(seg)
        expected = list(range(len(self.sentences)))
        if covered != expected:
            raise ValidationError(
                "transcription segments must cover sentence ids "
                f"{expected[:3]}..{len(expected) - 1} exactly once in order, got {covered}"
            )

    @property
    def n_sentences(self) -> int:
        return len(self.sentences)

    @property
    def n_segments(self) -> int:
        return len(self.segments)

    def segment_text(self, m: int) -> str:
        return " ".join(self.sentences[i].text for i in self.segments[m])

    def segment_word_count(self, m: int) -> int:
        return sum(self.sentences[i].word_count for i in self.segments[m])


@dataclass(frozen=True)
class ReportSegment:
    """One speaker intervention of the report."""

    speaker: str | None
    sentences: tuple[Sentence, ...]


@dataclass(frozen=True)
class ReportDoc:
    """Human-written report split into speaker segments.

    Sentence ids are global over the report and consecutive across segments.
    """

    segments: tuple[ReportSegment, ...]

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValidationError("report has no segments")
        all_sentences = [s for seg in self.segments for s in seg.sentences]
        _check_sentences(tuple(all_sentences), "report")
        for seg in self.segments:
            if not seg.sentences:
                raise ValidationError("empty report segment")

    @property
    def sentences(self) -> tuple[Sentence, ...]:
        return tuple(s for seg in self.segments for s in seg.sentences)

    @property
    def n_sentences(self) -> int:
        return sum(len(seg.sentences) for seg in self.segments)

    @property
    def n_segments(self) -> int:
        return len(self.segments)

    def segment_sentence_ids(self, n: int) -> tuple[int, ...]:
        return tuple(s.id for s in self.segments[n].sentences)

    @property
    def segments_sentence_ids(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            self.segment_sentence_ids(n) for n in range(len(self.segments))
        )

    def segment_text(self, n: int) -> str:
        return " ".join(s.text for s in self.segments[n].sentences)

    def segment_word_count(self, n: int) -> int:
        return sum(s.word_count for s in self.segments[n].sentences)


@dataclass(frozen=True)
class MeetingBundle:
    """One meeting's transcription and report, ready for alignment."""

    meeting_id: str
    transcription: TranscriptionDoc
    report: ReportDoc


@dataclass(frozen=True)
class AlignmentEntry:
    """Assignment of one transcription segment to one report segment."""

    t_seg: int
    r_seg: int
    irrelevant: bool = False


@dataclass
class SegmentAlignment:
    """Total, monotone map from transcription segments to report segments.

    ``entries`` (the file's ``map``) holds exactly one entry per transcription
    segment, ordered by ``t_seg``, with ``r_seg`` non-decreasing.  Gold
    alignments may flag segments as irrelevant; automatic alignments never do.
    """

    meeting_id: str
    source: str
    entries: list[AlignmentEntry] = field(default_factory=list)
    config: dict | None = None
    revision: int = 0

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if self.source not in ALIGNMENT_SOURCES:
            raise ValidationError(f"unknown alignment source {self.source!r}")
        if not self.entries:
            raise ValidationError("alignment has no entries")
        if [e.t_seg for e in self.entries] != list(range(len(self.entries))):
            raise ValidationError(
                "alignment must contain exactly one entry per transcription "
                "segment, with t_seg consecutive from 0"
            )
        prev = None
        for e in self.entries:
            if e.r_seg < 0:
                raise ValidationError(f"negative r_seg at t_seg={e.t_seg}")
            if prev is not None and e.r_seg < prev:
                raise ValidationError(
                    f"monotonicity violated: t_seg={e.t_seg} maps to "
                    f"r_seg={e.r_seg} < {prev} of t_seg={e.t_seg - 1}"
                )
            prev = e.r_seg
        if self.revision < 0:
            raise ValidationError("negative revision")

    def validate_against(self, bundle: MeetingBundle) -> None:
        """Check totality and r_seg range against a concrete meeting."""
        self.validate()
        if len(self.entries) != bundle.transcription.n_segments:
            raise ValidationError(
                f"alignment covers {len(self.entries)} transcription segments, "
                f"meeting has {bundle.transcription.n_segments}"
            )
        n = bundle.report.n_segments
        for e in self.entries:
            if e.r_seg >= n:
                raise ValidationError(
                    f"r_seg={e.r_seg} out of range [0, {n}) at t_seg={e.t_seg}"
                )

    def mapping(self) -> list[int]:
        """The map as a plain list: ``mapping()[m]`` is f(m)."""
        return [e.r_seg for e in self.entries]


def _check_sentences(sentences: tuple[Sentence, ...], side: str) -> None:
    if not sentences:
        raise ValidationError(f"{side} has no sentences")
    for pos, sent in enumerate(sentences):
        if sent.id != pos:
            raise ValidationError(
                f"{side} sentence ids must be consecutive from 0, "
                f"found id={sent.id} at position {pos}"
            )
        if not sent.text.strip():
            raise ValidationError(f"{side} sentence {pos} is empty")


# ---------------------------------------------------------------------------
# JSON I/O


def _load_json(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a JSON object at top level")
    return data


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write via temp file + rename so readers never see partial output."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_transcription(path: str | Path) -> TranscriptionDoc:
    data = _load_json(path)
    try:
        sentences = tuple(
            Sentence(id=int(s["id"]), text=str(s["text"])) for s in data["sentences"]
        )
        segments = tuple(
            tuple(int(i) for i in seg["sentence_ids"]) for seg in data["segments"]
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{path}: malformed transcription: {exc}") from exc
    return TranscriptionDoc(sentences=sentences, segments=segments)


def load_report(path: str | Path) -> ReportDoc:
    data = _load_json(path)
    try:
        raw_segments = data["segments"]
        segments = []
        next_id = 0
        for seg in raw_segments:
            speaker = seg.get("speaker")
            texts = [str(t) for t in seg["sentences"]]
            sentences = tuple(
                Sentence(id=next_id + k, text=t) for k, t in enumerate(texts)
            )
            next_id += len(texts)
            segments.append(
                ReportSegment(
                    speaker=None if speaker is None else str(speaker),
                    sentences=sentences,
                )
            )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{path}: malformed report: {exc}") from exc
    return ReportDoc(segments=tuple(segments))


def load_meeting_bundle(
    transcription_path: str | Path,
    report_path: str | Path,
    meeting_id: str | None = None,
) -> MeetingBundle:
    """Load and validate one meeting.

    ``meeting_id`` defaults to the name of the directory holding the
    transcription file.
    """
    transcription = load_transcription(transcription_path)
    report = load_report(report_path)
    if meeting_id is None:
        meeting_id = Path(transcription_path).resolve().parent.name
    return MeetingBundle(
        meeting_id=meeting_id, transcription=transcription, report=report
    )


def load_meeting_dir(meeting_dir: str | Path, meeting_id: str | None = None) -> MeetingBundle:
    """Load a meeting from a directory holding transcription.json + report.json."""
    meeting_dir = Path(meeting_dir)
    return load_meeting_bundle(
        meeting_dir / "transcription.json",
        meeting_dir / "report.json",
        meeting_id=meeting_id if meeting_id is not None else meeting_dir.name,
    )


def transcription_to_dict(doc: TranscriptionDoc) -> dict:
    return {
        "sentences": [{"id": s.id, "text": s.text} for s in doc.sentences],
        "segments": [
            {"id": m, "sentence_ids": list(seg)} for m, seg in enumerate(doc.segments)
        ],
    }


def report_to_dict(doc: ReportDoc) -> dict:
    return {
        "segments": [
            {
                "id": n,
                "speaker": seg.speaker,
                "sentences": [s.text for s in seg.sentences],
            }
            for n, seg in enumerate(doc.segments)
        ]
    }


def write_transcription(doc: TranscriptionDoc, path: str | Path) -> None:
    atomic_write_text(path, _dumps(transcription_to_dict(doc)))


def write_report(doc: ReportDoc, path: str | Path) -> None:
    atomic_write_text(path, _dumps(report_to_dict(doc)))


def alignment_to_dict(alignment: SegmentAlignment) -> dict:
    return {
        "meeting_id": alignment.meeting_id,
        "source": alignment.source,
        "revision": alignment.revision,
        "config": alignment.config,
        "map": [
            {"t_seg": e.t_seg, "r_seg": e.r_seg, "irrelevant": e.irrelevant}
            for e in alignment.entries
        ],
    }


def alignment_from_dict(data: dict, origin: str = "<alignment>") -> SegmentAlignment:
    try:
        entries = [
            AlignmentEntry(
                t_seg=int(e["t_seg"]),
                r_seg=int(e["r_seg"]),
                irrelevant=bool(e.get("irrelevant", False)),
            )
            for e in data["map"]
        ]
        alignment = SegmentAlignment(
            meeting_id=str(data["meeting_id"]),
            source=str(data["source"]),
            entries=sorted(entries, key=lambda e: e.t_seg),
            config=data.get("config"),
            revision=int(data.get("revision", 0)),
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{origin}: malformed alignment: {exc}") from exc
    return alignment


def load_alignment(path: str | Path) -> SegmentAlignment:
    return alignment_from_dict(_load_json(path), origin=str(path))


def write_alignment(alignment: SegmentAlignment, path: str | Path) -> None:
    """Serialize a validated alignment; refuses invalid values before writing."""
    alignment.validate()
    atomic_write_text(path, _dumps(alignment_to_dict(alignment)))


def _dumps(data: dict) -> str:
    return json.dumps(data, ensure_ascii=False, indent=2) + "\n"
