"""Report segmentation by speaker markers and transcription regrouping.

Reports explicitly mention speakers, so segmenting them is a rule-based
scan for speaker markers at line or sentence starts.  Transcriptions
arrive already sentencized by the ASR system; here they are only
regrouped on caller-supplied boundaries.
"""

from __future__ import annotations

import re

from .corpus_model import ReportDoc, ReportSegment, Sentence, TranscriptionDoc
from .errors import ValidationError

# French honorifics by default; "Mr."/"Ms."-style rules are corpus
# configuration.  Patterns are case-sensitive regexes: with a capture group,
# group 1 names the speaker; without one, the speaker is the single word
# following the marker.
DEFAULT_SPEAKER_PATTERNS = (r"M\.", r"Mme", r"Mlle", r"Dr")

_SENTENCE_END = re.compile(r"(?<=[.!?…])\s+")
_NAME_AFTER_MARKER = re.compile(r"\s+(\S+)")
_BODY_LEAD_JUNK = re.compile(r"^[\s.:;,\-–—]+")


def split_sentences(text: str) -> list[str]:
    """Naive sentence split on terminal punctuation followed by whitespace."""
    parts = [p.strip() for p in _SENTENCE_END.split(text)]
    return [p for p in parts if p]


def segment_report_text(
    raw_text: str,
    speaker_patterns: list[str] | tuple[str, ...] = DEFAULT_SPEAKER_PATTERNS,
) -> ReportDoc:
    """Split raw report text into speaker segments.

    Each marker match at a line or sentence start opens a new segment; text
    before the first match becomes a speaker-less preamble segment.  Raises
    if no segment can be produced (empty text).
    """
    if not raw_text.strip():
        raise ValidationError("report text is empty, no segments producible")

    matches: list[tuple[int, int, str]] = []
    for pat in (re.compile(p) for p in speaker_patterns):
        for m in pat.finditer(raw_text):
            if not _at_segment_start(raw_text, m.start()):
                continue
            if m.groups():
                speaker, consumed = m.group(1), m.end()
            else:
                name = _NAME_AFTER_MARKER.match(raw_text, m.end())
                if name is None:
                    continue
                speaker = name.group(1).rstrip(".,:;")
                consumed = name.end()
            if speaker:
                matches.append((m.start(), consumed, speaker))
    matches.sort(key=lambda t: t[0])
    matches = _drop_overlapping(matches)

    pieces: list[tuple[str | None, str]] = []
    if matches:
        preamble = raw_text[: matches[0][0]].strip()
        if preamble:
            pieces.append((None, preamble))
        for k, (_, consumed, speaker) in enumerate(matches):
            stop = matches[k + 1][0] if k + 1 < len(matches) else len(raw_text)
            body = _BODY_LEAD_JUNK.sub("", raw_text[consumed:stop])
            pieces.append((speaker, body))
    else:
        pieces.append((None, raw_text.strip()))

    segments = []
    next_id = 0
    for speaker, body in pieces:
        sentences = split_sentences(body)
        if not sentences and speaker is not None:
            # A marker with no body still records the intervention.
            sentences = [speaker]
        if not sentences:
            continue
        seg_sentences = tuple(
            Sentence(id=next_id + k, text=t) for k, t in enumerate(sentences)
        )
        next_id += len(sentences)
        segments.append(ReportSegment(speaker=speaker, sentences=seg_sentences))
    if not segments:
        raise ValidationError("report text produced no segments")
    return ReportDoc(segments=tuple(segments))


def group_transcription(
    sentences: list[Sentence] | tuple[Sentence, ...],
    boundaries: list[int] | tuple[int, ...],
) -> TranscriptionDoc:
    """Group sentences into segments split before each boundary id.

    Boundaries must be strictly increasing and in ``[0, len(sentences))``;
    a boundary at 0 is tolerated and opens no new segment.
    """
    m = len(sentences)
    if m == 0:
        raise ValidationError("no sentences to group")
    prev = -1
    for b in boundaries:
        if b < 0 or b >= m:
            raise ValidationError(f"boundary {b} out of range [0, {m})")
        if b <= prev:
            raise ValidationError(f"boundaries must be strictly increasing, got {b}")
        prev = b
    cuts = [b for b in boundaries if b != 0]
    starts = [0] + cuts
    stops = cuts + [m]
    segments = tuple(tuple(range(a, b)) for a, b in zip(starts, stops))
    return TranscriptionDoc(sentences=tuple(sentences), segments=segments)


def _at_segment_start(text: str, pos: int) -> bool:
    """True if ``pos`` begins a line or directly follows a sentence end."""
    k = pos - 1
    while k >= 0 and text[k] in " \t":
        k -= 1
    if k < 0 or text[k] == "\n":
        return True
    return text[k] in ".!?…"


def _drop_overlapping(matches: list[tuple[int, int, str]]) -> list[tuple[int, int, str]]:
    kept: list[tuple[int, int, str]] = []
    for m in matches:
        if kept and m[0] < kept[-1][1]:
            continue
        kept.append(m)
    return kept
