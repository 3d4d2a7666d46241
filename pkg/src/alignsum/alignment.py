"""Monotone lattice alignment of transcription and report sentences.

Accumulation walks the similarity lattice row by row keeping, per cell, the
best corner-to-corner score, the predecessor direction, and a damping
factor for long single-direction runs.  Backtracing the history yields the
optimal path; projection turns path cells into a segment-to-segment map.
A similarity-free diagonal walk serves as the naive baseline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus_model import AlignmentEntry, SegmentAlignment
from .errors import ValidationError

ORIGIN = 0
FROM_LEFT = 1  # transcription index advanced: predecessor (i-1, j)
FROM_TOP = 2  # report index advanced: predecessor (i, j-1)

Path = list[tuple[int, int]]


@dataclass(frozen=True)
class AlignParams:
    """Power exponent and per-direction run decays."""

    p: float = 1.0
    hd: float = 0.0
    vd: float = 0.0

    def __post_init__(self) -> None:
        if self.p < 1.0:
            raise ValidationError(f"power must be at least 1, got {self.p}")
        if not 0.0 <= self.hd <= 1.0:
            raise ValidationError(f"horizontal decay must be in [0,1], got {self.hd}")
        if not 0.0 <= self.vd <= 1.0:
            raise ValidationError(f"vertical decay must be in [0,1], got {self.vd}")


@dataclass(frozen=True)
class AlignmentTableau:
    """Accumulation matrix, predecessor directions, and decay factors."""

    a: np.ndarray
    h: np.ndarray
    d: np.ndarray
    params: AlignParams

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape


def accumulate(s: np.ndarray, params: AlignParams = AlignParams()) -> AlignmentTableau:
    """Fill the alignment tableau over similarity matrix ``s``.

    Cell value: (s[i,j]**p + best predecessor value) * decay, where decay
    compounds by (1 - hd) along runs of transcription-advancing moves and
    (1 - vd) along report-advancing runs, resetting to 1 on every direction
    change and on the first row and column.  The predecessor is chosen by
    comparing already-decayed neighbor values, ties going to the report
    advance, so nonzero decay can reroute the path.  With hd = vd = 0 the
    decay is identically 1 and the tableau is the plain accumulation.
    """
    s = np.asarray(s, dtype=float)
    if s.ndim != 2 or s.size == 0:
        raise ValidationError("similarity matrix must be 2-D and non-empty")
    if not np.isfinite(s).all() or (s < 0).any():
        raise ValidationError("similarity values must be finite and non-negative")
    m, n = s.shape
    keep_h = 1.0 - params.hd
    keep_v = 1.0 - params.vd
    sp = (s ** params.p).tolist()
    a = [[0.0] * n for _ in range(m)]
    h = [[ORIGIN] * n for _ in range(m)]
    d = [[1.0] * n for _ in range(m)]

    a[0][0] = sp[0][0]
    for j in range(1, n):
        a[0][j] = sp[0][j] + a[0][j - 1]
        h[0][j] = FROM_TOP
    for i in range(1, m):
        a[i][0] = sp[i][0] + a[i - 1][0]
        h[i][0] = FROM_LEFT
        for j in range(1, n):
            left = a[i - 1][j]
            top = a[i][j - 1]
            if top >= left:
                factor = d[i][j - 1] * keep_v if h[i][j - 1] == FROM_TOP else 1.0
                a[i][j] = (sp[i][j] + top) * factor
                h[i][j] = FROM_TOP
            else:
                factor = d[i - 1][j] * keep_h if h[i - 1][j] == FROM_LEFT else 1.0
                a[i][j] = (sp[i][j] + left) * factor
                h[i][j] = FROM_LEFT
            d[i][j] = factor
    return AlignmentTableau(
        a=np.array(a), h=np.array(h, dtype=np.int8), d=np.array(d), params=params
    )


def backtrace(tableau: AlignmentTableau) -> Path:
    """Follow predecessor directions from the far corner back to (0, 0)."""
    i, j = tableau.shape
    i -= 1
    j -= 1
    cells = [(i, j)]
    h = tableau.h
    while h[i, j] != ORIGIN:
        if h[i, j] == FROM_LEFT:
            i -= 1
        else:
            j -= 1
        cells.append((i, j))
    cells.reverse()
    return cells


def diagonal_path(m: int, n: int) -> Path:
    """Similarity-free path tracking the m/n slope through the lattice.

    The walk advances the transcription index while the running 1-based
    ratio i/j stays below m/n, otherwise advances the report index.
    """
    if m < 1 or n < 1:
        raise ValidationError("both documents must have at least one sentence")
    ratio = m / n
    i, j = 1, 1
    cells = [(0, 0)]
    while i < m or j < n:
        if i == m:
            j += 1
        elif j == n:
            i += 1
        elif i / j < ratio:
            i += 1
        else:
            j += 1
        cells.append((i - 1, j - 1))
    return cells


def project_to_segments(
    path: Path,
    a: np.ndarray,
    t_segments: tuple[tuple[int, ...], ...],
    r_segments: tuple[tuple[int, ...], ...],
    *,
    meeting_id: str = "",
    source: str = "auto",
    config: dict | None = None,
) -> SegmentAlignment:
    """Map each transcription segment to the report segment whose path
    cells carry the most accumulated score.

    Ties go to the earliest report segment; the result is clamped to be
    non-decreasing so segment order is preserved even on pathological
    score patterns.
    """
    t_of = _sentence_to_segment(t_segments)
    r_of = _sentence_to_segment(r_segments)
    weights = np.zeros((len(t_segments), len(r_segments)))
    for i, j in path:
        if i >= len(t_of) or j >= len(r_of):
            raise ValidationError(f"path cell ({i},{j}) outside the documents")
        weights[t_of[i], r_of[j]] += a[i, j]
    f = np.argmax(weights, axis=1)
    for k in range(1, len(f)):
        f[k] = max(f[k], f[k - 1])
    entries = [AlignmentEntry(t_seg=k, r_seg=int(r)) for k, r in enumerate(f)]
    return SegmentAlignment(
        meeting_id=meeting_id, source=source, entries=entries, config=config
    )


def _sentence_to_segment(segments: tuple[tuple[int, ...], ...]) -> list[int]:
    """Invert segment membership into a dense sentence-to-segment lookup."""
    total = sum(len(seg) for seg in segments)
    lookup = [-1] * total
    for seg_id, seg in enumerate(segments):
        for sent_id in seg:
            if not 0 <= sent_id < total or lookup[sent_id] != -1:
                raise ValidationError("segments must partition the sentence range")
            lookup[sent_id] = seg_id
    if any(v == -1 for v in lookup):
        raise ValidationError("segments must cover every sentence")
    return lookup
