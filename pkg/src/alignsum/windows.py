"""Sliding-window lifting of sentence similarities.

Sentences are grouped into overlapping windows, windows are scored against
each other, and window scores are folded back onto the sentence grid.  With
size 1 and overlap 0 the whole round trip is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .similarity import Scorer, pool_vectors, similarity_matrix

AGGREGATIONS = ("sum", "mean", "max", "cat")
REDUCTIONS = ("sum", "product")


@dataclass(frozen=True)
class WindowConfig:
    """Window size/overlap plus the aggregation and reduction choices.

    size 0 disables windowing entirely (equivalent to size 1, overlap 0).
    """

    size: int
    overlap: int
    agg: str = "sum"
    red: str = "sum"

    def __post_init__(self) -> None:
        if self.size < 0 or self.overlap < 0:
            raise ValidationError("window size and overlap must be non-negative")
        if self.size > 0 and self.overlap >= self.size:
            raise ValidationError(
                f"overlap {self.overlap} must be smaller than size {self.size}"
            )
        if self.size == 0 and self.overlap != 0:
            raise ValidationError("windowing disabled (size 0) requires overlap 0")
        if self.agg not in AGGREGATIONS:
            raise ValidationError(f"unknown aggregation {self.agg!r}")
        if self.red not in REDUCTIONS:
            raise ValidationError(f"unknown reduction {self.red!r}")

    @property
    def disabled(self) -> bool:
        return self.size == 0 or (self.size == 1 and self.overlap == 0)


@dataclass(frozen=True)
class Window:
    """Half-open sentence range [start, stop)."""

    start: int
    stop: int

    @property
    def ids(self) -> range:
        return range(self.start, self.stop)


def make_windows(doc_len: int, size: int, overlap: int) -> list[Window]:
    """Enumerate windows of ``size`` sentences stepping by size − overlap.

    The last window is truncated at the document end rather than dropped, so
    every sentence is covered.
    """
    if doc_len < 1:
        raise ValidationError("cannot window an empty document")
    if size < 1:
        raise ValidationError(f"window size must be at least 1, got {size}")
    if not 0 <= overlap < size:
        raise ValidationError(f"overlap must be in [0, {size}), got {overlap}")
    step = size - overlap
    windows = []
    start = 0
    while True:
        stop = min(start + size, doc_len)
        windows.append(Window(start=start, stop=stop))
        if start + size >= doc_len:
            break
        start += step
    return windows


def window_similarity(
    t_texts: list[str],
    r_texts: list[str],
    t_windows: list[Window],
    r_windows: list[Window],
    scorer: Scorer,
    agg: str,
) -> np.ndarray:
    """Score aggregated windows pairwise.

    Vector scorers pool member sentence vectors with sum/mean/max; text
    scorers concatenate member sentences ("cat") and score the joined text.
    """
    if agg == "cat":
        if scorer.vector_based:
            raise ValidationError("agg 'cat' only applies to text scorers")
        t_reps = [scorer.prepare(" ".join(t_texts[w.start : w.stop])) for w in t_windows]
        r_reps = [scorer.prepare(" ".join(r_texts[w.start : w.stop])) for w in r_windows]
    else:
        if not scorer.vector_based:
            raise ValidationError(f"text scorers require agg 'cat', got {agg!r}")
        t_vecs = [scorer.prepare(t) for t in t_texts]
        r_vecs = [scorer.prepare(t) for t in r_texts]
        dim = t_vecs[0].shape[0]
        t_reps = [pool_vectors(t_vecs[w.start : w.stop], agg, dim) for w in t_windows]
        r_reps = [pool_vectors(r_vecs[w.start : w.stop], agg, dim) for w in r_windows]
    s = np.zeros((len(t_windows), len(r_windows)))
    for k, a in enumerate(t_reps):
        for l, b in enumerate(r_reps):
            s[k, l] = scorer.score_prepared(a, b)
    return s


def reduce_to_sentences(
    w_scores: np.ndarray,
    t_windows: list[Window],
    r_windows: list[Window],
    red: str,
    m: int,
    n: int,
) -> np.ndarray:
    """Fold window scores back onto the M×N sentence grid.

    red="sum" adds contributions of every covering window pair, then divides
    by max(1, matrix max) so the result stays in [0,1] while a non-overlapping
    windowing passes through unchanged.  red="product" multiplies them.
    """
    if red not in REDUCTIONS:
        raise ValidationError(f"unknown reduction {red!r}")
    if red == "sum":
        s = np.zeros((m, n))
        for k, wt in enumerate(t_windows):
            for l, wr in enumerate(r_windows):
                s[wt.start : wt.stop, wr.start : wr.stop] += w_scores[k, l]
        peak = float(s.max())
        if peak > 1.0:
            s /= peak
        return s
    s = np.ones((m, n))
    for k, wt in enumerate(t_windows):
        for l, wr in enumerate(r_windows):
            s[wt.start : wt.stop, wr.start : wr.stop] *= w_scores[k, l]
    return s


def windowed_similarity(
    t_texts: list[str], r_texts: list[str], scorer: Scorer, cfg: WindowConfig
) -> np.ndarray:
    """Full window pipeline; falls back to the plain matrix when disabled."""
    if not t_texts or not r_texts:
        raise ValidationError("similarity needs at least one text per side")
    if cfg.disabled:
        return similarity_matrix(t_texts, r_texts, scorer)
    t_windows = make_windows(len(t_texts), cfg.size, cfg.overlap)
    r_windows = make_windows(len(r_texts), cfg.size, cfg.overlap)
    w = window_similarity(t_texts, r_texts, t_windows, r_windows, scorer, cfg.agg)
    return reduce_to_sentences(w, t_windows, r_windows, cfg.red, len(t_texts), len(r_texts))
