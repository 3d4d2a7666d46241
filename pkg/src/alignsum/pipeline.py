"""End-to-end alignment of one meeting under an AlignConfig."""

from __future__ import annotations

import os

import numpy as np

from .alignment import accumulate, backtrace, diagonal_path, project_to_segments
from .config import AlignConfig
from .corpus_model import MeetingBundle, SegmentAlignment
from .errors import ValidationError
from .similarity import EmbeddingTable, Scorer, load_embeddings, make_scorer
from .windows import windowed_similarity

EMBEDDINGS_ENV = "ALIGNSUM_EMBEDDINGS"


def resolve_embeddings(
    config: AlignConfig, table: EmbeddingTable | None = None
) -> EmbeddingTable | None:
    """Locate word vectors for an embedding config.

    Precedence: an already-loaded table, the config's embeddings path, the
    ALIGNSUM_EMBEDDINGS environment variable.
    """
    if config.scorer != "embedding":
        return None
    if table is not None:
        return table
    path = config.embeddings or os.environ.get(EMBEDDINGS_ENV)
    if not path:
        raise ValidationError(
            "embedding scorer needs word vectors: set the config's 'embeddings' "
            f"path or the {EMBEDDINGS_ENV} environment variable"
        )
    return load_embeddings(path)


def sentence_texts(bundle: MeetingBundle) -> tuple[list[str], list[str]]:
    """Transcription and report sentence texts in document order."""
    t_texts = [s.text for s in bundle.transcription.sentences]
    r_texts = [s.text for s in bundle.report.sentences]
    return t_texts, r_texts


def build_scorer(
    config: AlignConfig,
    bundle: MeetingBundle,
    embeddings: EmbeddingTable | None = None,
) -> Scorer:
    """Instantiate the configured scorer, fitting tf-idf on this meeting."""
    t_texts, r_texts = sentence_texts(bundle)
    return make_scorer(
        config.scorer,
        corpus_texts=t_texts + r_texts,
        embeddings=resolve_embeddings(config, embeddings),
        pooling=config.pooling,
    )


def meeting_similarity(
    bundle: MeetingBundle,
    config: AlignConfig,
    embeddings: EmbeddingTable | None = None,
) -> np.ndarray:
    """Sentence-level similarity matrix under the configured window scheme."""
    t_texts, r_texts = sentence_texts(bundle)
    scorer = build_scorer(config, bundle, embeddings)
    return windowed_similarity(t_texts, r_texts, scorer, config.window)


def align_meeting(
    bundle: MeetingBundle,
    config: AlignConfig,
    embeddings: EmbeddingTable | None = None,
) -> SegmentAlignment:
    """Similarity, accumulation, backtrace, and segment projection."""
    s = meeting_similarity(bundle, config, embeddings)
    tableau = accumulate(s, config.params)
    path = backtrace(tableau)
    return project_to_segments(
        path,
        tableau.a,
        bundle.transcription.segments,
        bundle.report.segments_sentence_ids,
        meeting_id=bundle.meeting_id,
        source="auto",
        config=config.to_dict(),
    )


def diagonal_alignment(bundle: MeetingBundle) -> SegmentAlignment:
    """Similarity-free baseline alignment along the size ratio."""
    m = bundle.transcription.n_sentences
    n = bundle.report.n_sentences
    path = diagonal_path(m, n)
    return project_to_segments(
        path,
        np.ones((m, n)),
        bundle.transcription.segments,
        bundle.report.segments_sentence_ids,
        meeting_id=bundle.meeting_id,
        source="diagonal",
    )
