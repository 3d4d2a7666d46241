"""Align ASR meeting transcriptions with human-written exhaustive reports.

The pipeline scores sentence similarity (ROUGE, tf-idf, or word
embeddings), optionally lifted over sliding windows, accumulates scores
through a monotone lattice with power scaling and run decay, backtraces
the optimal path, and projects it to a segment-to-segment alignment.
Aligned segments become source/target training pairs for meeting
summarization; an annotation service collects human corrections.
"""

from .alignment import (
    AlignmentTableau,
    AlignParams,
    accumulate,
    backtrace,
    diagonal_path,
    project_to_segments,
)
from .baselines import c99, texttiling
from .config import AlignConfig
from .corpus_builder import PairFilter, TrainingPair, extract_pairs, pairs_to_jsonl
from .corpus_model import (
    AlignmentEntry,
    MeetingBundle,
    ReportDoc,
    ReportSegment,
    SegmentAlignment,
    Sentence,
    TranscriptionDoc,
    load_alignment,
    load_meeting_bundle,
    load_meeting_dir,
    write_alignment,
)
from .errors import (
    AlignsumError,
    ConflictError,
    NotFoundError,
    ParseError,
    ValidationError,
)
from .gridsearch import Stage, enumerate_configs, staged_search
from .metrics import (
    EvalCounts,
    MicroScores,
    alignment_accuracy,
    alignment_to_boundaries,
    annotator_score,
    default_window_size,
    evaluate_meeting,
    evaluation_report,
    micro_average,
    pk,
    windowdiff,
)
from .pipeline import align_meeting, diagonal_alignment, meeting_similarity
from .segmentation import group_transcription, segment_report_text, split_sentences
from .similarity import (
    EmbeddingTable,
    Scorer,
    cosine_clamped,
    load_embeddings,
    make_scorer,
    rouge_f,
    similarity_matrix,
    tokenize,
)
from .windows import WindowConfig, make_windows, windowed_similarity

__version__ = "0.1.0"

__all__ = [
    "AlignConfig",
    "AlignParams",
    "AlignmentEntry",
    "AlignmentTableau",
    "AlignsumError",
    "ConflictError",
    "EmbeddingTable",
    "EvalCounts",
    "MeetingBundle",
    "MicroScores",
    "NotFoundError",
    "PairFilter",
    "ParseError",
    "ReportDoc",
    "ReportSegment",
    "Scorer",
    "SegmentAlignment",
    "Sentence",
    "Stage",
    "TrainingPair",
    "TranscriptionDoc",
    "ValidationError",
    "WindowConfig",
    "accumulate",
    "align_meeting",
    "alignment_accuracy",
    "alignment_to_boundaries",
    "annotator_score",
    "backtrace",
    "c99",
    "cosine_clamped",
    "default_window_size",
    "diagonal_alignment",
    "diagonal_path",
    "enumerate_configs",
    "evaluate_meeting",
    "evaluation_report",
    "extract_pairs",
    "group_transcription",
    "load_alignment",
    "load_embeddings",
    "load_meeting_bundle",
    "load_meeting_dir",
    "make_scorer",
    "make_windows",
    "meeting_similarity",
    "micro_average",
    "pairs_to_jsonl",
    "pk",
    "project_to_segments",
    "rouge_f",
    "segment_report_text",
    "similarity_matrix",
    "split_sentences",
    "staged_search",
    "texttiling",
    "tokenize",
    "windowdiff",
    "windowed_similarity",
    "write_alignment",
]
