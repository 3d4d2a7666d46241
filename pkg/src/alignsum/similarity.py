"""Sentence and segment similarity scorers.

All scorers share one small protocol: ``prepare`` turns a text into an
internal representation (token list or vector) and ``score_prepared``
compares two representations.  Window aggregation and plain matrices both
go through the same pair of calls, so a width-1 window scores bitwise
identical to the direct sentence-by-sentence matrix.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .errors import ParseError, ValidationError

_WORD = re.compile(r"\w+")

SCORER_KINDS = ("rouge1", "rouge2", "rougeL", "tfidf", "embedding")
POOLINGS = ("sum", "mean", "max")


def tokenize(text: str) -> list[str]:
    """Lowercase word tokens; punctuation is dropped."""
    return _WORD.findall(text.lower())


# ---------------------------------------------------------------------------
# ROUGE F1


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[k : k + n]) for k in range(len(tokens) - n + 1))


def _lcs_length(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def _f1(match: float, n_cand: int, n_ref: int) -> float:
    if n_cand == 0 or n_ref == 0 or match == 0:
        return 0.0
    p = match / n_cand
    r = match / n_ref
    return 2.0 * p * r / (p + r)


def rouge_f(variant: str, candidate: list[str], reference: list[str]) -> float:
    """ROUGE F1 between token lists; empty input on either side scores 0.

    ``variant`` is "1" or "2" for clipped n-gram overlap, "L" for longest
    common subsequence.
    """
    if variant in ("1", "2"):
        n = int(variant)
        cand = _ngrams(candidate, n)
        ref = _ngrams(reference, n)
        match = sum(min(c, ref[g]) for g, c in cand.items())
        return _f1(match, sum(cand.values()), sum(ref.values()))
    if variant == "L":
        return _f1(_lcs_length(candidate, reference), len(candidate), len(reference))
    raise ValidationError(f"unknown ROUGE variant {variant!r}")


# ---------------------------------------------------------------------------
# tf-idf


@dataclass(frozen=True)
class TfIdfModel:
    """Vocabulary and smoothed idf weights fitted on one meeting."""

    vocab: dict[str, int]
    idf: np.ndarray

    def vector(self, tokens: list[str]) -> np.ndarray:
        """L2-normalized tf-idf vector; unknown tokens are ignored."""
        vec = np.zeros(len(self.vocab))
        for tok in tokens:
            k = self.vocab.get(tok)
            if k is not None:
                vec[k] += 1.0
        vec *= self.idf
        norm = float(np.linalg.norm(vec))
        if norm > 0.0:
            vec /= norm
        return vec


def fit_tfidf(docs: list[list[str]]) -> TfIdfModel:
    """Fit vocabulary and idf on tokenized documents.

    idf(t) = ln((1 + D) / (1 + df(t))) + 1, so a term present everywhere
    still carries weight 1 rather than vanishing.
    """
    vocab: dict[str, int] = {}
    df: Counter = Counter()
    for doc in docs:
        seen = set(doc)
        for tok in seen:
            if tok not in vocab:
                vocab[tok] = len(vocab)
        df.update(seen)
    if not vocab:
        raise ValidationError("cannot fit tf-idf on an empty corpus")
    n_docs = len(docs)
    idf = np.zeros(len(vocab))
    for tok, k in vocab.items():
        idf[k] = math.log((1.0 + n_docs) / (1.0 + df[tok])) + 1.0
    return TfIdfModel(vocab=vocab, idf=idf)


# ---------------------------------------------------------------------------
# Word embeddings


@dataclass(frozen=True)
class EmbeddingTable:
    """Word vectors of a fixed dimension."""

    dim: int
    vectors: dict[str, np.ndarray]

    def __contains__(self, word: str) -> bool:
        return word in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    def get(self, word: str) -> np.ndarray | None:
        return self.vectors.get(word)


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Read word vectors in the plain-text format "<count> <dim>" header
    followed by one "<word> <v1> ... <vdim>" line per word."""
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ParseError(f"{path}: expected '<count> <dim>' header")
        try:
            count, dim = int(header[0]), int(header[1])
        except ValueError as exc:
            raise ParseError(f"{path}: non-integer header fields") from exc
        if dim <= 0:
            raise ParseError(f"{path}: dimension must be positive, got {dim}")
        vectors: dict[str, np.ndarray] = {}
        for lineno, line in enumerate(fh, start=2):
            fields = line.rstrip("\n").split(" ")
            if len(fields) != dim + 1:
                raise ParseError(
                    f"{path}:{lineno}: expected word plus {dim} values, "
                    f"got {len(fields)} fields"
                )
            try:
                vectors[fields[0]] = np.array([float(v) for v in fields[1:]])
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: non-numeric vector value") from exc
    if len(vectors) != count:
        raise ParseError(
            f"{path}: header promises {count} words, file has {len(vectors)}"
        )
    return EmbeddingTable(dim=dim, vectors=vectors)


def pool_vectors(vecs: list[np.ndarray], pooling: str, dim: int) -> np.ndarray:
    """Combine vectors by sum, mean, or elementwise max; empty input gives
    the zero vector."""
    if pooling not in POOLINGS:
        raise ValidationError(f"unknown pooling {pooling!r}")
    if not vecs:
        return np.zeros(dim)
    stack = np.stack(vecs)
    if pooling == "sum":
        return stack.sum(axis=0)
    if pooling == "mean":
        return stack.mean(axis=0)
    return stack.max(axis=0)


def cosine_clamped(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity clamped to [0, 1]; zero vectors score 0."""
    if u.shape != v.shape:
        raise ValidationError(f"vector shapes differ: {u.shape} vs {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    c = float(np.dot(u, v)) / (nu * nv)
    return min(1.0, max(0.0, c))


# ---------------------------------------------------------------------------
# Scorers


class Scorer:
    """Common scorer interface; concrete kinds fill in prepare/score."""

    kind: str = ""
    vector_based: bool = False

    def prepare(self, text: str) -> Any:
        raise NotImplementedError

    def score_prepared(self, a: Any, b: Any) -> float:
        raise NotImplementedError

    def score(self, a: str, b: str) -> float:
        return self.score_prepared(self.prepare(a), self.prepare(b))


class RougeScorer(Scorer):
    """Token-overlap F1; representations are token lists."""

    def __init__(self, variant: str):
        if variant not in ("1", "2", "L"):
            raise ValidationError(f"unknown ROUGE variant {variant!r}")
        self.variant = variant
        self.kind = f"rouge{variant}"

    def prepare(self, text: str) -> list[str]:
        return tokenize(text)

    def score_prepared(self, a: list[str], b: list[str]) -> float:
        return rouge_f(self.variant, a, b)


class TfIdfScorer(Scorer):
    """Cosine over tf-idf vectors from a model fitted per meeting."""

    kind = "tfidf"
    vector_based = True

    def __init__(self, model: TfIdfModel):
        self.model = model

    def prepare(self, text: str) -> np.ndarray:
        return self.model.vector(tokenize(text))

    def score_prepared(self, a: np.ndarray, b: np.ndarray) -> float:
        return cosine_clamped(a, b)


class EmbeddingScorer(Scorer):
    """Cosine over pooled word vectors; out-of-vocabulary words are skipped."""

    kind = "embedding"
    vector_based = True

    def __init__(self, table: EmbeddingTable, pooling: str = "mean"):
        if pooling not in POOLINGS:
            raise ValidationError(f"unknown pooling {pooling!r}")
        self.table = table
        self.pooling = pooling

    def prepare(self, text: str) -> np.ndarray:
        vecs = [v for v in (self.table.get(t) for t in tokenize(text)) if v is not None]
        return pool_vectors(vecs, self.pooling, self.table.dim)

    def score_prepared(self, a: np.ndarray, b: np.ndarray) -> float:
        return cosine_clamped(a, b)


def make_scorer(
    kind: str,
    *,
    corpus_texts: list[str] | None = None,
    embeddings: EmbeddingTable | None = None,
    pooling: str = "mean",
) -> Scorer:
    """Build a scorer by kind.

    tf-idf needs ``corpus_texts`` (the meeting's sentences) to fit on;
    embedding needs a loaded ``embeddings`` table.
    """
    if kind in ("rouge1", "rouge2", "rougeL"):
        return RougeScorer(kind[len("rouge") :])
    if kind == "tfidf":
        if corpus_texts is None:
            raise ValidationError("tfidf scorer needs corpus texts to fit on")
        return TfIdfScorer(fit_tfidf([tokenize(t) for t in corpus_texts]))
    if kind == "embedding":
        if embeddings is None:
            raise ValidationError("embedding scorer needs an embedding table")
        return EmbeddingScorer(embeddings, pooling=pooling)
    raise ValidationError(f"unknown scorer kind {kind!r}")


def similarity_matrix(
    t_texts: list[str], r_texts: list[str], scorer: Scorer
) -> np.ndarray:
    """Score every transcription text against every report text.

    Rows follow ``t_texts``, columns follow ``r_texts``.
    """
    if not t_texts or not r_texts:
        raise ValidationError("similarity matrix needs at least one text per side")
    t_reps = [scorer.prepare(t) for t in t_texts]
    r_reps = [scorer.prepare(t) for t in r_texts]
    s = np.zeros((len(t_texts), len(r_texts)))
    for i, a in enumerate(t_reps):
        for j, b in enumerate(r_reps):
            s[i, j] = scorer.score_prepared(a, b)
    return s
