"""Linear topic-segmentation baselines over transcription sentences.

Both algorithms see only the transcription token lists and emit sentence
boundary ids comparable with the alignment-derived boundaries.
"""

from __future__ import annotations

import math
from collections import Counter

import numpy as np

from .errors import ValidationError


def _count_cosine(a: Counter, b: Counter) -> float:
    if not a or not b:
        return 0.0
    dot = sum(v * b[t] for t, v in a.items() if t in b)
    na = math.sqrt(sum(v * v for v in a.values()))
    nb = math.sqrt(sum(v * v for v in b.values()))
    return dot / (na * nb)


def _block_counts(sentences: list[list[str]], start: int, stop: int) -> Counter:
    counts: Counter = Counter()
    for tokens in sentences[start:stop]:
        counts.update(tokens)
    return counts


def texttiling(
    sentences: list[list[str]],
    block_size: int = 2,
    step: int = 1,
    depth_threshold_sigma: float = 0.5,
) -> list[int]:
    """Boundary detection by lexical-cohesion valleys.

    Adjacent blocks of ``block_size`` sentences are compared at each gap,
    gap scores get a light radius-1 mean smoothing, and boundaries are the
    local minima whose depth clears mean − sigma·stddev of all gap depths.
    Documents shorter than two blocks yield no boundaries.
    """
    if block_size < 1 or step < 1:
        raise ValidationError("block size and step must be positive")
    m = len(sentences)
    w = block_size
    if m < 2 * w:
        return []
    gaps = list(range(w, m - w + 1, step))
    raw = [
        _count_cosine(_block_counts(sentences, g - w, g), _block_counts(sentences, g, g + w))
        for g in gaps
    ]
    smooth = [
        sum(raw[max(0, k - 1) : k + 2]) / len(raw[max(0, k - 1) : k + 2])
        for k in range(len(raw))
    ]
    depths = [_depth(smooth, k) for k in range(len(smooth))]
    mean = sum(depths) / len(depths)
    std = math.sqrt(sum((d - mean) ** 2 for d in depths) / len(depths))
    threshold = mean - depth_threshold_sigma * std
    return [
        gaps[k]
        for k in range(1, len(smooth) - 1)
        if smooth[k] < smooth[k - 1]
        and smooth[k] < smooth[k + 1]
        and depths[k] > threshold
    ]


def _depth(scores: list[float], k: int) -> float:
    """Sum of climbs from scores[k] to the nearest peak on each side."""
    left = scores[k]
    for l in range(k - 1, -1, -1):
        if scores[l] < left:
            break
        left = scores[l]
    right = scores[k]
    for r in range(k + 1, len(scores)):
        if scores[r] < right:
            break
        right = scores[r]
    return (left - scores[k]) + (right - scores[k])


def c99(
    sentences: list[list[str]], n_segments: int, rank_mask: int = 11
) -> list[int]:
    """Divisive segmentation on a locally rank-transformed similarity matrix.

    Splits greedily, always taking the boundary that maximizes the density
    of rank mass inside segment blocks, until exactly ``n_segments``
    segments exist.
    """
    m = len(sentences)
    if not 1 <= n_segments <= m:
        raise ValidationError(f"need 1 <= n_segments <= {m}, got {n_segments}")
    if rank_mask < 1 or rank_mask % 2 == 0:
        raise ValidationError(f"rank mask must be odd and positive, got {rank_mask}")
    if n_segments == 1:
        return []
    counts = [Counter(tokens) for tokens in sentences]
    sim = np.zeros((m, m))
    for i in range(m):
        for j in range(i, m):
            sim[i, j] = sim[j, i] = _count_cosine(counts[i], counts[j])
    rank = rank_transform(sim, rank_mask)
    # prefix[i][j] = sum of rank[0:i, 0:j]; square block sums in O(1)
    prefix = np.zeros((m + 1, m + 1))
    prefix[1:, 1:] = rank.cumsum(axis=0).cumsum(axis=1)

    def block(u: int, v: int) -> float:
        return float(prefix[v, v] - 2 * prefix[u, v] + prefix[u, u])

    bounds: list[int] = []
    inside_sum = block(0, m)
    inside_area = float(m * m)
    for _ in range(n_segments - 1):
        edges = [0] + bounds + [m]
        best = None
        for u, v in zip(edges, edges[1:]):
            if v - u < 2:
                continue
            seg_sum = block(u, v)
            seg_area = (v - u) ** 2
            for c in range(u + 1, v):
                s = inside_sum - seg_sum + block(u, c) + block(c, v)
                a = inside_area - seg_area + (c - u) ** 2 + (v - c) ** 2
                density = s / a
                if best is None or density > best[0]:
                    best = (density, c, u, v)
        if best is None:
            raise ValidationError("cannot split further, too few sentences")
        _, c, u, v = best
        bounds = sorted(bounds + [c])
        inside_sum += block(u, c) + block(c, v) - block(u, v)
        inside_area += (c - u) ** 2 + (v - c) ** 2 - (v - u) ** 2
    return bounds


def rank_transform(sim: np.ndarray, rank_mask: int) -> np.ndarray:
    """Replace each value by the fraction of its neighbors it beats.

    Neighborhood is the rank_mask × rank_mask box clipped at the matrix
    edge, the cell itself excluded.
    """
    m = sim.shape[0]
    radius = rank_mask // 2
    rank = np.zeros_like(sim)
    for i in range(m):
        for j in range(m):
            x0, x1 = max(0, i - radius), min(m, i + radius + 1)
            y0, y1 = max(0, j - radius), min(m, j + radius + 1)
            box = sim[x0:x1, y0:y1]
            n_neighbors = box.size - 1
            if n_neighbors == 0:
                continue
            rank[i, j] = (box < sim[i, j]).sum() / n_neighbors
    return rank
