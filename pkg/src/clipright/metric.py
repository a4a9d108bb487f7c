"""Similarity metric between two works' embedding vectors.

The metric is cosine similarity of unit-normalized embeddings: values lie
in [-1, 1] and HIGHER means MORE similar. Rulings analyses and threshold
bands all assume larger = closer to the original, so a pair scoring 0.85
is far more suspect than one scoring 0.48.

Vectors are re-normalized here even when the producing tool claims unit
norm; it is cheap and removes a trust dependency on the extractor.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .embedstore import EmbeddingRecord, EmbeddingStore
from .errors import DimensionMismatchError, ModelMismatchError, ZeroVectorError


def unit_normalize(v: Sequence[float] | np.ndarray) -> np.ndarray:
    """Scale v to Euclidean norm 1. Raises ZeroVectorError on an all-zero input."""
    arr = np.asarray(v, dtype=np.float64)
    norm = float(np.linalg.norm(arr))
    if norm == 0.0:
        raise ZeroVectorError("cannot normalize a zero vector")
    return arr / norm


def clip_metric(a: EmbeddingRecord, b: EmbeddingRecord) -> float:
    """Cosine similarity between two embedding records.

    Requires matching dim and model_id; symmetric in its arguments and
    invariant under positive scaling of either vector.
    """
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dim mismatch: {a.work_id}={a.dim}, {b.work_id}={b.dim}")
    if a.model_id != b.model_id:
        raise ModelMismatchError(
            f"model mismatch: {a.work_id}={a.model_id!r}, {b.work_id}={b.model_id!r}"
        )
    ua = unit_normalize(a.vector)
    ub = unit_normalize(b.vector)
    # dot of unit vectors; clamp strips float excursions just past +/-1
    return float(min(1.0, max(-1.0, np.dot(ua, ub))))


def pairwise_matrix(store: EmbeddingStore, ids: Sequence[str]) -> np.ndarray:
    """Symmetric matrix M with M[i][j] = clip_metric(ids[i], ids[j]).

    Entries are computed with the exact same dot product as clip_metric
    (no BLAS matmul) so each cell equals the scalar call bit-for-bit;
    the diagonal is exactly 1 and M[j][i] is copied from M[i][j].
    """
    units = [unit_normalize(store.get(work_id).vector) for work_id in ids]
    n = len(units)
    m = np.ones((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            value = float(min(1.0, max(-1.0, np.dot(units[i], units[j]))))
            m[i, j] = value
            m[j, i] = value
    return m
