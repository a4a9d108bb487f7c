"""Influence providers: how much did each training item shape an output?

Every provider ends in the same normalized form: a weight per training
item, each in [0, 1], summing to 1 per output. Three routes are offered:

* uniform        - degenerate baseline, 1/n everywhere
* similarity     - softmax over embedding similarity to the output; the
                   temperature -> 0 limit recovers argmax attribution
* leave-one-out  - exact retraining deltas on a small ridge-regression
                   problem; at desk scale exact retraining IS the ground
                   truth that large-scale approximations try to estimate

Leave-one-out scores are signed (a point whose removal lowers the query
loss was harmful). ``normalize_influence`` maps signed scores onto the
[0,1] simplex by shifting so the worst score sits at 0 and rescaling;
this preserves the ordering among harmful points, which clamping at zero
would discard.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .embedstore import EmbeddingRecord
from .errors import (
    EmptyTrainingSetError,
    InfluenceOutputMismatchError,
    MalformedRowError,
    SingularSystemError,
)
from .metric import clip_metric

ROW_SUM_TOL = 1e-9


@dataclass(frozen=True)
class InfluenceMatrix:
    """Per-output, per-training-item weights.

    weights[j][i] is the influence of training_ids[i] on output_ids[j];
    every row sums to 1 within 1e-9 and all entries lie in [0, 1].
    """

    output_ids: tuple[str, ...]
    training_ids: tuple[str, ...]
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        object.__setattr__(self, "weights", w)
        if w.shape != (len(self.output_ids), len(self.training_ids)):
            raise ValueError(
                f"weights shape {w.shape} != "
                f"({len(self.output_ids)}, {len(self.training_ids)})"
            )
        if w.size:
            if np.min(w) < -ROW_SUM_TOL or np.max(w) > 1 + ROW_SUM_TOL:
                raise ValueError("influence weights must lie in [0, 1]")
            sums = w.sum(axis=1)
            if np.max(np.abs(sums - 1.0)) > ROW_SUM_TOL:
                raise ValueError("every influence row must sum to 1")

    def row_for(self, output_id: str) -> np.ndarray:
        try:
            j = self.output_ids.index(output_id)
        except ValueError:
            raise InfluenceOutputMismatchError(
                f"no influence row for output {output_id!r}"
            ) from None
        return self.weights[j]


def uniform_influence(
    n_training: int,
    n_outputs: int = 1,
    training_ids: Sequence[str] | None = None,
    output_ids: Sequence[str] | None = None,
) -> InfluenceMatrix:
    """Every training item weighted 1/n_training for every output."""
    if n_training < 1:
        raise EmptyTrainingSetError("need at least one training item")
    if n_outputs < 1:
        raise ValueError("need at least one output")
    if training_ids is None:
        training_ids = [f"train_{i:04d}" for i in range(n_training)]
    if output_ids is None:
        output_ids = [f"output_{j:04d}" for j in range(n_outputs)]
    if len(training_ids) != n_training or len(output_ids) != n_outputs:
        raise ValueError("id list lengths must match n_training / n_outputs")
    weights = np.full((n_outputs, n_training), 1.0 / n_training)
    return InfluenceMatrix(tuple(output_ids), tuple(training_ids), weights)


def similarity_influence(
    output: EmbeddingRecord,
    training: Sequence[EmbeddingRecord],
    temperature: float = 1.0,
) -> np.ndarray:
    """Softmax over cosine similarity between the output and each training item.

    Returns one normalized influence row (sums to 1). Permutation
    equivariant in the training list; all-identical training items yield
    uniform weights at any temperature.
    """
    if not training:
        raise EmptyTrainingSetError("need at least one training item")
    if not temperature > 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    sims = np.array([clip_metric(output, item) for item in training])
    logits = sims / temperature
    logits -= logits.max()  # stabilize exp for small temperatures
    w = np.exp(logits)
    return w / w.sum()


@dataclass(frozen=True)
class RidgeProblem:
    """A small ridge-regression instance plus one query point."""

    design: np.ndarray       # n x d training inputs
    targets: np.ndarray      # n
    regularizer: float       # lambda > 0
    query_input: np.ndarray  # d
    query_target: float

    def __post_init__(self):
        x = np.asarray(self.design, dtype=np.float64)
        y = np.asarray(self.targets, dtype=np.float64)
        q = np.asarray(self.query_input, dtype=np.float64)
        object.__setattr__(self, "design", x)
        object.__setattr__(self, "targets", y)
        object.__setattr__(self, "query_input", q)
        if x.ndim != 2:
            raise ValueError("design must be a 2-D matrix")
        n, d = x.shape
        if n < 2:
            raise ValueError("need at least 2 training points")
        if y.shape != (n,):
            raise ValueError(f"targets shape {y.shape} != ({n},)")
        if q.shape != (d,):
            raise ValueError(f"query_input shape {q.shape} != ({d},)")
        if not self.regularizer > 0:
            raise ValueError(f"regularizer must be positive, got {self.regularizer}")
        for arr in (x, y, q):
            if not np.all(np.isfinite(arr)):
                raise ValueError("all problem data must be finite")
        if not math.isfinite(self.query_target):
            raise ValueError("query_target must be finite")


def _ridge_fit(x: np.ndarray, y: np.ndarray, lam: float) -> np.ndarray:
    d = x.shape[1]
    a = x.T @ x + lam * np.eye(d)
    try:
        return np.linalg.solve(a, x.T @ y)
    except np.linalg.LinAlgError as e:
        raise SingularSystemError(f"ridge system is singular: {e}") from None


def loo_influence(problem: RidgeProblem) -> np.ndarray:
    """Signed leave-one-out influence of each training point on the query loss.

    score_i = loss(query; fit without point i) - loss(query; full fit),
    with squared-error loss; each reduced model is re-solved exactly.
    Positive score means the point's presence lowered the query loss.
    """
    x, y, lam = problem.design, problem.targets, problem.regularizer
    q, yq = problem.query_input, problem.query_target
    theta_full = _ridge_fit(x, y, lam)
    base_loss = (float(q @ theta_full) - yq) ** 2
    n = x.shape[0]
    scores = np.empty(n)
    for i in range(n):
        keep = np.arange(n) != i
        theta_i = _ridge_fit(x[keep], y[keep], lam)
        scores[i] = (float(q @ theta_i) - yq) ** 2 - base_loss
    return scores


def normalize_influence(raw: Sequence[float] | np.ndarray) -> np.ndarray:
    """Map signed scores onto the unit simplex.

    Shift by min(0, smallest score) so everything is non-negative, then
    divide by the sum; if all shifted scores are 0, fall back to uniform.
    Total on any finite input.
    """
    scores = np.asarray(raw, dtype=np.float64)
    if scores.size == 0:
        raise EmptyTrainingSetError("need at least one score")
    shifted = scores - min(0.0, float(scores.min()))
    total = float(shifted.sum())
    if total == 0.0:
        return np.full(scores.size, 1.0 / scores.size)
    return shifted / total


def write_influence_csv(matrix: InfluenceMatrix, path: str | Path | io.TextIOBase) -> None:
    """Serialize as CSV: one row per output, one column per training work_id."""
    own = isinstance(path, (str, Path))
    fh = open(path, "w", encoding="utf-8", newline="") if own else path
    try:
        writer = csv.writer(fh)
        writer.writerow(["output_id", *matrix.training_ids])
        for j, output_id in enumerate(matrix.output_ids):
            writer.writerow([output_id, *(repr(v) for v in matrix.weights[j].tolist())])
    finally:
        if own:
            fh.close()


def read_influence_csv(path: str | Path) -> InfluenceMatrix:
    """Load a matrix written by write_influence_csv, re-validating invariants."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedRowError(1, "missing header") from None
        if not header or header[0] != "output_id":
            raise MalformedRowError(1, f"bad header {header!r}")
        training_ids = tuple(header[1:])
        output_ids: list[str] = []
        rows: list[list[float]] = []
        for line_number, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(training_ids) + 1:
                raise MalformedRowError(line_number, "wrong number of cells")
            output_ids.append(row[0])
            try:
                rows.append([float(v) for v in row[1:]])
            except ValueError:
                raise MalformedRowError(line_number, "non-numeric weight") from None
    try:
        return InfluenceMatrix(tuple(output_ids), training_ids, np.array(rows))
    except ValueError as e:
        raise MalformedRowError(2, str(e)) from None
