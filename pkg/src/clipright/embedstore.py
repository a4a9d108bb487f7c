"""On-disk embedding store shared with the extractor tool.

File format: UTF-8 text, one JSON object per line with keys ``work_id``
(string), ``model_id`` (string), ``dim`` (integer) and ``vector`` (array of
numbers). Unknown keys are ignored. A store file holds embeddings from
exactly one model; mixing models or dimensions is rejected at load time
because similarity values are meaningless across embedding spaces.

Numbers are serialized with Python's shortest round-trip float repr, so a
save/load cycle reproduces every component exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import (
    DimensionMismatchError,
    DuplicateWorkIdError,
    MalformedRecordError,
    MissingFileError,
    ModelMismatchError,
    UnknownWorkIdError,
)

_REQUIRED_KEYS = ("work_id", "model_id", "dim", "vector")


@dataclass(frozen=True)
class EmbeddingRecord:
    """One work's identity plus its embedding vector."""

    work_id: str
    model_id: str
    dim: int
    vector: tuple[float, ...]

    def __post_init__(self):
        if not self.work_id:
            raise ValueError("work_id must be nonempty")
        if self.dim <= 0:
            raise ValueError(f"dim must be positive, got {self.dim}")
        if len(self.vector) != self.dim:
            raise DimensionMismatchError(
                f"{self.work_id}: vector length {len(self.vector)} != dim {self.dim}"
            )
        if not all(math.isfinite(x) for x in self.vector):
            raise ValueError(f"{self.work_id}: vector has non-finite components")


@dataclass
class EmbeddingStore:
    """Immutable-after-load collection of records from a single model.

    ``model_id`` and ``dim`` are None only for an empty store.
    """

    model_id: str | None = None
    dim: int | None = None
    records: dict[str, EmbeddingRecord] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.records)

    def __contains__(self, work_id: str) -> bool:
        return work_id in self.records

    def work_ids(self) -> list[str]:
        return list(self.records)

    def get(self, work_id: str) -> EmbeddingRecord:
        try:
            return self.records[work_id]
        except KeyError:
            raise UnknownWorkIdError(f"unknown work_id: {work_id}") from None

    def add(self, record: EmbeddingRecord) -> None:
        if record.work_id in self.records:
            raise DuplicateWorkIdError(f"duplicate work_id: {record.work_id}")
        if self.model_id is None:
            self.model_id = record.model_id
            self.dim = record.dim
        else:
            if record.dim != self.dim:
                raise DimensionMismatchError(
                    f"{record.work_id}: dim {record.dim} != store dim {self.dim}"
                )
            if record.model_id != self.model_id:
                raise ModelMismatchError(
                    f"{record.work_id}: model {record.model_id!r} != store model "
                    f"{self.model_id!r}"
                )
        self.records[record.work_id] = record


def _parse_line(line: str, line_number: int) -> EmbeddingRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise MalformedRecordError(line_number, f"invalid JSON ({e.msg})") from None
    if not isinstance(obj, dict):
        raise MalformedRecordError(line_number, "record is not an object")
    for key in _REQUIRED_KEYS:
        if key not in obj:
            raise MalformedRecordError(line_number, f"missing key {key!r}")
    work_id, model_id, dim, vector = (obj[k] for k in _REQUIRED_KEYS)
    if not isinstance(work_id, str) or not work_id:
        raise MalformedRecordError(line_number, "work_id must be a nonempty string")
    if not isinstance(model_id, str) or not model_id:
        raise MalformedRecordError(line_number, "model_id must be a nonempty string")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim <= 0:
        raise MalformedRecordError(line_number, "dim must be a positive integer")
    if not isinstance(vector, list):
        raise MalformedRecordError(line_number, "vector must be an array")
    values: list[float] = []
    for x in vector:
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise MalformedRecordError(line_number, "vector components must be numbers")
        if not math.isfinite(x):
            raise MalformedRecordError(line_number, "vector components must be finite")
        values.append(float(x))
    if len(values) != dim:
        raise MalformedRecordError(
            line_number, f"vector length {len(values)} != dim {dim}"
        )
    return EmbeddingRecord(work_id, model_id, dim, tuple(values))


def load_store(path: str | Path) -> EmbeddingStore:
    """Load and validate an embedding file.

    Raises MissingFileError, MalformedRecordError (with the 1-based line
    number), DuplicateWorkIdError, DimensionMismatchError or
    ModelMismatchError. An empty file yields an empty store.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"embedding file not found: {path}")
    store = EmbeddingStore()
    with path.open(encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            store.add(_parse_line(line, line_number))
    return store


def save_store(store: EmbeddingStore, path: str | Path) -> None:
    """Write a store in the line format, records sorted by work_id."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for work_id in sorted(store.records):
            rec = store.records[work_id]
            fh.write(
                json.dumps(
                    {
                        "work_id": rec.work_id,
                        "model_id": rec.model_id,
                        "dim": rec.dim,
                        "vector": list(rec.vector),
                    },
                    separators=(",", ":"),
                )
                + "\n"
            )


def store_from_records(records: Iterable[EmbeddingRecord]) -> EmbeddingStore:
    """Build a store in memory, applying the same invariants as load_store."""
    store = EmbeddingStore()
    for rec in records:
        store.add(rec)
    return store
