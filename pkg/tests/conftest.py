import json
from pathlib import Path

import pytest

from clipright.embedstore import EmbeddingRecord, load_store

REPO_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = REPO_ROOT / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def shipped_store():
    return load_store(DATA_DIR / "embeddings.jsonl")


@pytest.fixture(scope="session")
def shipped_cases_path() -> Path:
    return DATA_DIR / "cases.csv"


def make_record(work_id, vector, model_id="test-model"):
    return EmbeddingRecord(
        work_id=work_id, model_id=model_id, dim=len(vector), vector=tuple(float(x) for x in vector)
    )


def write_store_file(path: Path, records):
    """Write raw record dicts (or EmbeddingRecords) as a JSONL store file."""
    lines = []
    for rec in records:
        if isinstance(rec, EmbeddingRecord):
            rec = {
                "work_id": rec.work_id,
                "model_id": rec.model_id,
                "dim": rec.dim,
                "vector": list(rec.vector),
            }
        lines.append(json.dumps(rec))
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    return path
