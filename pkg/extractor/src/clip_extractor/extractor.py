"""Batch CLIP image embedding extraction.

Writes one JSON record per image in the shared embedding-store line format
(keys: work_id, model_id, dim, vector), with work_id = file stem and the
vector unit-normalized. The output file is written atomically at job end.

The checkpoint is pinned per job: by local path (optionally verified
against a sha256 of its weights file) or by published hub identifier. For
a fixed checkpoint and preprocessing the extraction is deterministic.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

#: published checkpoint used for real runs; its image tower is 512-wide
DEFAULT_MODEL_ID = "openai/clip-vit-base-patch32"

_WEIGHT_FILENAMES = ("model.safetensors", "pytorch_model.bin")


class ExtractorError(Exception):
    pass


class UnreadableImageError(ExtractorError):
    def __init__(self, path: Path, reason: str):
        super().__init__(f"unreadable image {path}: {reason}")
        self.path = Path(path)
        self.reason = reason


class ModelLoadFailureError(ExtractorError):
    pass


@dataclass(frozen=True)
class ExtractionJob:
    image_paths: tuple[Path, ...]
    output_path: Path
    model_id: str = DEFAULT_MODEL_ID
    #: sha256 of the checkpoint's weights file; verifiable for local checkpoints
    expected_weights_sha256: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "image_paths", tuple(Path(p) for p in self.image_paths))
        object.__setattr__(self, "output_path", Path(self.output_path))
        stems = [p.stem for p in self.image_paths]
        duplicates = {s for s in stems if stems.count(s) > 1}
        if duplicates:
            raise ExtractorError(
                f"duplicate work_id from file stems: {', '.join(sorted(duplicates))}"
            )


@dataclass
class ExtractionResult:
    output_path: Path
    model_id: str
    dim: int
    written: list[str] = field(default_factory=list)
    failures: list[UnreadableImageError] = field(default_factory=list)


def _weights_file(model_dir: Path) -> Path | None:
    for name in _WEIGHT_FILENAMES:
        candidate = model_dir / name
        if candidate.is_file():
            return candidate
    return None


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


class ImageEmbedder:
    """The image tower of a CLIP checkpoint plus its preprocessor."""

    def __init__(self, model_id: str = DEFAULT_MODEL_ID,
                 expected_weights_sha256: str | None = None):
        import torch
        from transformers import CLIPImageProcessor, CLIPVisionModelWithProjection
        from transformers.utils import logging as hf_logging

        hf_logging.set_verbosity_error()
        hf_logging.disable_progress_bar()
        if expected_weights_sha256 is not None:
            model_dir = Path(model_id)
            weights = _weights_file(model_dir) if model_dir.is_dir() else None
            if weights is None:
                raise ModelLoadFailureError(
                    f"{model_id}: weights-hash pinning requires a local checkpoint "
                    "directory with a weights file"
                )
            actual = _sha256(weights)
            if actual != expected_weights_sha256:
                raise ModelLoadFailureError(
                    f"{model_id}: weights sha256 {actual} != expected "
                    f"{expected_weights_sha256}"
                )
        try:
            self._model = CLIPVisionModelWithProjection.from_pretrained(model_id)
            self._processor = CLIPImageProcessor.from_pretrained(model_id)
        except Exception as e:
            raise ModelLoadFailureError(f"cannot load checkpoint {model_id!r}: {e}") from e
        self._model.eval()
        self._torch = torch
        self.model_id = model_id
        self.dim = int(self._model.config.projection_dim)

    def embed_image(self, path: str | Path) -> np.ndarray:
        """Unit-normalized embedding of one image file."""
        from PIL import Image, UnidentifiedImageError

        path = Path(path)
        try:
            with Image.open(path) as img:
                rgb = img.convert("RGB")
        except (UnidentifiedImageError, OSError, ValueError) as e:
            raise UnreadableImageError(path, str(e)) from None
        inputs = self._processor(images=rgb, return_tensors="pt")
        with self._torch.no_grad():
            out = self._model(**inputs)
        vec = out.image_embeds[0].numpy().astype(np.float64)
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            raise UnreadableImageError(path, "degenerate zero embedding")
        return vec / norm


def extract(job: ExtractionJob, embedder: ImageEmbedder | None = None) -> ExtractionResult:
    """Embed every readable image in the job and write the store file.

    Unreadable images are collected as failures; all other records are
    still written. The output appears atomically (temp file + rename).
    """
    if embedder is None:
        embedder = ImageEmbedder(job.model_id, job.expected_weights_sha256)
    result = ExtractionResult(
        output_path=job.output_path, model_id=job.model_id, dim=embedder.dim
    )
    records = []
    for path in job.image_paths:
        try:
            vec = embedder.embed_image(path)
        except UnreadableImageError as failure:
            result.failures.append(failure)
            continue
        records.append(
            {
                "work_id": path.stem,
                "model_id": job.model_id,
                "dim": embedder.dim,
                "vector": vec.tolist(),
            }
        )
        result.written.append(path.stem)
    job.output_path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(
        dir=job.output_path.parent, prefix=job.output_path.name, suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            for record in records:
                fh.write(json.dumps(record, separators=(",", ":")) + "\n")
        os.replace(tmp_name, job.output_path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return result
