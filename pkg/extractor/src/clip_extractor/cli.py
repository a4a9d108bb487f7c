"""clip-extract: embed a directory of images into the shared store format."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .extractor import DEFAULT_MODEL_ID, ExtractionJob, ExtractorError, extract

IMAGE_SUFFIXES = {".jpg", ".jpeg", ".png"}


def discover_images(directory: Path) -> list[Path]:
    """JPEG/PNG files directly in the directory, sorted by name."""
    return sorted(
        p for p in directory.iterdir()
        if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES
    )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="clip-extract",
        description="compute CLIP image embeddings and write the embedding-store format",
    )
    parser.add_argument("--images", required=True, type=Path, help="directory of JPEG/PNG files")
    parser.add_argument("--model-id", default=DEFAULT_MODEL_ID,
                        help="checkpoint id or local path (default: %(default)s)")
    parser.add_argument("--out", required=True, type=Path, help="output embedding file")
    parser.add_argument("--expect-weights-sha256", default=None,
                        help="require this sha256 of the local checkpoint's weights file")
    args = parser.parse_args(argv)

    if not args.images.is_dir():
        print(f"error: not a directory: {args.images}", file=sys.stderr)
        return 1
    images = discover_images(args.images)
    if not images:
        print(f"error: no JPEG/PNG images in {args.images}", file=sys.stderr)
        return 1
    try:
        job = ExtractionJob(
            image_paths=tuple(images),
            output_path=args.out,
            model_id=args.model_id,
            expected_weights_sha256=args.expect_weights_sha256,
        )
        result = extract(job)
    except ExtractorError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    for failure in result.failures:
        print(f"error: {failure}", file=sys.stderr)
    print(f"records={len(result.written)} model_id={result.model_id} dim={result.dim}")
    return 1 if result.failures else 0


if __name__ == "__main__":
    sys.exit(main())
