from .extractor import (
    DEFAULT_MODEL_ID,
    ExtractionJob,
    ExtractionResult,
    ExtractorError,
    ImageEmbedder,
    ModelLoadFailureError,
    UnreadableImageError,
    extract,
)

__version__ = "0.1.0"
