"""Transformer-based trace embedding extractor producing .embm matrices."""

__version__ = "0.1.0"

from .embfile import read_embm, write_embm
from .errors import DatasetError, EmbedError, ModelLoadError
from .extract import EmbedJob, embed_traces, read_texts

__all__ = [
    "__version__",
    "EmbedJob",
    "embed_traces",
    "read_texts",
    "write_embm",
    "read_embm",
    "EmbedError",
    "ModelLoadError",
    "DatasetError",
]
