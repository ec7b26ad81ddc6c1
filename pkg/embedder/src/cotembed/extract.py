"""Trace embedding extraction: mean-pooled final hidden states per example.

Each selected text field is tokenized (truncated at the context limit),
run through the model, and mean-pooled over non-padding token positions
of the last hidden layer, one row per input example. Rows are written in
input order to an .embm file, with a JSON manifest alongside recording
provenance and truncation statistics.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from .embfile import write_embm
from .errors import DatasetError, ModelLoadError

log = logging.getLogger("cotembed")


@dataclass(frozen=True)
class EmbedJob:
    """One extraction run: what to embed, with which model, written where."""

    input_path: str
    output_path: str
    model_id: str
    text_field: str = "generation"
    batch_size: int = 8
    max_length: int = 4096
    device: str = "cpu"
    revision: str | None = None
    strategy: str | None = None
    tau: float | None = None


def read_texts(path: str | Path, field: str) -> list[str]:
    """Load the text field of every record; malformed or empty rows are errors.

    Every input example must yield exactly one embedding row, so a bad
    record cannot be skipped without silently misaligning the matrix.
    """
    texts = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"line {line_no}: invalid JSON: {exc.msg}") from exc
            value = record.get(field)
            if not isinstance(value, str):
                raise DatasetError(f"line {line_no}: field {field!r} missing or not a string")
            if not value.strip():
                raise DatasetError(f"line {line_no}: field {field!r} is empty")
            texts.append(value)
    if not texts:
        raise DatasetError(f"{path}: no records")
    return texts


def _resolve_device(preference: str) -> torch.device:
    if preference == "auto":
        return torch.device("cuda" if torch.cuda.is_available() else "cpu")
    return torch.device(preference)


def load_model(model_id: str, revision: str | None, device: torch.device):
    from transformers import AutoModel, AutoTokenizer

    try:
        tokenizer = AutoTokenizer.from_pretrained(model_id, revision=revision)
        model = AutoModel.from_pretrained(model_id, revision=revision)
    except Exception as exc:  # transformers raises a zoo of types here
        raise ModelLoadError(f"could not load {model_id!r}: {exc}") from exc
    if tokenizer.pad_token is None:
        # Decoder-only models often ship without one; any id works since
        # pooling masks padding positions out.
        tokenizer.pad_token = tokenizer.eos_token or tokenizer.unk_token
    model.eval()
    model.to(device)
    return tokenizer, model


def _context_limit(model, requested: int) -> int:
    limit = getattr(model.config, "max_position_embeddings", None) or getattr(
        model.config, "n_positions", None
    )
    if limit and requested > limit:
        log.warning("max length %d exceeds model context %d; clamping", requested, limit)
        return limit
    return requested


def _pool_batch(model, tokenizer, texts: list[str], max_length: int, device) -> tuple[np.ndarray, int]:
    """Returns (rows, truncated_count) for one batch."""
    lengths = [len(ids) for ids in tokenizer(texts, truncation=False)["input_ids"]]
    truncated = sum(1 for n in lengths if n > max_length)
    encoded = tokenizer(
        texts,
        truncation=True,
        max_length=max_length,
        padding=True,
        return_tensors="pt",
    ).to(device)
    with torch.no_grad():
        hidden = model(**encoded).last_hidden_state
    mask = encoded["attention_mask"].unsqueeze(-1).to(hidden.dtype)
    pooled = (hidden * mask).sum(dim=1) / mask.sum(dim=1)
    return pooled.to(torch.float32).cpu().numpy(), truncated


def embed_traces(job: EmbedJob) -> dict:
    """Run the extraction job; returns the manifest (also written to disk).

    The manifest lands next to the output as ``<output>.manifest.json``.
    """
    texts = read_texts(job.input_path, job.text_field)
    device = _resolve_device(job.device)
    tokenizer, model = load_model(job.model_id, job.revision, device)
    max_length = _context_limit(model, job.max_length)

    rows = []
    truncated = 0
    try:
        for start in range(0, len(texts), job.batch_size):
            batch = texts[start : start + job.batch_size]
            pooled, batch_truncated = _pool_batch(model, tokenizer, batch, max_length, device)
            rows.append(pooled)
            truncated += batch_truncated
    except torch.cuda.OutOfMemoryError as exc:
        raise ModelLoadError(
            f"out of memory at batch size {job.batch_size}; reduce --batch"
        ) from exc

    matrix = np.concatenate(rows, axis=0)
    dataset_hash = hashlib.sha256(Path(job.input_path).read_bytes()).hexdigest()
    meta = {
        "model": job.model_id,
        "strategy": job.strategy,
        "tau": job.tau,
        "dataset_hash": dataset_hash,
    }
    write_embm(job.output_path, matrix, meta)

    manifest = {
        "schema_version": 1,
        "model": job.model_id,
        "revision": job.revision,
        "text_field": job.text_field,
        "rows": int(matrix.shape[0]),
        "hidden_size": int(matrix.shape[1]),
        "batch_size": job.batch_size,
        "max_length": max_length,
        "truncated_examples": truncated,
        "dataset_hash": dataset_hash,
        "device": str(device),
        "output": str(job.output_path),
    }
    manifest_path = Path(str(job.output_path) + ".manifest.json")
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    if truncated:
        log.warning("%d of %d examples were truncated at %d tokens", truncated, len(texts), max_length)
    log.info("wrote %dx%d matrix to %s", matrix.shape[0], matrix.shape[1], job.output_path)
    return manifest
