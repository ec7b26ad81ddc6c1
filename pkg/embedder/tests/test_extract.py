import hashlib
import json

import numpy as np
import pytest

from cotembed.embfile import read_embm
from cotembed.errors import DatasetError, ModelLoadError
from cotembed.extract import EmbedJob, embed_traces, read_texts


def job(dataset, out, model_dir, **kw):
    defaults = dict(
        input_path=str(dataset),
        output_path=str(out),
        model_id=model_dir,
        batch_size=8,
        max_length=64,
    )
    defaults.update(kw)
    return EmbedJob(**defaults)


class TestReadTexts:
    def test_reads_field_in_order(self, toy_dataset):
        texts = read_texts(toy_dataset, "generation")
        assert len(texts) == 3
        assert texts[0].startswith("the sum is 3")

    def test_missing_field(self, toy_dataset):
        with pytest.raises(DatasetError):
            read_texts(toy_dataset, "nope")

    def test_empty_text_is_error_not_zero_row(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text(
            json.dumps({"generation": "fine"}) + "\n" + json.dumps({"generation": "  "}) + "\n",
            encoding="utf-8",
        )
        with pytest.raises(DatasetError, match="line 2"):
            read_texts(path, "generation")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text("{broken\n", encoding="utf-8")
        with pytest.raises(DatasetError):
            read_texts(path, "generation")


class TestEmbedTraces:
    def test_shapes_and_manifest(self, toy_dataset, tiny_model_dir, tmp_path):
        out = tmp_path / "toy.embm"
        manifest = embed_traces(job(toy_dataset, out, tiny_model_dir))
        data, meta = read_embm(out)
        assert data.shape == (3, 16)  # m = examples, d = model hidden size
        assert manifest["rows"] == 3
        assert manifest["hidden_size"] == 16
        assert manifest["truncated_examples"] == 0
        expected_hash = hashlib.sha256(toy_dataset.read_bytes()).hexdigest()
        assert manifest["dataset_hash"] == expected_hash
        assert meta["dataset_hash"] == expected_hash
        assert meta["model"] == tiny_model_dir
        sidecar = json.loads((tmp_path / "toy.embm.manifest.json").read_text())
        assert sidecar == manifest

    def test_batch_size_regression_bound(self, toy_dataset, tiny_model_dir, tmp_path):
        # Pinned batching-numerics bound: measured 0.0 on this toy setup,
        # kept at 1e-4 to absorb BLAS/runtime variation.
        out1 = tmp_path / "b1.embm"
        out8 = tmp_path / "b8.embm"
        embed_traces(job(toy_dataset, out1, tiny_model_dir, batch_size=1))
        embed_traces(job(toy_dataset, out8, tiny_model_dir, batch_size=8))
        m1, _ = read_embm(out1)
        m8, _ = read_embm(out8)
        assert np.abs(m1.astype(np.float64) - m8.astype(np.float64)).max() <= 1e-4

    def test_deterministic_per_batch_size(self, toy_dataset, tiny_model_dir, tmp_path):
        out_a = tmp_path / "a.embm"
        out_b = tmp_path / "b.embm"
        embed_traces(job(toy_dataset, out_a, tiny_model_dir))
        embed_traces(job(toy_dataset, out_b, tiny_model_dir))
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_truncation_reported(self, tiny_model_dir, tmp_path):
        path = tmp_path / "long.jsonl"
        long_text = " ".join(["step"] * 50)
        path.write_text(
            json.dumps({"generation": long_text}) + "\n" + json.dumps({"generation": "the sum"}) + "\n",
            encoding="utf-8",
        )
        out = tmp_path / "long.embm"
        manifest = embed_traces(job(path, out, tiny_model_dir, max_length=10))
        assert manifest["truncated_examples"] == 1
        assert manifest["max_length"] == 10
        data, _ = read_embm(out)
        assert data.shape[0] == 2

    def test_max_length_clamped_to_model_context(self, toy_dataset, tiny_model_dir, tmp_path):
        out = tmp_path / "clamp.embm"
        manifest = embed_traces(job(toy_dataset, out, tiny_model_dir, max_length=4096))
        assert manifest["max_length"] == 64  # toy model context

    def test_strategy_and_tau_recorded(self, toy_dataset, tiny_model_dir, tmp_path):
        out = tmp_path / "meta.embm"
        embed_traces(job(toy_dataset, out, tiny_model_dir, strategy="epic", tau=0.5))
        _, meta = read_embm(out)
        assert meta["strategy"] == "epic"
        assert meta["tau"] == 0.5

    def test_missing_model_is_load_error(self, toy_dataset, tmp_path):
        with pytest.raises(ModelLoadError):
            embed_traces(job(toy_dataset, tmp_path / "x.embm", str(tmp_path / "no_model")))

    def test_pooling_excludes_padding(self, tiny_model_dir, tmp_path):
        # A short text must pool the same whether padded (batched with a
        # longer one) or alone; padding rows would otherwise bias the mean.
        short = {"generation": "the sum is 3"}
        long = {"generation": " ".join(["value"] * 40)}
        both = tmp_path / "both.jsonl"
        alone = tmp_path / "alone.jsonl"
        both.write_text(json.dumps(short) + "\n" + json.dumps(long) + "\n", encoding="utf-8")
        alone.write_text(json.dumps(short) + "\n", encoding="utf-8")
        out_both = tmp_path / "both.embm"
        out_alone = tmp_path / "alone.embm"
        embed_traces(job(both, out_both, tiny_model_dir, batch_size=2))
        embed_traces(job(alone, out_alone, tiny_model_dir, batch_size=1))
        m_both, _ = read_embm(out_both)
        m_alone, _ = read_embm(out_alone)
        assert np.abs(m_both[0] - m_alone[0]).max() <= 1e-5
