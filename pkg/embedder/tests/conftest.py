import json

import pytest
import torch
from tokenizers import Tokenizer, models, pre_tokenizers
from transformers import GPT2Config, GPT2Model, PreTrainedTokenizerFast

WORDS = (
    "step of example the sum is wait check answer because value equals "
    "number first second third final part item plus minus times result"
).split()


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory):
    """A deterministic, randomly initialized toy model saved to disk.

    Loading goes through AutoModel/AutoTokenizer exactly like a published
    checkpoint, so the extractor code path is the production one.
    """
    vocab = {"[PAD]": 0, "[UNK]": 1}
    for word in WORDS:
        vocab[word] = len(vocab)
    for ch in ".,!?0123456789":
        vocab[ch] = len(vocab)
    tok = Tokenizer(models.WordLevel(vocab, unk_token="[UNK]"))
    tok.pre_tokenizer = pre_tokenizers.Whitespace()
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=tok, pad_token="[PAD]", unk_token="[UNK]"
    )
    config = GPT2Config(
        vocab_size=len(vocab),
        n_embd=16,
        n_layer=2,
        n_head=2,
        n_positions=64,
        bos_token_id=0,
        eos_token_id=0,
    )
    torch.manual_seed(1234)
    model = GPT2Model(config)
    path = tmp_path_factory.mktemp("tiny_model")
    tokenizer.save_pretrained(path)
    model.save_pretrained(path)
    return str(path)


@pytest.fixture
def toy_dataset(tmp_path):
    path = tmp_path / "toy.jsonl"
    records = [
        {"problem": "q0", "generation": "the sum is 3\n\nwait check the answer", "answer": "3"},
        {"problem": "q1", "generation": "first part equals 7\n\nsecond part equals 2\n\nfinal answer 9", "answer": "9"},
        {"problem": "q2", "generation": "value times number is result", "answer": "1"},
    ]
    path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
    return path
