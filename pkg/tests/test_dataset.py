import json

import pytest

from cotcondense.dataset import FieldMap, LineFailure, read_dataset, write_dataset
from cotcondense.errors import MalformedLineError, MissingFieldError
from cotcondense.trace import CoTExample


def write_lines(path, lines):
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def record(q="q", g="t", a="a", **extra):
    return json.dumps({"problem": q, "generation": g, "answer": a, **extra})


class TestRead:
    def test_valid_file_in_order(self, tmp_path):
        path = tmp_path / "data.jsonl"
        write_lines(path, [record(q=f"q{i}") for i in range(3)])
        examples = list(read_dataset(path))
        assert [e.question for e in examples] == ["q0", "q1", "q2"]

    def test_skip_mode_reports_failures(self, tmp_path):
        path = tmp_path / "data.jsonl"
        write_lines(path, [record(q="q0"), "{not json", record(q="q2")])
        failures = []
        examples = list(read_dataset(path, failures=failures))
        assert len(examples) == 2
        assert len(failures) == 1
        assert failures[0].line_no == 2

    def test_fail_mode_raises(self, tmp_path):
        path = tmp_path / "data.jsonl"
        write_lines(path, ["{not json"])
        with pytest.raises(MalformedLineError):
            list(read_dataset(path, on_error="fail"))

    def test_missing_field(self, tmp_path):
        path = tmp_path / "data.jsonl"
        write_lines(path, [json.dumps({"problem": "q", "answer": "a"})])
        with pytest.raises(MissingFieldError):
            list(read_dataset(path, on_error="fail"))

    def test_non_string_field(self, tmp_path):
        path = tmp_path / "data.jsonl"
        write_lines(path, [json.dumps({"problem": "q", "generation": 5, "answer": "a"})])
        failures = []
        assert list(read_dataset(path, failures=failures)) == []
        assert "not a string" in failures[0].reason

    def test_custom_field_map(self, tmp_path):
        path = tmp_path / "data.jsonl"
        write_lines(path, [json.dumps({"q": "ask", "cot": "think", "ans": "42"})])
        fields = FieldMap(question="q", trace="cot", answer="ans")
        (example,) = read_dataset(path, fields)
        assert (example.question, example.trace, example.answer) == ("ask", "think", "42")

    def test_blank_lines_ignored(self, tmp_path):
        path = tmp_path / "data.jsonl"
        path.write_text(record() + "\n\n" + record() + "\n", encoding="utf-8")
        assert len(list(read_dataset(path))) == 2

    def test_extra_fields_captured(self, tmp_path):
        path = tmp_path / "data.jsonl"
        write_lines(path, [record(level=3, source="x")])
        (example,) = read_dataset(path)
        assert example.extra == {"level": 3, "source": "x"}

    def test_numeric_id_coerced(self, tmp_path):
        path = tmp_path / "data.jsonl"
        write_lines(path, [record(id=17)])
        (example,) = read_dataset(path)
        assert example.id == "17"


class TestRoundTrip:
    def test_write_then_read_identity(self, tmp_path):
        examples = [
            CoTExample(question="q1", trace="a\n\nb", answer="x", id="1"),
            CoTExample(
                question="q2 é汉",
                trace="<think>\nc\n</think>",
                answer="y",
                extra={"k": [1, 2]},
            ),
        ]
        path = tmp_path / "out.jsonl"
        count = write_dataset(path, examples)
        assert count == 2
        back = list(read_dataset(path, on_error="fail"))
        assert back == examples

    def test_unicode_preserved_unescaped(self, tmp_path):
        path = tmp_path / "out.jsonl"
        write_dataset(path, [CoTExample(question="π", trace="汉字", answer="ß")])
        raw = path.read_text(encoding="utf-8")
        assert "汉字" in raw and "\\u" not in raw


def test_line_failure_to_dict():
    assert LineFailure(3, "bad").to_dict() == {"line": 3, "reason": "bad"}
