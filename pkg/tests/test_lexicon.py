import pytest
from hypothesis import given, strategies as st

from cotcondense.errors import DomainError
from cotcondense.lexicon import (
    DEFAULT_MARKERS,
    ReflectionLexicon,
    count_reflection_tokens,
)


@pytest.fixture
def wait_hmm():
    return ReflectionLexicon.from_markers(["wait", "hmm"])


class TestCounting:
    def test_direct_count(self, wait_hmm):
        assert count_reflection_tokens("Wait, hmm, so wait.", wait_hmm) == 3

    def test_word_boundary_excludes_substrings(self, wait_hmm):
        assert count_reflection_tokens("The waiter waited.", wait_hmm) == 0

    def test_empty_text(self, wait_hmm):
        assert count_reflection_tokens("", wait_hmm) == 0

    def test_case_insensitive(self, wait_hmm):
        assert count_reflection_tokens("WAIT wait Wait", wait_hmm) == 3

    def test_punctuation_adjacency(self, wait_hmm):
        assert count_reflection_tokens("(wait!) ...hmm?", wait_hmm) == 2

    def test_multiword_marker(self):
        lex = ReflectionLexicon.from_markers(["let me check"])
        assert count_reflection_tokens("Let me check that. Let me  check again.", lex) == 2
        assert count_reflection_tokens("Let me checker", lex) == 0

    def test_overlapping_distinct_markers_both_count(self):
        lex = ReflectionLexicon.from_markers(["on second thought", "second"])
        assert count_reflection_tokens("On second thought, yes.", lex) == 2

    def test_count_by_marker(self, wait_hmm):
        counts = ReflectionLexicon.from_markers(["wait", "hmm"]).count_by_marker(
            "wait hmm wait"
        )
        assert counts == {"wait": 2, "hmm": 1}

    def test_default_lexicon_markers(self):
        lex = ReflectionLexicon.default()
        assert count_reflection_tokens("But wait, therefore hmm.", lex) == 4
        assert set(DEFAULT_MARKERS) >= {"wait", "hmm"}


class TestFinditer:
    def test_leftmost_longest(self):
        lex = ReflectionLexicon.from_markers(["let me check", "check"])
        spans = list(lex.finditer("ok let me check this check"))
        texts = ["ok let me check this check"[a:b] for a, b in spans]
        assert texts == ["let me check", "check"]

    def test_no_overlap(self):
        lex = ReflectionLexicon.from_markers(["wait"])
        spans = list(lex.finditer("wait wait wait"))
        assert spans == [(0, 4), (5, 9), (10, 14)]


class TestConstruction:
    def test_empty_lexicon_rejected(self):
        with pytest.raises(DomainError):
            ReflectionLexicon.from_markers([])

    def test_from_file(self, tmp_path):
        path = tmp_path / "lex.txt"
        path.write_text("# comment\nwait\nlet me check  # trailing\n\nhmm\n", encoding="utf-8")
        lex = ReflectionLexicon.from_file(path)
        assert count_reflection_tokens("wait, let me check... hmm", lex) == 3

    def test_from_file_empty(self, tmp_path):
        path = tmp_path / "lex.txt"
        path.write_text("# only a comment\n", encoding="utf-8")
        with pytest.raises(DomainError):
            ReflectionLexicon.from_file(path)

    def test_packaged_default_lexicon_matches_builtin(self):
        from importlib.resources import files

        packaged = files("cotcondense").joinpath("data/default_lexicon.txt")
        lex = ReflectionLexicon.from_markers(
            line.split("#", 1)[0].strip()
            for line in packaged.read_text(encoding="utf-8").splitlines()
            if line.split("#", 1)[0].strip()
        )
        assert lex == ReflectionLexicon.default()


_word = st.text(alphabet=st.characters(whitelist_categories=("Ll",)), min_size=1, max_size=8)


@given(st.lists(_word, max_size=20), st.lists(_word, max_size=20))
def test_count_monotone_under_concatenation(left, right):
    # Whitespace joints cannot create the single-token markers used here.
    lex = ReflectionLexicon.from_markers(["wait", "hmm"])
    a = " ".join(left)
    b = " ".join(right)
    assert lex.count(a + " " + b) == lex.count(a) + lex.count(b)
