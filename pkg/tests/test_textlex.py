from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from roleqe.textlex import (
    StopList,
    UnigramFrequencyTable,
    is_clean_term,
    is_stopword,
    porter_stem,
    tokenize,
)
from porter_reference import reference_stem

DATA = Path(__file__).parent / "data"


class TestTokenize:
    def test_plain_words(self):
        assert tokenize("coping with overcrowded prisons") == [
            "coping",
            "with",
            "overcrowded",
            "prisons",
        ]

    def test_empty(self):
        assert tokenize("") == []
        assert tokenize("   ") == []

    def test_underscore_units_survive(self):
        assert tokenize("demographic shifts in the United_States") == [
            "demographic",
            "shifts",
            "in",
            "the",
            "United_States",
        ]

    def test_edge_punctuation_stripped(self):
        assert tokenize('"quoted," (bracketed) trail.') == [
            "quoted",
            "bracketed",
            "trail",
        ]

    def test_internal_hyphen_and_slash_kept(self):
        assert tokenize("al-qaeda imports/exports 13/jan/06") == [
            "al-qaeda",
            "imports/exports",
            "13/jan/06",
        ]

    @given(st.lists(st.text(alphabet="abcdefg_-", min_size=1), max_size=8))
    def test_round_trip_stability(self, words):
        once = tokenize(" ".join(words))
        assert tokenize(" ".join(once)) == once


class TestPorter:
    def test_no_suffix_rule(self):
        assert porter_stem("run") == "run"

    def test_reference_examples(self):
        assert porter_stem("coping") == "cope"
        assert porter_stem("prisons") == "prison"

    def test_short_and_nonalpha_unchanged(self):
        assert porter_stem("at") == "at"
        assert porter_stem("13/jan/06") == "13/jan/06"
        assert porter_stem("United_States") == "United_States"

    def test_vocabulary_file_equality(self):
        words = (DATA / "porter_vocabulary.txt").read_text().splitlines()
        stems = (DATA / "porter_output.txt").read_text().splitlines()
        assert len(words) == len(stems) and len(words) > 10000
        produced = [porter_stem(w) for w in words]
        assert produced == stems

    def test_against_live_reference_implementation(self):
        words = (DATA / "porter_vocabulary.txt").read_text().splitlines()
        for word in words[::7]:
            assert porter_stem(word) == reference_stem(word)

    @given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=20))
    def test_matches_reference_on_random_words(self, word):
        assert porter_stem(word) == reference_stem(word)

    @given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=20))
    def test_length_bound(self, word):
        assert len(porter_stem(word)) <= len(word) + 1


class TestStopList:
    def test_membership(self, stoplist):
        assert is_stopword("and", stoplist)
        assert is_stopword("AND", stoplist)
        assert not is_stopword("jails", stoplist)
        assert not is_stopword("", stoplist)

    def test_from_file(self, tmp_path):
        path = tmp_path / "stop.txt"
        path.write_text("the\nof\n\n")
        sl = StopList.from_file(path)
        assert len(sl) == 2 and "the" in sl

    def test_multi_word_entry_rejected(self):
        with pytest.raises(ValueError, match="single words"):
            StopList(["the", "new york"])


class TestCleanTerm:
    @pytest.mark.parametrize(
        "term,expected",
        [
            ("jails", True),
            ("13/jan/06", False),
            ("108", False),
            ("", False),
            ("ok-ish", False),
            ("ASCII", True),
        ],
    )
    def test_examples(self, term, expected):
        assert is_clean_term(term) is expected

    def test_ncp_units(self):
        assert is_clean_term("United_States", ncp_unit=True)
        assert not is_clean_term("United_States")
        assert not is_clean_term("United_2", ncp_unit=True)
        assert not is_clean_term("a__b", ncp_unit=True)

    @given(st.text(min_size=1, max_size=12))
    def test_clean_implies_letters_only(self, term):
        if is_clean_term(term):
            assert all(("A" <= c <= "Z") or ("a" <= c <= "z") for c in term)


class TestUnigramTable:
    def test_lookup_and_default(self, tmp_path):
        path = tmp_path / "uni.tsv"
        path.write_text("Ban\t50\nbans\t20\n")
        table = UnigramFrequencyTable.from_file(path)
        assert table.frequency("ban") == 50
        assert table.frequency("BAN") == 50
        assert table.frequency("banned") == 0

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "uni.tsv"
        path.write_text("ban fifty\n")
        with pytest.raises(ValueError, match="bad unigram line"):
            UnigramFrequencyTable.from_file(path)

    def test_negative_count_rejected(self, tmp_path):
        path = tmp_path / "uni.tsv"
        path.write_text("ban\t-3\n")
        with pytest.raises(ValueError, match="bad unigram line"):
            UnigramFrequencyTable.from_file(path)
        with pytest.raises(ValueError, match="negative"):
            UnigramFrequencyTable({"ban": -3})
