"""Shared lexical utilities: tokenization, stoplist, term hygiene, unigram counts.

Everything here is a pure function over immutable data, safe for
concurrent use.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .porter import porter_stem

__all__ = [
    "tokenize",
    "porter_stem",
    "StopList",
    "UnigramFrequencyTable",
    "is_stopword",
    "is_clean_term",
]

# stripped from token edges; underscores and hyphens survive inside tokens
_EDGE_PUNCT = "\"'`.,;:!?()[]{}<>«»“”‘’*+=|\\/~@#$%^&"


def tokenize(raw: str) -> list[str]:
    """Split a line of text into tokens.

    Whitespace-delimited; punctuation attached to a word edge is stripped,
    while internal underscores, hyphens and other in-word characters are
    kept (so ``United_States`` and ``13/jan/06`` stay single tokens).
    """
    tokens = []
    for chunk in raw.split():
        word = chunk.strip(_EDGE_PUNCT)
        if word:
            tokens.append(word)
    return tokens


class StopList:
    """Exact-match stopword membership over lowercase single-word entries."""

    def __init__(self, entries):
        cleaned = set()
        for entry in entries:
            entry = entry.strip()
            if not entry:
                continue
            if any(c.isspace() for c in entry):
                raise ValueError(f"stoplist entries are single words: {entry!r}")
            cleaned.add(entry.lower())
        self.entries = frozenset(cleaned)

    def __contains__(self, term: str) -> bool:
        return term.lower() in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def from_file(cls, path) -> "StopList":
        """Load a one-term-per-line UTF-8 stoplist file."""
        text = Path(path).read_text(encoding="utf-8")
        return cls(line.strip() for line in text.splitlines())

    @classmethod
    def default(cls) -> "StopList":
        """Stoplist shipped with the package."""
        text = (
            resources.files("roleqe.data").joinpath("stoplist.txt").read_text("utf-8")
        )
        return cls(line.strip() for line in text.splitlines())


def is_stopword(term: str, stoplist: StopList) -> bool:
    return term in stoplist


class UnigramFrequencyTable:
    """term -> corpus frequency; absent terms count 0; keys lowercased."""

    def __init__(self, counts=None):
        self._counts: dict[str, int] = {}
        if counts:
            for term, count in dict(counts).items():
                self._counts[term.lower()] = self._check(count, term)

    @staticmethod
    def _check(count, term) -> int:
        count = int(count)
        if count < 0:
            raise ValueError(f"negative frequency for {term!r}: {count}")
        return count

    def frequency(self, term: str) -> int:
        return self._counts.get(term.lower(), 0)

    def __len__(self) -> int:
        return len(self._counts)

    @classmethod
    def from_file(cls, path) -> "UnigramFrequencyTable":
        """Load ``term<TAB>count`` lines."""
        table = cls()
        with open(path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                try:
                    term, count = line.split("\t")
                    table._counts[term.lower()] = cls._check(int(count), term)
                except ValueError as exc:
                    raise ValueError(
                        f"{path}:{lineno}: bad unigram line {line!r}"
                    ) from exc
        return table


def is_clean_term(term: str, ncp_unit: bool = False) -> bool:
    """True iff the term is purely ASCII-alphabetic.

    Rejects digits, symbols, and temporal/number expressions.  A phrase
    unit flagged ``ncp_unit`` may contain underscores provided each
    underscore-separated component is itself alphabetic.
    """
    if not term:
        return False
    if ncp_unit and "_" in term:
        parts = term.split("_")
        return all(part and _all_ascii_letters(part) for part in parts)
    return _all_ascii_letters(term)


def _all_ascii_letters(s: str) -> bool:
    return all(("A" <= c <= "Z") or ("a" <= c <= "z") for c in s)
