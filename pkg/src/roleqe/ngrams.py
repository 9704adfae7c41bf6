"""N-gram corpus index and wildcard-sequence matching.

The corpus holds 1..5-gram records with observed frequencies.  For a
pair of grammatically linked query terms, every slot placement that
keeps the pair in order (and every placement of the inverted pair) is
instantiated as a wildcard sequence over 3/4/5-gram windows; matching
records supply the co-occurring terms used as expansion candidates.
"""

from __future__ import annotations

import gzip
import logging
from dataclasses import dataclass
from itertools import combinations

logger = logging.getLogger(__name__)

MAX_N = 5
_PAIR_LENGTHS = (3, 4, 5)


@dataclass(frozen=True)
class NGramRecord:
    tokens: tuple
    frequency: int

    def __post_init__(self):
        if not 1 <= len(self.tokens) <= MAX_N:
            raise ValueError(f"n-gram length must be 1..{MAX_N}: {self.tokens!r}")
        if self.frequency < 1:
            raise ValueError(f"frequency must be positive: {self.frequency}")


@dataclass(frozen=True)
class WildcardSequence:
    """Slot pattern of length n: fixed terms at two slots, None elsewhere."""

    n: int
    pattern: tuple

    def __post_init__(self):
        fixed = [s for s in self.pattern if s is not None]
        if len(self.pattern) != self.n or len(fixed) != 2:
            raise ValueError(f"pattern must have length {self.n} with 2 fixed slots")

    @property
    def fixed_slots(self):
        return [(i, s) for i, s in enumerate(self.pattern) if s is not None]


class NGramIndex:
    """Records grouped by length with term-at-slot postings."""

    def __init__(self):
        self._records: dict[int, list[NGramRecord]] = {n: [] for n in range(1, MAX_N + 1)}
        self._postings: dict[tuple, set] = {}

    def add(self, tokens, frequency: int):
        tokens = tuple(t.lower() for t in tokens)
        n = len(tokens)
        key = (tokens, n)
        slot0 = self._postings.get((tokens[0], 0, n))
        if slot0 is not None:
            for idx in slot0:
                rec = self._records[n][idx]
                if rec.tokens == tokens:
                    self._records[n][idx] = NGramRecord(tokens, rec.frequency + frequency)
                    return
        idx = len(self._records[n])
        self._records[n].append(NGramRecord(tokens, frequency))
        for slot, term in enumerate(tokens):
            self._postings.setdefault((term, slot, n), set()).add(idx)

    def records(self, n: int | None = None):
        if n is not None:
            return list(self._records[n])
        return [rec for group in self._records.values() for rec in group]

    def __len__(self) -> int:
        return sum(len(group) for group in self._records.values())

    def lookup(self, term: str, slot: int, n: int) -> set:
        return self._postings.get((term.lower(), slot, n), set())

    def match(self, seq: WildcardSequence) -> list[NGramRecord]:
        (s1, t1), (s2, t2) = seq.fixed_slots
        hits = self.lookup(t1, s1, seq.n) & self.lookup(t2, s2, seq.n)
        return [self._records[seq.n][i] for i in hits]


def build_index(corpus_path, lenient: bool = False) -> NGramIndex:
    """Index a ``tok1 .. tokn<TAB>count`` corpus file (gzip accepted).

    Duplicate n-gram lines have their counts summed.  Malformed lines
    raise with their line number unless ``lenient``, which skips them
    with a warning.
    """
    index = NGramIndex()
    opener = gzip.open if str(corpus_path).endswith(".gz") else open
    with opener(corpus_path, "rt", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                gram, count_text = line.split("\t")
                tokens = tuple(gram.split())
                count = int(count_text)
                if not tokens or count < 1:
                    raise ValueError("empty gram or non-positive count")
                if len(tokens) > MAX_N:
                    raise ValueError(f"n-gram longer than {MAX_N}")
            except ValueError as exc:
                if lenient:
                    logger.warning("%s:%d: skipping bad line %r", corpus_path, lineno, line)
                    continue
                raise ValueError(f"{corpus_path}:{lineno}: bad n-gram line {line!r}") from exc
            index.add(tokens, count)
    logger.info("indexed %d n-gram records from %s", len(index), corpus_path)
    return index


def generate_wildcard_sequences(pair) -> list[WildcardSequence]:
    """All slot placements of the pair, in both orders, over 3/4/5-grams.

    ``pair`` is a BasePair or a plain (term1, term2) tuple.  Duplicates
    (which arise when both terms are equal) are removed.
    """
    t1, t2 = (pair.tokens if hasattr(pair, "tokens") else tuple(pair))
    t1, t2 = t1.lower(), t2.lower()
    seqs: list[WildcardSequence] = []
    seen = set()
    for n in _PAIR_LENGTHS:
        for ordered in ((t1, t2), (t2, t1)):
            for i, j in combinations(range(n), 2):
                pattern = [None] * n
                pattern[i], pattern[j] = ordered
                seq = WildcardSequence(n, tuple(pattern))
                if seq.pattern not in seen:
                    seen.add(seq.pattern)
                    seqs.append(seq)
    return seqs


def match_sequences(
    index: NGramIndex, seqs, limit: int | None = None
) -> list[NGramRecord]:
    """Union of records matching any sequence, most frequent first.

    A record matches when its length equals the sequence's n and each
    fixed slot equals the record token at that slot.  Ties in frequency
    break lexicographically on the tokens; ``limit`` keeps the top
    entries of the merged ranking.
    """
    merged: dict[tuple, NGramRecord] = {}
    for seq in seqs:
        for rec in index.match(seq):
            merged[rec.tokens] = rec
    ranked = sorted(merged.values(), key=lambda r: (-r.frequency, r.tokens))
    if limit is not None:
        ranked = ranked[:limit]
    return ranked
