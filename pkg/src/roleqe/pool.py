"""Candidate expansion-term pooling, filtering and selection.

Tokens surrounding a matched base pair form a global pool per query.
Stopwords, non-alphabetic strings and anything stem-equal to an
original query term are discarded; morphological variants collapse
onto the most frequent surface form with their unigram frequencies
summed, and the top-n survivors become the expansion terms.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .porter import porter_stem
from .textlex import StopList, UnigramFrequencyTable, is_clean_term


@dataclass(frozen=True)
class CandidateTerm:
    surface: str
    root: str
    frequency: int


@dataclass(frozen=True)
class CandidatePool:
    query_id: str
    candidates: tuple  # CandidateTerm, sorted by frequency desc then surface

    def __len__(self) -> int:
        return len(self.candidates)

    def surfaces(self) -> list[str]:
        return [c.surface for c in self.candidates]


def extract_candidates(matches, pair) -> Counter:
    """Multiset of co-occurring tokens from matched records.

    Every token of each record except the base-pair terms themselves is
    collected, weighted by the record frequency.  A base-pair term
    showing up again at a wildcard slot stays excluded.
    """
    t1, t2 = (pair.tokens if hasattr(pair, "tokens") else tuple(pair))
    excluded = {t1.lower(), t2.lower()}
    raw: Counter = Counter()
    for rec in matches:
        for token in rec.tokens:
            if token not in excluded:
                raw[token] += rec.frequency
    return raw


def filter_candidates(raw, original_terms, stoplist: StopList) -> set:
    """Drop stopwords, unclean terms, and stems of original query terms."""
    original_stems = {porter_stem(t.lower()) for t in original_terms}
    kept = set()
    for term in raw:
        term_l = term.lower()
        if term_l in stoplist.entries:
            continue
        if not is_clean_term(term_l):
            continue
        if porter_stem(term_l) in original_stems:
            continue
        kept.add(term_l)
    return kept


def collapse_variants(
    cands, freqs: UnigramFrequencyTable, query_id: str = ""
) -> CandidatePool:
    """Merge morphological variants per Porter root.

    The retained surface form is the variant with the highest unigram
    frequency (lexicographically first on ties); the group ranks by the
    sum of its variants' unigram frequencies.
    """
    groups: dict[str, list] = {}
    for term in cands:
        groups.setdefault(porter_stem(term), []).append(term)
    pooled = []
    for root, variants in groups.items():
        best = min(variants, key=lambda v: (-freqs.frequency(v), v))
        total = sum(freqs.frequency(v) for v in variants)
        pooled.append(CandidateTerm(surface=best, root=root, frequency=total))
    pooled.sort(key=lambda c: (-c.frequency, c.surface))
    return CandidatePool(query_id=query_id, candidates=tuple(pooled))


def select_top_n(pool: CandidatePool, n: int = 5) -> list[CandidateTerm]:
    """First n pool entries; empty result marks the query un-expandable."""
    if n < 1:
        raise ValueError("n must be positive")
    return list(pool.candidates[:n])


def build_pool(
    pair_matches,
    original_terms,
    stoplist: StopList,
    freqs: UnigramFrequencyTable,
    query_id: str = "",
) -> CandidatePool:
    """Pool pipeline over all base pairs of one query.

    ``pair_matches`` is an iterable of (base_pair, matched_records).
    Candidates from different pairs merge set-wise, so processing order
    does not matter.
    """
    merged = set()
    for pair, matches in pair_matches:
        raw = extract_candidates(matches, pair)
        merged |= filter_candidates(raw, original_terms, stoplist)
    return collapse_variants(merged, freqs, query_id)


def dump_pool(pool: CandidatePool) -> str:
    """Diagnostic dump: ``query_id<TAB>term<TAB>root<TAB>freq`` lines."""
    return "".join(
        f"{pool.query_id}\t{c.surface}\t{c.root}\t{c.frequency}\n"
        for c in pool.candidates
    )
