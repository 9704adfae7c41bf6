"""Dirichlet-smoothed query-likelihood retrieval with weighted queries.

Documents are indexed stemmed with stopwords retained.  A structured
query is a weighted list of elements, each either a single term or an
ordered window ``#N(t1 t2 ...)`` requiring its terms in order with at
most N-1 tokens between consecutive terms.  A document scores the
weight-normalized sum of element log-probabilities (the log of the
weighted geometric mean), each element smoothed against collection
statistics with parameter mu.
"""

from __future__ import annotations

import logging
import math
import re
import threading
from dataclasses import dataclass
from pathlib import Path

from .porter import porter_stem
from .textlex import tokenize

logger = logging.getLogger(__name__)

DEFAULT_MU = 1500.0


@dataclass(frozen=True)
class QueryElement:
    """One weighted query element; window=None means a single term."""

    weight: float
    terms: tuple
    window: int | None = None

    def __post_init__(self):
        if self.weight < 0:
            raise ValueError("element weight must be non-negative")
        if self.window is not None and (self.window < 1 or len(self.terms) < 2):
            raise ValueError("ordered window needs N >= 1 and >= 2 terms")


@dataclass(frozen=True)
class StructuredQuery:
    query_id: str
    elements: tuple

    def __post_init__(self):
        if not self.elements:
            raise ValueError("query needs at least one element")


@dataclass(frozen=True)
class RunResult:
    query_id: str
    ranking: tuple  # (doc_id, score) descending


def _normalize_term(term: str) -> str:
    return porter_stem(term.lower())


class CollectionIndex:
    """Per-document and collection term statistics over stemmed tokens."""

    def __init__(self):
        self.doc_ids: list[str] = []
        self.doc_tokens: dict[str, list] = {}
        self.doc_tf: dict[str, dict] = {}
        self.doc_len: dict[str, int] = {}
        self.collection_tf: dict[str, int] = {}
        self.total_len = 0
        self._window_cf: dict[tuple, int] = {}
        self._window_lock = threading.Lock()
        self._unseen_logged: set = set()

    def add_document(self, doc_id: str, text: str):
        if doc_id in self.doc_tf:
            raise ValueError(f"duplicate doc_id {doc_id!r}")
        tokens = [_normalize_term(t) for t in tokenize(text)]
        tf: dict[str, int] = {}
        for tok in tokens:
            tf[tok] = tf.get(tok, 0) + 1
            self.collection_tf[tok] = self.collection_tf.get(tok, 0) + 1
        self.doc_ids.append(doc_id)
        self.doc_tokens[doc_id] = tokens
        self.doc_tf[doc_id] = tf
        self.doc_len[doc_id] = len(tokens)
        self.total_len += len(tokens)

    def window_collection_count(self, terms: tuple, window: int) -> int:
        """Collection-wide ordered-window count, computed once and cached."""
        key = (terms, window)
        cached = self._window_cf.get(key)
        if cached is not None:
            return cached
        with self._window_lock:
            cached = self._window_cf.get(key)
            if cached is None:
                cached = sum(
                    ordered_window_count(terms, window, self.doc_tokens[d])
                    for d in self.doc_ids
                )
                self._window_cf[key] = cached
        return cached

    def log_unseen(self, label: str):
        if label not in self._unseen_logged:
            self._unseen_logged.add(label)
            logger.warning("element %r absent from the whole collection", label)


def index_collection(docs) -> CollectionIndex:
    """Index an iterable of (doc_id, text); doc_ids must be unique."""
    index = CollectionIndex()
    for doc_id, text in docs:
        index.add_document(doc_id, text)
    return index


def load_documents(path):
    """Yield (doc_id, text) from a TSV file or a directory of files."""
    p = Path(path)
    if p.is_dir():
        for child in sorted(p.iterdir()):
            if child.is_file():
                yield child.name, child.read_text("utf-8")
    else:
        with open(p, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                try:
                    doc_id, text = line.split("\t", 1)
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: bad document line") from exc
                yield doc_id, text


def _floor_probability(index: CollectionIndex, doc_len: int, mu: float) -> float:
    epsilon = 1.0 / (10.0 * index.total_len)
    return (mu * epsilon) / (doc_len + mu)


def term_score(
    term: str, doc_id: str, index: CollectionIndex, mu: float = DEFAULT_MU
) -> float:
    """Dirichlet-smoothed log p(term | doc).

    A term unseen in the entire collection contributes a floored score
    log(mu * eps / (|doc| + mu)) with eps = 1 / (10 * collection length).
    """
    doc_len = index.doc_len[doc_id]
    cf = index.collection_tf.get(term, 0)
    if cf == 0:
        index.log_unseen(term)
        return math.log(_floor_probability(index, doc_len, mu))
    tf = index.doc_tf[doc_id].get(term, 0)
    p_collection = cf / index.total_len
    return math.log((tf + mu * p_collection) / (doc_len + mu))


def ordered_window_count(terms, window: int, doc_tokens) -> int:
    """Occurrences of the terms in order with <= window-1 tokens between.

    ``window=1`` is exact adjacency.  Counts every strictly increasing
    position tuple satisfying the gap constraint.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    terms = list(terms)
    if len(terms) < 2:
        raise ValueError("ordered window needs >= 2 terms")
    positions = [
        [i for i, tok in enumerate(doc_tokens) if tok == term] for term in terms
    ]
    if any(not p for p in positions):
        return 0
    # counts[i] at position p: number of ways to match terms[i:] starting at p
    counts = {p: 1 for p in positions[-1]}
    for level in range(len(terms) - 2, -1, -1):
        next_positions = positions[level + 1]
        new_counts = {}
        for p in positions[level]:
            total = 0
            for q in next_positions:
                if p < q <= p + window:
                    total += counts.get(q, 0)
            if total:
                new_counts[p] = total
        counts = new_counts
        if not counts:
            return 0
    return sum(counts.values())


def _element_log_score(
    element: QueryElement, doc_id: str, index: CollectionIndex, mu: float
) -> float:
    if element.window is None:
        term = _normalize_term(element.terms[0])
        return term_score(term, doc_id, index, mu)
    terms = tuple(_normalize_term(t) for t in element.terms)
    cf = index.window_collection_count(terms, element.window)
    doc_len = index.doc_len[doc_id]
    if cf == 0:
        index.log_unseen(f"#{element.window}({' '.join(terms)})")
        return math.log(_floor_probability(index, doc_len, mu))
    tf = ordered_window_count(terms, element.window, index.doc_tokens[doc_id])
    return math.log((tf + mu * (cf / index.total_len)) / (doc_len + mu))


def score_weighted(
    query: StructuredQuery, doc_id: str, index: CollectionIndex, mu: float = DEFAULT_MU
) -> float:
    """Weight-normalized sum of element log scores for one document."""
    total_weight = sum(e.weight for e in query.elements)
    if total_weight <= 0:
        raise ValueError(f"query {query.query_id}: all element weights are zero")
    score = 0.0
    for element in query.elements:
        if element.weight == 0.0:
            continue
        score += (element.weight / total_weight) * _element_log_score(
            element, doc_id, index, mu
        )
    return score


def retrieve(
    index: CollectionIndex,
    query: StructuredQuery,
    k: int = 1000,
    mu: float = DEFAULT_MU,
) -> RunResult:
    """Top-k documents by weighted score; ties break on ascending doc_id."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not index.doc_ids:
        return RunResult(query.query_id, ())
    scored = [
        (score_weighted(query, doc_id, index, mu), doc_id)
        for doc_id in index.doc_ids
    ]
    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    top = tuple((doc_id, score) for score, doc_id in scored[:k])
    return RunResult(query.query_id, top)


_QUERY_TOKEN = re.compile(r"#weight\(|#\d+\(|\)|[^\s()]+")


def emit_query_text(query: StructuredQuery) -> str:
    """Render a structured query in the ``#weight( ... )`` syntax."""
    if len(query.elements) == 1 and query.elements[0].window is None:
        return query.elements[0].terms[0]
    parts = []
    for element in query.elements:
        parts.append(f"{element.weight:.3f}")
        parts.append(_element_text(element))
    return "#weight( " + " ".join(parts) + " )"


def _element_text(element: QueryElement) -> str:
    if element.window is None:
        return element.terms[0]
    return f"#{element.window}({' '.join(element.terms)})"


def parse_query_text(text: str, query_id: str = "") -> StructuredQuery:
    """Parse ``#weight( w elem ... )`` text back into a StructuredQuery.

    Bare terms and bare ``#N(...)`` windows parse as one element of
    weight 1.  Inverse of emit_query_text.
    """
    tokens = _QUERY_TOKEN.findall(text)
    if not tokens:
        raise ValueError(f"empty query text: {text!r}")
    if tokens[0] != "#weight(":
        element, rest = _parse_element(tokens, 0, weight=1.0)
        if rest != len(tokens):
            raise ValueError(f"trailing tokens in query text: {text!r}")
        return StructuredQuery(query_id, (element,))
    i = 1
    elements = []
    while i < len(tokens) and tokens[i] != ")":
        try:
            weight = float(tokens[i])
        except ValueError as exc:
            raise ValueError(f"expected weight at token {i}: {text!r}") from exc
        element, i = _parse_element(tokens, i + 1, weight)
        elements.append(element)
    if i >= len(tokens) or tokens[i] != ")":
        raise ValueError(f"unterminated #weight in query text: {text!r}")
    return StructuredQuery(query_id, tuple(elements))


def _parse_element(tokens, i, weight):
    if i >= len(tokens):
        raise ValueError("missing query element")
    tok = tokens[i]
    window_match = re.fullmatch(r"#(\d+)\(", tok)
    if window_match:
        n = int(window_match.group(1))
        terms = []
        i += 1
        while i < len(tokens) and tokens[i] != ")":
            terms.append(tokens[i])
            i += 1
        if i >= len(tokens):
            raise ValueError("unterminated ordered window")
        return QueryElement(weight, tuple(terms), window=n), i + 1
    return QueryElement(weight, (tok,), window=None), i + 1
