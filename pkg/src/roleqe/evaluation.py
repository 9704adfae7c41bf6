"""Retrieval effectiveness metrics and TREC-format interchange."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .retrieval import RunResult


@dataclass(frozen=True)
class Qrels:
    """(query_id, doc_id) -> relevance grade; grades >= 0."""

    judgments: dict

    def grade(self, query_id: str, doc_id: str) -> int:
        return self.judgments.get((query_id, doc_id), 0)

    def relevant_docs(self, query_id: str) -> set:
        return {
            doc
            for (qid, doc), grade in self.judgments.items()
            if qid == query_id and grade > 0
        }

    def has_relevant(self, query_id: str) -> bool:
        return any(
            qid == query_id and grade > 0
            for (qid, _), grade in self.judgments.items()
        )

    @classmethod
    def from_file(cls, path) -> "Qrels":
        """Read TREC qrels lines ``qid 0 docid rel``."""
        judgments = {}
        for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), 1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 4:
                raise ValueError(f"{path}:{lineno}: bad qrels line {line!r}")
            qid, _, doc_id, grade = parts
            judgments[(qid, doc_id)] = int(grade)
        return cls(judgments)


def average_precision(run: RunResult, qrels: Qrels, query_id: str) -> float:
    """Mean precision at each relevant rank, over all relevant docs.

    Undefined for queries with zero relevant documents, which must be
    excluded from evaluation before calling.
    """
    relevant = qrels.relevant_docs(query_id)
    if not relevant:
        raise ValueError(f"query {query_id} has no relevant documents")
    hits = 0
    precision_sum = 0.0
    for rank, (doc_id, _) in enumerate(run.ranking, 1):
        if doc_id in relevant:
            hits += 1
            precision_sum += hits / rank
    return precision_sum / len(relevant)


def p_at_n(run: RunResult, qrels: Qrels, n: int) -> float:
    """Fraction of the top n retrieved documents that are relevant."""
    if n < 1:
        raise ValueError("n must be >= 1")
    relevant = qrels.relevant_docs(run.query_id)
    top = run.ranking[:n]
    return sum(1 for doc_id, _ in top if doc_id in relevant) / n


def mean_average_precision(runs, qrels: Qrels) -> float:
    """Arithmetic mean of per-query AP over queries with relevant docs."""
    aps = [
        average_precision(run, qrels, run.query_id)
        for run in runs
        if qrels.has_relevant(run.query_id)
    ]
    if not aps:
        raise ValueError("no evaluable queries (none has relevant documents)")
    return sum(aps) / len(aps)


def write_run_file(runs, path, tag: str = "roleqe"):
    """Write rankings as TREC run lines ``qid Q0 docid rank score tag``."""
    with open(path, "w", encoding="utf-8") as handle:
        for run in runs:
            for rank, (doc_id, score) in enumerate(run.ranking, 1):
                handle.write(
                    f"{run.query_id} Q0 {doc_id} {rank} {score:.6f} {tag}\n"
                )


def read_run_file(path) -> list[RunResult]:
    """Read a TREC run file back into RunResults (per-query file order)."""
    per_query: dict[str, list] = {}
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 6:
            raise ValueError(f"{path}:{lineno}: bad run line {line!r}")
        qid, _, doc_id, _, score, _ = parts
        per_query.setdefault(qid, []).append((doc_id, float(score)))
    return [RunResult(qid, tuple(ranking)) for qid, ranking in per_query.items()]
