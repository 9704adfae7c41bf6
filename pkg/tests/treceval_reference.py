"""Tiny trec_eval-compatible MAP oracle for cross-checking evaluation code.

Reads standard qrels and run file text.  Follows trec_eval conventions:
documents re-sort by score descending with ties broken by document id
descending, and AP divides by the number of judged-relevant documents.
Kept free of any roleqe imports so the check stays independent.
"""


def parse_qrels(text):
    rel = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        qid, _, doc, grade = line.split()
        if int(grade) > 0:
            rel.setdefault(qid, set()).add(doc)
    return rel


def parse_run(text):
    runs = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        qid, _, doc, _, score, _ = line.split()
        runs.setdefault(qid, []).append((doc, float(score)))
    return runs


def average_precision(ranking, relevant):
    # trec_eval orders by descending score, then descending doc id
    ordered = sorted(ranking, key=lambda pair: (pair[1], pair[0]), reverse=True)
    hits = 0
    total = 0.0
    for rank, (doc, _) in enumerate(ordered, 1):
        if doc in relevant:
            hits += 1
            total += hits / rank
    return total / len(relevant)


def mean_average_precision(run_text, qrels_text):
    rel = parse_qrels(qrels_text)
    runs = parse_run(run_text)
    aps = [
        average_precision(ranking, rel[qid])
        for qid, ranking in runs.items()
        if qid in rel and rel[qid]
    ]
    return sum(aps) / len(aps)
