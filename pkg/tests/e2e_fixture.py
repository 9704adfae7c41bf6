"""Synthetic end-to-end corpus: 200 documents, 20 queries, planted signal.

Every evaluable query follows the shape ``<verb> with <adjective>
<noun>``; its dependency parse links verb->noun (non-adjacent) and
noun->adjective (adjacent).  The n-gram corpus carries co-occurrence
records that yield three expansion terms per query, two reachable from
the adjacent pair and one only from the non-adjacent pair.  Expansion
terms are planted exclusively in that query's relevant documents, while
distractor documents match more of the original query terms, so plain
query likelihood ranks distractors first and any expansion-aware mode
can overtake it.
"""

from dataclasses import dataclass
from pathlib import Path
import random

LETTERS = "abcdefghijklmnopqrstuvwxyz"
N_QUERIES = 20
RELEVANT_PER_QUERY = 3
DISTRACTORS_PER_QUERY = 4
TOTAL_DOCS = 200


@dataclass
class E2EInputs:
    root: Path
    queries: Path
    documents: Path
    qrels: Path
    parses: Path
    ngrams: Path
    unigrams: Path
    bank: Path
    one_word_qid: str
    zero_qrels_qid: str
    unexpandable_qid: str
    phrase_qid: str


def _suffix(i: int) -> str:
    return LETTERS[i // 5] + LETTERS[i % 5] + "o"


def _words(i: int):
    s = _suffix(i)
    return (
        f"act{s}",  # verb slot
        f"broad{s}",  # adjective slot
        f"item{s}",  # noun slot
        (f"alpha{s}", f"beta{s}", f"gamma{s}"),  # planted expansion terms
    )


def build_e2e_inputs(root: Path) -> E2EInputs:
    root = Path(root)
    rng = random.Random(20240601)
    filler = [f"fill{LETTERS[i // 5]}{LETTERS[i % 5]}q" for i in range(30)]

    query_rows = []
    parse_blocks = []
    ngram_rows = []
    unigram_rows = []
    qrels_rows = []
    doc_rows = []
    doc_counter = 0

    def new_doc(tokens) -> str:
        nonlocal doc_counter
        doc_id = f"d{doc_counter:03d}"
        doc_counter += 1
        doc_rows.append(f"{doc_id}\t{' '.join(tokens)}")
        return doc_id

    evaluable_ids = []
    one_word_qid = "q18"
    zero_qrels_qid = "q16"
    unexpandable_qid = "q17"
    phrase_qid = "q15"  # noun slot is a two-word phrase unit

    for i in range(N_QUERIES):
        qid = f"q{i:02d}"
        if qid == one_word_qid:
            query_rows.append(f"{qid}\tprisons")
            continue
        verb, adj, noun, (e1, e2, e3) = _words(i)
        if qid == phrase_qid:
            query_rows.append(f"{qid}\t{verb} with {adj} United States")
            noun = "United_States"
        else:
            query_rows.append(f"{qid}\t{verb} with {adj} {noun}")
        parse_blocks.append(
            f"#qid {qid}\n"
            f"amod({noun}-4, {adj}-3)\n"
            f"prep_with({verb}-1, {noun}-4)\n"
            f"prep_with(with-2, -)\n"
        )
        if qid == unexpandable_qid:
            # no n-gram rows: base pairs exist but nothing matches
            continue
        noun_gram = noun.lower()
        noun_body = ["united", "states"] if qid == phrase_qid else [noun]
        ngram_rows.append(f"{adj} {noun_gram} {e1} {e2}\t50")
        ngram_rows.append(f"{verb} and {noun_gram} {e3}\t40")
        unigram_rows += [f"{e1}\t300", f"{e2}\t200", f"{e3}\t100"]

        for _ in range(RELEVANT_PER_QUERY):
            body = noun_body * 2 + [e1, e2, e3] + rng.sample(filler, 10)
            rng.shuffle(body)
            doc_id = new_doc(body)
            if qid != zero_qrels_qid:
                qrels_rows.append(f"{qid} 0 {doc_id} 1")
        for _ in range(DISTRACTORS_PER_QUERY):
            body = ([verb, adj] + noun_body) * 2 + rng.sample(filler, 10)
            rng.shuffle(body)
            new_doc(body)
        if qid not in (zero_qrels_qid, unexpandable_qid):
            evaluable_ids.append(qid)

    while doc_counter < TOTAL_DOCS:
        body = rng.sample(filler, 12) + ["with"] * rng.randint(1, 3)
        rng.shuffle(body)
        new_doc(body)

    paths = E2EInputs(
        root=root,
        queries=root / "queries.tsv",
        documents=root / "documents.tsv",
        qrels=root / "qrels.txt",
        parses=root / "parses.txt",
        ngrams=root / "ngrams.tsv",
        unigrams=root / "unigrams.tsv",
        bank=root / "ncp_bank.txt",
        one_word_qid=one_word_qid,
        zero_qrels_qid=zero_qrels_qid,
        unexpandable_qid=unexpandable_qid,
        phrase_qid=phrase_qid,
    )
    paths.queries.write_text("\n".join(query_rows) + "\n", encoding="utf-8")
    paths.documents.write_text("\n".join(doc_rows) + "\n", encoding="utf-8")
    paths.qrels.write_text("\n".join(qrels_rows) + "\n", encoding="utf-8")
    paths.parses.write_text("".join(parse_blocks), encoding="utf-8")
    paths.ngrams.write_text("\n".join(ngram_rows) + "\n", encoding="utf-8")
    paths.unigrams.write_text("\n".join(unigram_rows) + "\n", encoding="utf-8")
    paths.bank.write_text("united states\nsample phrase\n", encoding="utf-8")
    return paths
