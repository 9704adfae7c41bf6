"""End-to-end expansion pipeline, experiment runner and reporting.

Three run modes share one retrieval/evaluation path:

* ``lm``   - plain query-likelihood over the raw query tokens.
* ``spqe`` - expansion from adjacent non-stopword pairs, one weight
             class for original terms and one for expansion terms.
* ``lsqe`` - expansion from grammatically linked base pairs with
             per-role weights optimized by the genetic algorithm.

Queries that cannot participate (one-word queries, queries without
relevance judgments, queries yielding no expansion candidates) are
excluded from every mode of a run so comparisons stay fair.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import ga
from .evaluation import Qrels, average_precision, p_at_n, write_run_file
from .ncp import NcpBank, detect_ncp, load_overrides
from .ngrams import NGramIndex, build_index, generate_wildcard_sequences, match_sequences
from .pool import build_pool, dump_pool, select_top_n
from .retrieval import (
    DEFAULT_MU,
    CollectionIndex,
    QueryElement,
    RunResult,
    StructuredQuery,
    _element_log_score,
    emit_query_text,
    index_collection,
    load_documents,
    parse_query_text,
    retrieve,
)
from .roles import (
    RoleMappingTable,
    RoleType,
    annotate_query,
    load_dependency_file,
    sequential_base_pairs,
)
from .textlex import StopList, UnigramFrequencyTable, tokenize

logger = logging.getLogger(__name__)

MODES = ("lm", "spqe", "lsqe")

# uniform weights used to emit baseline (lm) queries
_UNIT_WEIGHTS = ga.Chromosome(1.0, 1.0, 1.0, 0.0, 1.0)


@dataclass(frozen=True)
class ExpandedElement:
    """One emitted query element: a term or an NCP ordered window."""

    terms: tuple
    window: int | None
    role: RoleType

    def to_query_element(self, weight: float) -> QueryElement:
        return QueryElement(weight, self.terms, self.window)


@dataclass
class ExpandedQuery:
    query_id: str
    elements: tuple  # ExpandedElement, original order then expansion terms
    base_pairs: tuple = ()
    pool: object = None

    def roles(self) -> list[RoleType]:
        return [e.role for e in self.elements]


@dataclass
class RunConfig:
    mode: str
    queries_path: str
    documents_path: str
    qrels_path: str
    output_dir: str
    seed: int = 13
    parses_path: str | None = None
    ncp_bank_path: str | None = None
    overrides_path: str | None = None
    ngram_corpus_path: str | None = None
    unigram_table_path: str | None = None
    stoplist_path: str | None = None
    role_mapping_path: str | None = None
    mu: float = DEFAULT_MU
    top_n: int = 5
    max_matched_ngrams_per_pair: int = 1000
    retrieval_depth: int = 1000
    strict_coi_pairs: bool = False
    dump_pools: bool = False
    ga_config: ga.GaConfig | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}: {self.mode!r}")
        required = {"queries_path", "documents_path", "qrels_path"}
        if self.mode in ("spqe", "lsqe"):
            required |= {"ngram_corpus_path", "unigram_table_path"}
        if self.mode == "lsqe":
            required |= {"parses_path", "ncp_bank_path"}
        for name in sorted(required):
            value = getattr(self, name)
            if value is None:
                raise ValueError(f"mode {self.mode!r} requires {name}")
            if not Path(value).exists():
                raise FileNotFoundError(f"{name}: no such path {value!r}")
        if self.ga_config is None:
            self.ga_config = ga.GaConfig(random_seed=self.seed)


@dataclass
class PipelineResources:
    stoplist: StopList
    role_table: RoleMappingTable
    freqs: UnigramFrequencyTable
    bank: NcpBank
    overrides: dict
    parses: dict
    ngram_index: NGramIndex | None


def load_queries(path) -> list:
    """Read ``qid<TAB>title text`` lines."""
    queries = []
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            qid, text = line.split("\t", 1)
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad query line {line!r}") from exc
        queries.append((qid.strip(), text.strip()))
    return queries


def load_resources(cfg: RunConfig) -> PipelineResources:
    stoplist = (
        StopList.from_file(cfg.stoplist_path) if cfg.stoplist_path else StopList.default()
    )
    role_table = (
        RoleMappingTable.from_file(cfg.role_mapping_path)
        if cfg.role_mapping_path
        else RoleMappingTable.default()
    )
    freqs = (
        UnigramFrequencyTable.from_file(cfg.unigram_table_path)
        if cfg.unigram_table_path
        else UnigramFrequencyTable()
    )
    bank = NcpBank.from_file(cfg.ncp_bank_path) if cfg.ncp_bank_path else NcpBank.build()
    overrides = load_overrides(cfg.overrides_path) if cfg.overrides_path else {}
    parses = load_dependency_file(cfg.parses_path) if cfg.parses_path else {}
    ngram_index = (
        build_index(cfg.ngram_corpus_path) if cfg.ngram_corpus_path else None
    )
    return PipelineResources(
        stoplist, role_table, freqs, bank, overrides, parses, ngram_index
    )


def length_cohort(token_count: int) -> str:
    if token_count <= 2:
        return "short"
    if token_count <= 4:
        return "medium"
    return "long"


def expand_query(
    query_id: str, raw_text: str, cfg: RunConfig, res: PipelineResources
):
    """Build the mode's expanded query.

    Returns (status, ExpandedQuery or None) where status is ``ok``,
    ``one_word`` or ``unexpandable``.
    """
    if cfg.mode == "lm":
        tokens = [t.lower() for t in tokenize(raw_text)]
        if len(tokens) < 2:
            return "one_word", None
        elements = tuple(
            ExpandedElement((tok,), None, RoleType.COI) for tok in tokens
        )
        return "ok", ExpandedQuery(query_id, elements)

    bank = res.bank.with_phrases(res.overrides.get(query_id, []))
    sq = detect_ncp(raw_text, bank)
    if len(sq.tokens) < 2:
        return "one_word", None

    if cfg.mode == "lsqe":
        if query_id not in res.parses:
            raise KeyError(f"no dependency parse for query {query_id}")
        aq = annotate_query(
            sq,
            res.parses[query_id],
            res.role_table,
            res.freqs,
            query_id,
            strict_coi_pairs=cfg.strict_coi_pairs,
        )
        pairs = aq.base_pairs
        role_of = aq.role_of
    else:  # spqe: adjacency pairs, role-free weighting
        pairs = sequential_base_pairs(sq, res.stoplist)
        role_of = None

    if not pairs:
        return "unexpandable", None

    pair_matches = []
    for pair in pairs:
        seqs = generate_wildcard_sequences(pair)
        matches = match_sequences(
            res.ngram_index, seqs, limit=cfg.max_matched_ngrams_per_pair
        )
        pair_matches.append((pair, matches))
    original_terms = [t.lower() for t in sq.tokens]
    pool = build_pool(pair_matches, original_terms, res.stoplist, res.freqs, query_id)
    if not pool.candidates:
        return "unexpandable", None
    expansion = select_top_n(pool, cfg.top_n)

    elements = []
    for i, token in enumerate(sq.tokens, 1):
        if sq.ncp_flags[i - 1]:
            components = sq.ncp_components(i - 1)
            terms, window = components, len(components)
        else:
            terms, window = (token.lower(),), None
        if cfg.mode == "lsqe":
            role = role_of(i) or RoleType.DC  # parser left it isolated
        else:
            role = RoleType.COI
        elements.append(ExpandedElement(tuple(terms), window, role))
    for cand in expansion:
        elements.append(ExpandedElement((cand.surface,), None, RoleType.EC))
    return "ok", ExpandedQuery(
        query_id, tuple(elements), base_pairs=tuple(pairs), pool=pool
    )


def emit_weighted_query(eq: ExpandedQuery, weights: ga.Chromosome) -> str:
    """Render the expanded query as ``#weight( w elem ... )`` text."""
    elements = tuple(
        e.to_query_element(float(f"{weights.weight_for(e.role):.3f}"))
        for e in eq.elements
    )
    return emit_query_text(StructuredQuery(eq.query_id, elements))


class PrecomputedScorer:
    """Element log-score matrix for one query, reused across weightings.

    Ranks exactly like ``retrieve`` over the same elements; only the
    per-element weights change between calls, which is what the genetic
    algorithm varies.
    """

    def __init__(self, index: CollectionIndex, elements, mu: float):
        self.doc_ids = list(index.doc_ids)
        self.matrix = np.array(
            [
                [_element_log_score(el, doc_id, index, mu) for doc_id in self.doc_ids]
                for el in elements
            ],
            dtype=np.float64,
        )

    def rank(self, element_weights, k: int):
        w = np.asarray(element_weights, dtype=np.float64)
        total = w.sum()
        if total <= 0:
            raise ValueError("all element weights are zero")
        scores = (w / total) @ self.matrix
        order = sorted(zip(scores.tolist(), self.doc_ids), key=lambda t: (-t[0], t[1]))
        return tuple((doc_id, score) for score, doc_id in order[:k])


def _rounded_weights(eq: ExpandedQuery, weights: ga.Chromosome) -> list:
    return [float(f"{weights.weight_for(e.role):.3f}") for e in eq.elements]


@dataclass
class QueryOutcome:
    query_id: str
    text: str
    cohort: str
    status: str
    expanded: ExpandedQuery | None = None
    query_text: str = ""
    ap: float | None = None
    ap_lm: float | None = None


@dataclass
class ExperimentReport:
    mode: str
    outcomes: list
    evaluable: list = field(default_factory=list)
    map_mode: float | None = None
    map_lm: float | None = None
    p_at: dict = field(default_factory=dict)
    p_at_lm: dict = field(default_factory=dict)
    excluded: dict = field(default_factory=dict)
    best_weights: dict = field(default_factory=dict)
    ga_history: dict = field(default_factory=dict)
    report_text: str = ""


def run_experiment(cfg: RunConfig) -> ExperimentReport:
    """Execute the configured mode end to end and write report files."""
    res = load_resources(cfg)
    qrels = Qrels.from_file(cfg.qrels_path)
    queries = load_queries(cfg.queries_path)
    index = index_collection(load_documents(cfg.documents_path))
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    outcomes: list[QueryOutcome] = []
    for qid, text in queries:
        status, eq = expand_query(qid, text, cfg, res)
        cohort = length_cohort(_cohort_tokens(text, cfg, res, qid))
        if status == "ok" and not qrels.has_relevant(qid):
            status, eq = "zero_qrels", None
        outcomes.append(QueryOutcome(qid, text, cohort, status, eq))

    evaluable = [o for o in outcomes if o.status == "ok"]
    excluded: dict[str, list] = {"one_word": [], "zero_qrels": [], "unexpandable": []}
    for o in outcomes:
        if o.status in excluded:
            excluded[o.status].append(o.query_id)
    if not evaluable:
        raise ValueError("no evaluable queries remain after exclusions")
    logger.info(
        "mode %s: %d/%d queries evaluable (%d excluded)",
        cfg.mode,
        len(evaluable),
        len(outcomes),
        len(outcomes) - len(evaluable),
    )

    # baseline (lm) variant of every evaluable query, over raw tokens
    lm_queries = {
        o.query_id: ExpandedQuery(
            o.query_id,
            tuple(
                ExpandedElement((t.lower(),), None, RoleType.COI)
                for t in tokenize(o.text)
            ),
        )
        for o in evaluable
    }

    best_weights: dict[str, ga.Chromosome] = {}
    ga_history: dict[str, list] = {}
    if cfg.mode == "lm":
        for o in evaluable:
            best_weights[o.query_id] = _UNIT_WEIGHTS
    else:
        scorers = {
            o.query_id: PrecomputedScorer(
                index, [e.to_query_element(1.0) for e in o.expanded.elements], cfg.mu
            )
            for o in evaluable
        }

        def fitness_for(subset):
            def oracle(chrom: ga.Chromosome) -> float:
                aps = []
                for o in subset:
                    weights = _rounded_weights(o.expanded, chrom)
                    ranking = scorers[o.query_id].rank(weights, cfg.retrieval_depth)
                    run = RunResult(o.query_id, ranking)
                    aps.append(average_precision(run, qrels, o.query_id))
                return sum(aps) / len(aps)

            return oracle

        if cfg.ga_config.scope == "set":
            best, history = ga.optimize(cfg.ga_config, fitness_for(evaluable))
            logger.info("ga best map %.6f with %s", history[-1].best_map, best)
            for o in evaluable:
                best_weights[o.query_id] = best
            ga_history["all"] = history
        else:
            for o in evaluable:
                best, history = ga.optimize(cfg.ga_config, fitness_for([o]))
                best_weights[o.query_id] = best
                ga_history[o.query_id] = history

    # final retrieval through the emitted query text (round-trip parse)
    runs_mode = []
    runs_lm = []
    for o in evaluable:
        o.query_text = emit_weighted_query(o.expanded, best_weights[o.query_id])
        structured = parse_query_text(o.query_text, o.query_id)
        run = retrieve(index, structured, k=cfg.retrieval_depth, mu=cfg.mu)
        runs_mode.append(run)
        o.ap = average_precision(run, qrels, o.query_id)
        lm_text = emit_weighted_query(lm_queries[o.query_id], _UNIT_WEIGHTS)
        lm_structured = parse_query_text(lm_text, o.query_id)
        lm_run = retrieve(index, lm_structured, k=cfg.retrieval_depth, mu=cfg.mu)
        runs_lm.append(lm_run)
        o.ap_lm = average_precision(lm_run, qrels, o.query_id)

    report = ExperimentReport(mode=cfg.mode, outcomes=outcomes, evaluable=evaluable)
    report.excluded = excluded
    report.best_weights = best_weights
    report.ga_history = ga_history
    report.map_mode = sum(o.ap for o in evaluable) / len(evaluable)
    report.map_lm = sum(o.ap_lm for o in evaluable) / len(evaluable)
    for n in (10, 20, 100):
        report.p_at[n] = sum(p_at_n(r, qrels, n) for r in runs_mode) / len(runs_mode)
        report.p_at_lm[n] = sum(p_at_n(r, qrels, n) for r in runs_lm) / len(runs_lm)
    report.report_text = _render_report(cfg, report)

    write_run_file(runs_mode, out_dir / f"run_{cfg.mode}.txt", tag=cfg.mode)
    if cfg.mode != "lm":
        write_run_file(runs_lm, out_dir / "run_lm.txt", tag="lm")
    (out_dir / "report.txt").write_text(report.report_text, encoding="utf-8")
    (out_dir / "metrics.tsv").write_text(_render_metrics(report), encoding="utf-8")
    if ga_history:
        lines = []
        for key, history in sorted(ga_history.items()):
            block = ga.history_report(history)
            lines.append(f"#query {key}\n{block}")
        (out_dir / "ga_history.tsv").write_text("".join(lines), encoding="utf-8")
    if cfg.dump_pools and cfg.mode != "lm":
        dump = "".join(
            dump_pool(o.expanded.pool) for o in evaluable if o.expanded.pool
        )
        (out_dir / "pools.tsv").write_text(dump, encoding="utf-8")
    (out_dir / f"queries_{cfg.mode}.txt").write_text(
        "".join(f"{o.query_id}\t{o.query_text}\n" for o in evaluable),
        encoding="utf-8",
    )
    return report


def _cohort_tokens(text: str, cfg: RunConfig, res: PipelineResources, qid: str) -> int:
    if cfg.mode == "lm":
        return len(tokenize(text))
    bank = res.bank.with_phrases(res.overrides.get(qid, []))
    try:
        return len(detect_ncp(text, bank).tokens)
    except ValueError:
        return 0


def _render_report(cfg: RunConfig, report: ExperimentReport) -> str:
    lines = [f"mode: {report.mode}"]
    total = len(report.outcomes)
    lines.append(
        f"queries: total={total} evaluable={len(report.evaluable)} "
        f"one_word={len(report.excluded['one_word'])} "
        f"zero_qrels={len(report.excluded['zero_qrels'])} "
        f"unexpandable={len(report.excluded['unexpandable'])}"
    )
    lines.append(f"map {report.mode}={report.map_mode:.6f} lm={report.map_lm:.6f}")
    if report.map_lm > 0:
        delta = 100.0 * (report.map_mode - report.map_lm) / report.map_lm
        lines.append(f"map delta over lm: {delta:+.2f}%")
    for n in (10, 20, 100):
        lines.append(
            f"p@{n} {report.mode}={report.p_at[n]:.6f} lm={report.p_at_lm[n]:.6f}"
        )
    lines.append("")
    lines.append("qid\tcohort\tap_" + report.mode + "\tap_lm")
    for o in report.evaluable:
        lines.append(f"{o.query_id}\t{o.cohort}\t{o.ap:.6f}\t{o.ap_lm:.6f}")
    if report.excluded["one_word"]:
        lines.append("")
        lines.append("one-word (unsupported): " + " ".join(report.excluded["one_word"]))
    if report.excluded["zero_qrels"]:
        lines.append("zero qrels: " + " ".join(report.excluded["zero_qrels"]))
    if report.excluded["unexpandable"]:
        lines.append("unexpandable: " + " ".join(report.excluded["unexpandable"]))
    return "\n".join(lines) + "\n"


def _render_metrics(report: ExperimentReport) -> str:
    rows = []
    for o in report.evaluable:
        rows.append(f"{o.query_id}\tap\t{o.ap:.6f}")
        rows.append(f"{o.query_id}\tap_lm\t{o.ap_lm:.6f}")
        rows.append(f"{o.query_id}\tcohort\t{o.cohort}")
    rows.append(f"all\tmap\t{report.map_mode:.6f}")
    rows.append(f"all\tmap_lm\t{report.map_lm:.6f}")
    for n in (10, 20, 100):
        rows.append(f"all\tp@{n}\t{report.p_at[n]:.6f}")
    return "\n".join(rows) + "\n"
