"""Command-line entry point for running retrieval experiments."""

from __future__ import annotations

import argparse
import logging
import sys

from . import ga
from .pipeline import MODES, RunConfig, run_experiment


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="roleqe",
        description=(
            "Run a query-expansion retrieval experiment and report MAP/P@N "
            "against relevance judgments."
        ),
    )
    parser.add_argument("--mode", choices=MODES, required=True)
    parser.add_argument("--queries", required=True, help="qid<TAB>title file")
    parser.add_argument("--documents", required=True, help="doc_id<TAB>text file or directory")
    parser.add_argument("--qrels", required=True, help="TREC qrels file")
    parser.add_argument("--output", required=True, help="output directory for reports")
    parser.add_argument("--parses", help="typed-dependency parse file (lsqe)")
    parser.add_argument("--ncp-bank", help="phrase/acronym bank file (lsqe)")
    parser.add_argument("--ncp-overrides", help="per-query phrase override file")
    parser.add_argument("--ngrams", help="n-gram corpus file (spqe/lsqe)")
    parser.add_argument("--unigrams", help="unigram frequency file (spqe/lsqe)")
    parser.add_argument("--stoplist", help="stoplist file (default: bundled)")
    parser.add_argument("--role-mapping", help="relation role-mapping file (default: bundled)")
    parser.add_argument("--mu", type=float, default=1500.0, help="Dirichlet smoothing parameter")
    parser.add_argument("--topn", type=int, default=5, help="expansion terms per query")
    parser.add_argument("--seed", type=int, default=13, help="random seed")
    parser.add_argument("--depth", type=int, default=1000, help="retrieval depth")
    parser.add_argument(
        "--max-matches",
        type=int,
        default=1000,
        help="matched n-grams kept per base pair",
    )
    parser.add_argument("--ga-population", type=int, default=80)
    parser.add_argument("--ga-generations", type=int, default=100)
    parser.add_argument("--ga-mutation", type=float, default=0.10)
    parser.add_argument("--ga-crossover", type=float, default=0.90)
    parser.add_argument("--ga-scope", choices=("set", "query"), default="set")
    parser.add_argument(
        "--strict-coi-pairs",
        action="store_true",
        help="require a CoI (not just CoI-or-Dc) in every base pair",
    )
    parser.add_argument("--dump-pools", action="store_true", help="write candidate pools")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    cfg = RunConfig(
        mode=args.mode,
        queries_path=args.queries,
        documents_path=args.documents,
        qrels_path=args.qrels,
        output_dir=args.output,
        seed=args.seed,
        parses_path=args.parses,
        ncp_bank_path=args.ncp_bank,
        overrides_path=args.ncp_overrides,
        ngram_corpus_path=args.ngrams,
        unigram_table_path=args.unigrams,
        stoplist_path=args.stoplist,
        role_mapping_path=args.role_mapping,
        mu=args.mu,
        top_n=args.topn,
        max_matched_ngrams_per_pair=args.max_matches,
        retrieval_depth=args.depth,
        strict_coi_pairs=args.strict_coi_pairs,
        dump_pools=args.dump_pools,
        ga_config=ga.GaConfig(
            random_seed=args.seed,
            population_size=args.ga_population,
            max_generations=args.ga_generations,
            mutation_rate=args.ga_mutation,
            crossover_rate=args.ga_crossover,
            scope=args.ga_scope,
        ),
    )
    report = run_experiment(cfg)
    sys.stdout.write(report.report_text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
