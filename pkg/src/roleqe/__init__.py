"""Grammar-aware query expansion with role-based term weighting.

Queries are segmented into phrase units, annotated with linguistic role
types from typed-dependency parses, expanded with terms mined from an
n-gram corpus around grammatically linked term pairs, weighted per role
by a genetic algorithm, and evaluated with a built-in Dirichlet-smoothed
query-likelihood retrieval engine.
"""

from .ga import Chromosome, GaConfig, optimize
from .ncp import NcpBank, SegmentedQuery, detect_ncp, normalize_for_parser
from .ngrams import NGramIndex, build_index, generate_wildcard_sequences, match_sequences
from .pipeline import ExpandedQuery, RunConfig, emit_weighted_query, expand_query, run_experiment
from .pool import CandidatePool, CandidateTerm, build_pool, select_top_n
from .retrieval import (
    CollectionIndex,
    QueryElement,
    RunResult,
    StructuredQuery,
    index_collection,
    parse_query_text,
    retrieve,
)
from .roles import (
    AnnotatedQuery,
    BasePair,
    RoleMappingTable,
    RoleType,
    TypedDependency,
    annotate_query,
    extract_base_pairs,
    parse_dependencies,
    sequential_base_pairs,
)
from .textlex import StopList, UnigramFrequencyTable, is_clean_term, is_stopword, porter_stem, tokenize

__version__ = "0.1.0"
