"""Typed-dependency ingestion, role assignment, and base-pair derivation.

Each query term linked by a grammatical dependency receives one of four
role types: CoI (concept of interest, the search goal), Dc (descriptive,
specifies the goal), Rc (relational, links concepts) or Sc (structural,
stopword scaffolding).  Head/dependent pairs that still carry a CoI or
Dc after resolution become the base pairs used to mine expansion terms.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .ncp import SegmentedQuery
from .textlex import StopList, UnigramFrequencyTable


class RoleType(enum.Enum):
    COI = "CoI"
    DC = "Dc"
    RC = "Rc"
    SC = "Sc"
    EC = "Ec"
    UNTAGGED = "U"

    def __str__(self) -> str:
        return self.value


# significance order used when one term collects conflicting roles
_SIGNIFICANCE = {RoleType.COI: 3, RoleType.DC: 2, RoleType.RC: 1, RoleType.SC: 0}

_ROLE_BY_NAME = {r.value: r for r in RoleType}
_ROLE_BY_NAME.update({r.value.lower(): r for r in RoleType})


class DependencyParseError(ValueError):
    """Raised for malformed dependency parse input, with line context."""


class OneWordQueryError(ValueError):
    """Queries of a single token cannot form grammatical pairs."""


@dataclass(frozen=True)
class TypedDependency:
    """One ``relation(head-i, dependent-j)`` record; positions are 1-based."""

    relation: str
    head: tuple  # (term, position)
    dependent: tuple | None  # None for bare relation-word rows

    @property
    def base_relation(self) -> str:
        """Relation name with any preposition/conjunction suffix removed."""
        for prefix in ("prep", "prepc", "conj"):
            if self.relation == prefix or self.relation.startswith(prefix + "_"):
                return prefix if prefix != "prepc" else "prep"
        return self.relation

    @property
    def is_prep(self) -> bool:
        return self.base_relation == "prep"

    @property
    def is_conj(self) -> bool:
        return self.base_relation == "conj"


class RoleMappingTable:
    """relation -> (head role, dependent role); unknown relations untag both."""

    def __init__(self, rows: dict):
        self.rows = {
            rel: (head, dep) for rel, (head, dep) in rows.items()
        }

    def lookup(self, dep: TypedDependency) -> tuple:
        return self.rows.get(dep.base_relation, (RoleType.UNTAGGED, RoleType.UNTAGGED))

    def __len__(self) -> int:
        return len(self.rows)

    @classmethod
    def from_file(cls, path) -> "RoleMappingTable":
        rows = {}
        for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rel, head, dep = line.split("\t")
                rows[rel] = (_ROLE_BY_NAME[head], _ROLE_BY_NAME[dep])
            except (ValueError, KeyError) as exc:
                raise ValueError(f"{path}:{lineno}: bad mapping line {line!r}") from exc
        return cls(rows)

    @classmethod
    def default(cls) -> "RoleMappingTable":
        """Mapping table shipped with the package."""
        with resources.as_file(
            resources.files("roleqe.data").joinpath("role_mapping.tsv")
        ) as path:
            return cls.from_file(path)


@dataclass(frozen=True)
class BasePair:
    """Grammatically linked term pair driving expansion-term mining."""

    term1: tuple  # (token, RoleType)
    term2: tuple
    relation: str

    @property
    def tokens(self) -> tuple:
        return (self.term1[0], self.term2[0])


@dataclass
class AnnotatedQuery:
    """Query tokens with final roles, dependencies, and base pairs."""

    query_id: str
    tokens: tuple
    roles: dict  # position (1-based) -> RoleType
    dependencies: list
    base_pairs: list = field(default_factory=list)
    isolated_positions: tuple = ()  # tokens in no dependency (unprocessable)

    def role_of(self, position: int) -> RoleType | None:
        return self.roles.get(position)


def parse_dependencies(parse_text: str) -> list:
    """Parse ``relation(word-POS, word-POS)`` lines; ``-`` marks no dependent."""
    deps = []
    for lineno, line in enumerate(parse_text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        dep = _parse_dependency_line(line, lineno)
        deps.append(dep)
    return deps


def _parse_dependency_line(line: str, lineno: int) -> TypedDependency:
    open_paren = line.find("(")
    if open_paren <= 0 or not line.endswith(")"):
        raise DependencyParseError(f"line {lineno}: not a dependency record: {line!r}")
    relation = line[:open_paren].strip().lower()
    body = line[open_paren + 1 : -1]
    parts = [p.strip() for p in body.split(",")]
    if len(parts) != 2:
        raise DependencyParseError(f"line {lineno}: expected two arguments: {line!r}")
    head = _parse_argument(parts[0], line, lineno)
    if head is None:
        raise DependencyParseError(f"line {lineno}: head may not be '-': {line!r}")
    dependent = _parse_argument(parts[1], line, lineno)
    return TypedDependency(relation, head, dependent)


def _parse_argument(arg: str, line: str, lineno: int):
    if arg == "-":
        return None
    word, sep, pos = arg.rpartition("-")
    if not sep or not word or not pos.isdigit():
        raise DependencyParseError(
            f"line {lineno}: malformed argument {arg!r} in {line!r}"
        )
    return (word, int(pos))


def load_dependency_file(path) -> dict:
    """Read a multi-query parse file keyed by ``#qid <id>`` headers."""
    parses: dict[str, list] = {}
    current: str | None = None
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#qid"):
            current = stripped[4:].strip()
            if not current:
                raise DependencyParseError(f"{path}:{lineno}: missing query id")
            parses.setdefault(current, [])
        elif stripped.startswith("#"):
            continue
        else:
            if current is None:
                raise DependencyParseError(
                    f"{path}:{lineno}: dependency before any #qid header"
                )
            parses[current].append(_parse_dependency_line(stripped, lineno))
    return parses


def assign_roles(deps, table: RoleMappingTable) -> list:
    """Label each dependency row with (head role, dependent role).

    A bare relation-word row (no dependent) marks the relation's own
    function word, which is structural scaffolding: its head gets Sc.
    """
    assignments = []
    for dep in deps:
        if dep.dependent is None:
            assignments.append((dep, RoleType.SC, None))
        else:
            head_role, dep_role = table.lookup(dep)
            assignments.append((dep, head_role, dep_role))
    return assignments


def resolve_untagged(assignments, freqs: UnigramFrequencyTable) -> list:
    """Replace Untagged roles using inheritance, then corpus frequency.

    A term untagged in one row but tagged in another inherits that tagged
    role.  For rows still holding untagged terms, the more frequent term
    of the pair becomes CoI and the other Dc; equal frequencies make both
    CoI.  Terms already tagged are never reassigned by frequency.
    """
    tagged_sets: dict[int, set] = {}
    for dep, head_role, dep_role in assignments:
        if head_role is not RoleType.UNTAGGED and head_role is not None:
            tagged_sets.setdefault(dep.head[1], set()).add(head_role)
        if dep.dependent is not None and dep_role is not RoleType.UNTAGGED:
            tagged_sets.setdefault(dep.dependent[1], set()).add(dep_role)
    # a term tagged differently across rows inherits its most significant
    # tag, keeping the outcome independent of row order
    tagged = {
        pos: max(roles, key=_SIGNIFICANCE.__getitem__)
        for pos, roles in tagged_sets.items()
    }

    resolved = []
    for dep, head_role, dep_role in assignments:
        if dep.dependent is None:
            resolved.append((dep, head_role, dep_role))
            continue
        if head_role is RoleType.UNTAGGED and dep.head[1] in tagged:
            head_role = tagged[dep.head[1]]
        if dep_role is RoleType.UNTAGGED and dep.dependent[1] in tagged:
            dep_role = tagged[dep.dependent[1]]

        if head_role is RoleType.UNTAGGED or dep_role is RoleType.UNTAGGED:
            head_role, dep_role = _untagged_by_frequency(
                dep, head_role, dep_role, freqs
            )
        resolved.append((dep, head_role, dep_role))
    return resolved


def _untagged_by_frequency(dep, head_role, dep_role, freqs):
    f_head = freqs.frequency(dep.head[0])
    f_dep = freqs.frequency(dep.dependent[0])
    if head_role is RoleType.UNTAGGED and dep_role is RoleType.UNTAGGED:
        if f_head > f_dep:
            return RoleType.COI, RoleType.DC
        if f_head < f_dep:
            return RoleType.DC, RoleType.COI
        return RoleType.COI, RoleType.COI
    # one side already tagged: place the untagged side by the comparison
    if head_role is RoleType.UNTAGGED:
        if f_head > f_dep:
            return RoleType.COI, dep_role
        if f_head < f_dep:
            return RoleType.DC, dep_role
        return RoleType.COI, dep_role
    if f_dep > f_head:
        return head_role, RoleType.COI
    if f_dep < f_head:
        return head_role, RoleType.DC
    return head_role, RoleType.COI


def resolve_ambiguous(
    assignments, sq: SegmentedQuery, query_id: str = ""
) -> AnnotatedQuery:
    """Collapse per-row roles to one final role per token position.

    Preposition and conjunction relations only concatenate terms, so a
    role they assign yields to a role from any other relation; between
    the two, prep wins.  Remaining conflicts keep the most significant
    role (CoI > Dc > Rc > Sc).
    """
    by_position: dict[int, list] = {}
    deps = []
    for dep, head_role, dep_role in assignments:
        deps.append(dep)
        _check_token(sq, dep.head, query_id)
        by_position.setdefault(dep.head[1], []).append((head_role, dep))
        if dep.dependent is not None:
            _check_token(sq, dep.dependent, query_id)
            by_position.setdefault(dep.dependent[1], []).append((dep_role, dep))

    roles: dict[int, RoleType] = {}
    for pos, entries in by_position.items():
        if any(r is RoleType.UNTAGGED or r is None for r, _ in entries):
            raise ValueError(
                f"query {query_id}: position {pos} still untagged; "
                "run resolve_untagged first"
            )
        plain = [r for r, d in entries if not (d.is_prep or d.is_conj)]
        prep = [r for r, d in entries if d.is_prep]
        conj = [r for r, d in entries if d.is_conj]
        candidates = plain or prep or conj
        roles[pos] = max(candidates, key=_SIGNIFICANCE.__getitem__)

    isolated = tuple(
        pos for pos in range(1, len(sq.tokens) + 1) if pos not in roles
    )
    return AnnotatedQuery(
        query_id=query_id,
        tokens=sq.tokens,
        roles=roles,
        dependencies=deps,
        isolated_positions=isolated,
    )


def _check_token(sq: SegmentedQuery, arg: tuple, query_id: str):
    word, pos = arg
    if not 1 <= pos <= len(sq.tokens):
        raise DependencyParseError(
            f"query {query_id}: position {pos} outside query of {len(sq.tokens)} tokens"
        )
    if sq.tokens[pos - 1].lower() != word.lower():
        raise DependencyParseError(
            f"query {query_id}: parse word {word!r} does not match query "
            f"token {sq.tokens[pos - 1]!r} at position {pos}"
        )


def annotate_query(
    sq: SegmentedQuery,
    deps,
    table: RoleMappingTable,
    freqs: UnigramFrequencyTable,
    query_id: str = "",
    strict_coi_pairs: bool = False,
) -> AnnotatedQuery:
    """Full role pipeline: assign, resolve untagged, resolve ambiguous, pair."""
    if len(sq.tokens) < 2:
        raise OneWordQueryError(
            f"query {query_id or '?'}: need >= 2 tokens to pair, got {len(sq.tokens)}"
        )
    assignments = assign_roles(deps, table)
    assignments = resolve_untagged(assignments, freqs)
    aq = resolve_ambiguous(assignments, sq, query_id)
    aq.base_pairs = extract_base_pairs(aq, strict_coi=strict_coi_pairs)
    return aq


def extract_base_pairs(aq: AnnotatedQuery, strict_coi: bool = False) -> list:
    """Head/dependent pairs eligible for expansion mining.

    A pair qualifies when both terms are present and at least one final
    role is CoI or Dc (just CoI under ``strict_coi``); pairs of purely
    relational/structural terms carry no search-goal content and are
    dropped, as are bare relation-word rows.
    """
    wanted = {RoleType.COI} if strict_coi else {RoleType.COI, RoleType.DC}
    pairs = []
    for dep in aq.dependencies:
        if dep.dependent is None:
            continue
        r1 = aq.role_of(dep.head[1])
        r2 = aq.role_of(dep.dependent[1])
        if r1 is None or r2 is None:
            continue
        if r1 in wanted or r2 in wanted:
            pairs.append(
                BasePair(
                    term1=(aq.tokens[dep.head[1] - 1], r1),
                    term2=(aq.tokens[dep.dependent[1] - 1], r2),
                    relation=dep.relation,
                )
            )
    return pairs


def sequential_base_pairs(sq: SegmentedQuery, stoplist: StopList) -> list:
    """Adjacent non-stopword bigrams, emulating sequential term dependence."""
    content = [t for t in sq.tokens if t.lower() not in stoplist.entries]
    pairs = []
    for left, right in zip(content, content[1:]):
        pairs.append(
            BasePair(
                term1=(left, RoleType.COI),
                term2=(right, RoleType.COI),
                relation="seqdep",
            )
        )
    return pairs
