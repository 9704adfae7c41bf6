"""Non-compositional phrase detection and query normalization.

Multiword units that carry one meaning (proper names, idioms,
collocations, phrasal verbs) are fused into single underscore-joined
tokens with capitalized components; everything else is case-folded to
lowercase so a downstream parser cannot mistake stray capitals for
names.  Acronyms are resolved to their full form before phrase
matching.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .textlex import tokenize

_QUOTED_SPAN = re.compile(r'"([^"]+)"')


def _capitalize_component(comp: str) -> str:
    return comp[:1].upper() + comp[1:].lower()


def fuse(components) -> str:
    """Join phrase components into the canonical NCP token form."""
    return "_".join(_capitalize_component(c) for c in components)


@dataclass(frozen=True)
class NcpBank:
    """Known multiword phrases plus acronym expansions.

    phrases: set of lowercase component tuples, each of length >= 2.
    acronyms: uppercase acronym -> lowercase full-form component tuple.
    """

    phrases: frozenset
    acronyms: dict

    def __post_init__(self):
        for phrase in self.phrases:
            if len(phrase) < 2 or not all(phrase):
                raise ValueError(f"bank phrase needs >=2 non-empty components: {phrase!r}")
        for acro in self.acronyms:
            if not (acro.isalpha() and acro.isupper()):
                raise ValueError(f"acronym key must be uppercase-alphabetic: {acro!r}")

    @classmethod
    def build(cls, phrases=(), acronyms=None) -> "NcpBank":
        norm = frozenset(
            tuple(w.lower() for w in (p.split() if isinstance(p, str) else p))
            for p in phrases
        )
        acro = {
            k: tuple(w.lower() for w in (v.split() if isinstance(v, str) else v))
            for k, v in (acronyms or {}).items()
        }
        return cls(norm, acro)

    @classmethod
    def from_file(cls, path) -> "NcpBank":
        """Load a bank file: one phrase per line, or ``ACRO = full form``."""
        phrases = []
        acronyms = {}
        for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" in line:
                key, _, full = line.partition("=")
                key, full = key.strip(), full.strip()
                if not key or not full:
                    raise ValueError(f"{path}:{lineno}: bad acronym line {line!r}")
                acronyms[key] = full
            else:
                if len(line.split()) < 2:
                    raise ValueError(f"{path}:{lineno}: phrase needs >=2 words: {line!r}")
                phrases.append(line)
        return cls.build(phrases, acronyms)

    def with_phrases(self, extra) -> "NcpBank":
        """Bank extended with additional phrases (per-query overrides)."""
        merged = set(self.phrases)
        for p in extra:
            merged.add(tuple(w.lower() for w in (p.split() if isinstance(p, str) else p)))
        return NcpBank(frozenset(merged), dict(self.acronyms))


@dataclass(frozen=True)
class SegmentedQuery:
    """Tokens after phrase fusion; ncp_flags marks fused units."""

    tokens: tuple
    ncp_flags: tuple

    def __post_init__(self):
        if len(self.tokens) != len(self.ncp_flags):
            raise ValueError("tokens and ncp_flags length mismatch")

    def ncp_components(self, i: int) -> tuple:
        """Lowercase components of token i (singleton for plain tokens)."""
        return tuple(c.lower() for c in self.tokens[i].split("_"))


def detect_ncp(query: str, bank: NcpBank) -> SegmentedQuery:
    """Segment a raw query, fusing any bank phrase into one NCP token.

    Longest match wins, scanning left to right; acronyms are expanded to
    their full form first; double-quoted spans are fused verbatim.
    Non-NCP tokens come out lowercase.
    """
    if not query or not query.strip():
        raise ValueError("empty query cannot be segmented")

    # quoted spans become phrase units before tokenization
    def _fuse_quoted(match):
        words = match.group(1).split()
        return fuse(words) if len(words) >= 2 else match.group(1)

    query = _QUOTED_SPAN.sub(_fuse_quoted, query)

    raw_tokens = tokenize(query)
    expanded: list[str] = []
    pre_flagged: list[bool] = []
    for tok in raw_tokens:
        if tok in bank.acronyms:
            expanded.append(fuse(bank.acronyms[tok]))
            pre_flagged.append(True)
        elif "_" in tok:
            expanded.append(fuse(tok.split("_")))
            pre_flagged.append(True)
        else:
            expanded.append(tok)
            pre_flagged.append(False)

    max_len = max((len(p) for p in bank.phrases), default=0)
    out_tokens: list[str] = []
    out_flags: list[bool] = []
    i = 0
    n = len(expanded)
    while i < n:
        if pre_flagged[i]:
            out_tokens.append(expanded[i])
            out_flags.append(True)
            i += 1
            continue
        matched = 0
        for width in range(min(max_len, n - i), 1, -1):
            if any(pre_flagged[i : i + width]):
                continue
            window = tuple(t.lower() for t in expanded[i : i + width])
            if window in bank.phrases:
                out_tokens.append(fuse(window))
                out_flags.append(True)
                matched = width
                break
        if matched:
            i += matched
        else:
            out_tokens.append(expanded[i].lower())
            out_flags.append(False)
            i += 1
    return SegmentedQuery(tuple(out_tokens), tuple(out_flags))


def normalize_for_parser(sq: SegmentedQuery) -> str:
    """Render a segmented query as a single parser-ready line.

    Front slashes turn into the word ``or``; fused units keep their
    underscores so the parser sees them as one token.
    """
    parts = []
    for tok in sq.tokens:
        if "/" in tok and "_" not in tok:
            parts.append(" or ".join(p for p in tok.split("/") if p))
        else:
            parts.append(tok)
    return " ".join(parts)


def load_overrides(path) -> dict:
    """Read per-query NCP override lines ``query_id<TAB>phrase``."""
    overrides: dict[str, list[str]] = {}
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), 1):
        line = line.rstrip()
        if not line or line.startswith("#"):
            continue
        try:
            qid, phrase = line.split("\t")
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad override line {line!r}") from exc
        overrides.setdefault(qid, []).append(phrase)
    return overrides
