"""Negation trigger lexicon and longest-leftmost trigger matching."""

from __future__ import annotations

import re
import warnings
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .errors import ResourceError
from .resources import LEXICON, data_path

LOCATIONS = ("PREN", "POSN", "PREP", "POSP", "PSEU")
PHRASE_TYPES = ("NP", "VP-A", "VP-P", "PP", "ADJP-A", "ADJP-P", "ADVP-A", "ADVP-P", "NONE")
PRE = frozenset({"PREN", "PREP"})
POST = frozenset({"POSN", "POSP"})
POSSIBLE = frozenset({"PREP", "POSP"})


@dataclass(frozen=True)
class TriggerTerm:
    tokens: tuple[str, ...]
    location: str
    phrase_type: str
    first_pos: str

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("a trigger term needs at least one token")
        if any(t != t.lower() for t in self.tokens):
            raise ValueError(f"trigger tokens must be lowercase: {self.tokens!r}")
        if self.location not in LOCATIONS:
            raise ValueError(f"unknown location {self.location!r}")
        if self.phrase_type not in PHRASE_TYPES:
            raise ValueError(f"unknown phrase type {self.phrase_type!r}")
        if (self.location == "PSEU") != (self.phrase_type == "NONE"):
            raise ValueError("pseudonegations, and only they, take phrase type NONE")

    @property
    def text(self) -> str:
        return " ".join(self.tokens)

    @property
    def is_pseudo(self) -> bool:
        return self.location == "PSEU"

    @property
    def possible(self) -> bool:
        return self.location in POSSIBLE


@dataclass(frozen=True)
class TriggerMatch:
    term: TriggerTerm
    token_start: int
    token_end: int

    def __len__(self):
        return self.token_end - self.token_start + 1


class Lexicon:
    def __init__(self, terms=()):
        self.terms: list[TriggerTerm] = []
        self._by_first: dict[str, list[TriggerTerm]] = {}
        for term in terms:
            self.add(term)

    def add(self, term: TriggerTerm):
        if term.tokens in {t.tokens for t in self._by_first.get(term.tokens[0], ())}:
            raise ValueError(f"duplicate trigger term {term.text!r}")
        self.terms.append(term)
        bucket = self._by_first.setdefault(term.tokens[0], [])
        bucket.append(term)
        bucket.sort(key=lambda t: -len(t.tokens))

    def candidates(self, first_token: str) -> list[TriggerTerm]:
        """Terms starting with ``first_token``, longest first."""
        return self._by_first.get(first_token.lower(), [])

    def single_words(self) -> frozenset:
        return frozenset(t.tokens[0] for t in self.terms if len(t.tokens) == 1)

    def counts(self) -> Counter:
        return Counter(t.location for t in self.terms)

    def phrase_counts(self) -> Counter:
        return Counter(t.phrase_type for t in self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __contains__(self, text):
        toks = tuple(text.lower().split())
        return any(t.tokens == toks for t in self.candidates(toks[0])) if toks else False


_COUNTS = re.compile(r"#\s*counts:\s*(.*)")


def read_lexicon(text: str, path=None) -> Lexicon:
    lex = Lexicon()
    declared = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _COUNTS.match(line)
            if m:
                declared = dict(kv.split("=", 1) for kv in m.group(1).split())
            continue
        cols = raw.rstrip("\n").split("\t")
        if len(cols) != 4:
            raise ResourceError(f"expected 4 tab-separated columns, got {len(cols)}", path, lineno)
        term, location, ptype, pos = (c.strip() for c in cols)
        try:
            lex.add(TriggerTerm(tuple(term.lower().split()), location, ptype, pos))
        except ValueError as exc:
            raise ResourceError(str(exc), path, lineno) from exc
    if declared is not None:
        actual = lex.counts()
        diff = {k: (int(v), actual.get(k, 0)) for k, v in declared.items() if int(v) != actual.get(k, 0)}
        if diff:
            warnings.warn(f"lexicon category counts differ from header: {diff}", stacklevel=2)
    return lex


def load_lexicon(path=None) -> Lexicon:
    path = data_path(LEXICON) if path is None else Path(path)
    return read_lexicon(path.read_text(encoding="utf-8"), path)


def find_triggers(tokens, lexicon: Lexicon) -> list[TriggerMatch]:
    """Scan left to right; at each position take the longest term, then skip past it."""
    low = [t.lower() for t in tokens]
    out = []
    i = 0
    while i < len(low):
        for term in lexicon.candidates(low[i]):
            n = len(term.tokens)
            if tuple(low[i:i + n]) == term.tokens:
                out.append(TriggerMatch(term, i, i + n - 1))
                i += n
                break
        else:
            i += 1
    return out
