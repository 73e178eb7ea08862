"""Dictionary concept lookup, semantic-type filtering and polarity."""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from .errors import ResourceError
from .resources import DICTIONARY, GROUPS, data_path
from .tree import token_offsets

POSITIVE = "positive"
NEGATED = "negated"
_TUI = re.compile(r"T\d{3}")


@dataclass(frozen=True)
class ConceptEntry:
    surface: tuple[str, ...]
    cui: str
    preferred: str
    tui: str

    def __post_init__(self):
        if not self.surface:
            raise ValueError("empty surface form")
        if not self.cui:
            raise ValueError("empty cui")
        if not _TUI.fullmatch(self.tui):
            raise ValueError(f"malformed tui {self.tui!r}")


@dataclass(frozen=True)
class ConceptMention:
    token_start: int
    token_end: int
    char_span: tuple[int, int]
    cui: str
    preferred: str
    tui: str
    text: str = ""
    polarity: str = POSITIVE
    possible: bool = False
    alternatives: tuple[str, ...] = ()

    @property
    def negated(self) -> bool:
        return self.polarity == NEGATED

    def label(self) -> str:
        return f"{self.preferred}({'-' if self.negated else '+'})"


class ConceptDictionary:
    """Surface-form index over :class:`ConceptEntry` rows, in file order."""

    def __init__(self, entries=()):
        self.entries: list[ConceptEntry] = []
        self._index: dict[tuple[str, ...], list[ConceptEntry]] = {}
        self._lengths: dict[str, set[int]] = {}
        for e in entries:
            self.add(e)

    def add(self, entry: ConceptEntry):
        self.entries.append(entry)
        self._index.setdefault(entry.surface, []).append(entry)
        self._lengths.setdefault(entry.surface[0], set()).add(len(entry.surface))

    def lookup(self, surface) -> list[ConceptEntry]:
        return self._index.get(tuple(surface), [])

    def lengths(self, first: str) -> set[int]:
        return self._lengths.get(first, set())

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def read_dictionary(text: str, path=None) -> ConceptDictionary:
    d = ConceptDictionary()
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        cols = raw.split("\t")
        if len(cols) != 4:
            raise ResourceError(f"expected 4 tab-separated columns, got {len(cols)}", path, lineno)
        surface, cui, preferred, tui = (c.strip() for c in cols)
        try:
            d.add(ConceptEntry(tuple(surface.lower().split()), cui, preferred, tui))
        except ValueError as exc:
            raise ResourceError(str(exc), path, lineno) from exc
    return d


def load_dictionary(path=None) -> ConceptDictionary:
    path = data_path(DICTIONARY) if path is None else Path(path)
    return read_dictionary(path.read_text(encoding="utf-8"), path)


@dataclass(frozen=True)
class SemanticGroups:
    groups: dict

    def tuis(self) -> frozenset:
        return frozenset(t for members in self.groups.values() for t in members)

    def group_of(self, tui: str) -> Optional[str]:
        for name, members in self.groups.items():
            if tui in members:
                return name
        return None


def read_groups(text: str, path=None) -> SemanticGroups:
    groups = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        name, sep, members = raw.partition("\t")
        tuis = frozenset(t.strip() for t in members.split(",") if t.strip())
        if not sep or not tuis:
            raise ResourceError("expected 'group<TAB>T###,T###'", path, lineno)
        bad = [t for t in tuis if not _TUI.fullmatch(t)]
        if bad:
            raise ResourceError(f"malformed tui {bad[0]!r}", path, lineno)
        groups[name.strip()] = tuis
    return SemanticGroups(groups)


def load_groups(path=None) -> SemanticGroups:
    path = data_path(GROUPS) if path is None else Path(path)
    return read_groups(path.read_text(encoding="utf-8"), path)


def _candidates(low, dictionary):
    for i, tok in enumerate(low):
        for n in sorted(dictionary.lengths(tok)):
            surface = tuple(low[i:i + n])
            if len(surface) == n and dictionary.lookup(surface):
                yield i, i + n - 1


def identify(tokens, dictionary: ConceptDictionary, sentence: Optional[str] = None) -> list[ConceptMention]:
    """Longest-span dictionary lookup.

    A match nested inside a longer match is discarded; partially overlapping
    matches both survive. Ambiguous surfaces resolve to the first dictionary
    row, with the other CUIs kept in ``alternatives``.
    """
    tokens = list(tokens)
    if sentence is None:
        sentence = " ".join(tokens)
    offsets = token_offsets(sentence)
    low = [t.lower() for t in tokens]
    spans = sorted(_candidates(low, dictionary), key=lambda s: (s[0] - s[1], s[0]))
    kept: list[tuple[int, int]] = []
    for s, e in spans:
        if not any(ks <= s and e <= ke for ks, ke in kept):
            kept.append((s, e))
    out = []
    for s, e in sorted(kept):
        entries = dictionary.lookup(low[s:e + 1])
        first = entries[0]
        alts = tuple(dict.fromkeys(x.cui for x in entries[1:] if x.cui != first.cui))
        out.append(
            ConceptMention(
                token_start=s,
                token_end=e,
                char_span=(offsets[s][0], offsets[e][1]),
                cui=first.cui,
                preferred=first.preferred,
                tui=first.tui,
                text=" ".join(tokens[s:e + 1]),
                alternatives=alts,
            )
        )
    return out


def semantic_filter(mentions, groups: SemanticGroups) -> list[ConceptMention]:
    keep = groups.tuis()
    return [m for m in mentions if m.tui in keep]


def _overlaps(a, b) -> bool:
    return a[0] <= b[1] and b[0] <= a[1]


def assign_polarity(mentions, negs) -> list[ConceptMention]:
    """Mark a mention negated when its span overlaps any negated span.

    ``negs`` holds :class:`~clinsum.detector.NegationResult` objects (or
    anything with ``span`` and ``possible``). When a result carries
    ``segments`` only those runs count, so material cut out of the middle of
    a negated phrase (an SBAR clause, say) is not negated by the span around
    it. A definite negation outranks a possible one.
    """
    negs = [n for n in negs if getattr(n, "span", None) is not None]
    out = []
    for m in mentions:
        hits = [
            n for n in negs
            if any(_overlaps(m.char_span, seg) for seg in (getattr(n, "segments", ()) or (n.span,)))
        ]
        if hits:
            out.append(replace(m, polarity=NEGATED, possible=all(n.possible for n in hits)))
        else:
            out.append(replace(m, polarity=POSITIVE, possible=False))
    return out
