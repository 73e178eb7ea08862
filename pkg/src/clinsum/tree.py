"""Penn-Treebank style constituency trees.

Trees are immutable. Every node carries a ``node_id`` that is unique within
its tree; ids are assigned in pre-order by :func:`parse_ptb` and survive the
surgery operations in :mod:`clinsum.tsurgeon`, which is what lets a pattern
binding keep pointing at the right nodes while a script is being applied.

Leaves are preterminals: ``(NN dvt)`` is a single node with label ``NN`` and
token ``dvt``.
"""

from __future__ import annotations

import re
import shlex
import subprocess
from dataclasses import dataclass, field
from itertools import count
from pathlib import Path
from typing import Iterator, Optional

from .errors import SpanError, TreebankError, TreeParseError


@dataclass(frozen=True)
class Tree:
    label: str
    children: tuple[Tree, ...] = ()
    token: Optional[str] = None
    node_id: int = field(default=-1, compare=False)

    def __post_init__(self):
        if (self.token is None) == (not self.children):
            raise ValueError(
                f"node {self.label!r} must have a token or children, not both or neither"
            )

    @property
    def is_leaf(self) -> bool:
        return self.token is not None

    def preorder(self) -> Iterator[Tree]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> list[Tree]:
        return [n for n in self.preorder() if n.is_leaf]

    def find(self, node_id: int) -> Optional[Tree]:
        for node in self.preorder():
            if node.node_id == node_id:
                return node
        return None

    def max_id(self) -> int:
        return max(n.node_id for n in self.preorder())

    def __len__(self):
        return sum(1 for _ in self.preorder())

    def __str__(self):
        return to_ptb(self)


def leaf(label: str, token: str, node_id: int = -1) -> Tree:
    return Tree(label, (), token, node_id)


def node(label: str, *children: Tree, node_id: int = -1) -> Tree:
    return Tree(label, tuple(children), None, node_id)


def renumber(tree: Tree, start: int = 0) -> Tree:
    """Return a copy of ``tree`` with fresh pre-order ids starting at ``start``."""
    counter = count(start)

    def walk(t):
        nid = next(counter)
        kids = tuple(walk(c) for c in t.children)
        return Tree(t.label, kids, t.token, nid)

    return walk(tree)


# --------------------------------------------------------------------------
# reading and writing

_ATOM = re.compile(r"[^\s()]+")
_SPACE = re.compile(r"\s*")


class _Reader:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.ids = count()

    def skip(self):
        self.pos = _SPACE.match(self.text, self.pos).end()

    def atom(self):
        m = _ATOM.match(self.text, self.pos)
        if not m:
            return None
        self.pos = m.end()
        return m.group()

    def expect_open(self):
        self.skip()
        if self.pos >= len(self.text):
            raise TreeParseError("unexpected end of input, expected '('", self.pos)
        if self.text[self.pos] != "(":
            raise TreeParseError(f"expected '(' but found {self.text[self.pos]!r}", self.pos)
        self.pos += 1

    def read_node(self) -> Tree:
        start = self.pos
        self.expect_open()
        nid = next(self.ids)
        self.skip()
        label = self.atom()
        if label is None:
            if self.pos < len(self.text) and self.text[self.pos] == ")":
                raise TreeParseError("empty node", start)
            if self.pos >= len(self.text):
                raise TreeParseError("unexpected end of input", self.pos)
            raise TreeParseError("missing node label", self.pos)
        self.skip()
        if self.pos >= len(self.text):
            raise TreeParseError("unexpected end of input", self.pos)

        if self.text[self.pos] != "(":
            token_at = self.pos
            token = self.atom()
            self.skip()
            if self.pos >= len(self.text):
                raise TreeParseError("unexpected end of input", self.pos)
            if self.text[self.pos] == "(":
                raise TreeParseError(f"leaf {label!r} has children", self.pos)
            if self.text[self.pos] != ")":
                raise TreeParseError(f"leaf {label!r} has more than one token", token_at)
            self.pos += 1
            return Tree(label, (), token, nid)

        children = []
        while True:
            self.skip()
            if self.pos >= len(self.text):
                raise TreeParseError("unexpected end of input", self.pos)
            c = self.text[self.pos]
            if c == ")":
                self.pos += 1
                break
            if c != "(":
                raise TreeParseError(f"bare token inside {label!r}", self.pos)
            children.append(self.read_node())
        return Tree(label, tuple(children), None, nid)


def parse_ptb(text: str) -> Tree:
    """Parse one bracketed tree. Raises :class:`TreeParseError` with a character offset."""
    reader = _Reader(text)
    tree = reader.read_node()
    reader.skip()
    if reader.pos != len(text):
        raise TreeParseError("trailing input after tree", reader.pos)
    return tree


def to_ptb(tree: Tree) -> str:
    parts = []

    def walk(t):
        if t.is_leaf:
            parts.append(f"({t.label} {t.token})")
            return
        parts.append(f"({t.label}")
        for c in t.children:
            parts.append(" ")
            walk(c)
        parts.append(")")

    walk(tree)
    return "".join(parts)


def yield_tokens(tree: Tree) -> list[str]:
    return [n.token for n in tree.leaves()]


# --------------------------------------------------------------------------
# character spans

_TOKEN = re.compile(r"\S+")


def token_offsets(sentence: str) -> list[tuple[int, int]]:
    """1-based inclusive character span of every whitespace token."""
    return [(m.start() + 1, m.end()) for m in _TOKEN.finditer(sentence)]


def locate_tokens(sentence: str, tokens: list[str], offset: int = 0) -> list[int]:
    """Indices of ``tokens`` as an in-order subsequence of the sentence's words.

    A contiguous occurrence is preferred; when the tokens are only an in-order
    subsequence (surgery removed something from the middle) the narrowest
    window wins. Ties go to the leftmost match. ``offset`` is the word index
    at which the search starts.
    """
    if not tokens:
        raise SpanError("cannot locate an empty token sequence")
    words = sentence.split()
    best = None
    for i in range(offset, len(words)):
        if words[i] != tokens[0]:
            continue
        hit = [i]
        j = i
        for tok in tokens[1:]:
            j += 1
            while j < len(words) and words[j] != tok:
                j += 1
            if j >= len(words):
                break
            hit.append(j)
        if len(hit) < len(tokens):
            # later starts cannot succeed either
            break
        if best is None or hit[-1] - hit[0] < best[-1] - best[0]:
            best = hit
            if hit[-1] - hit[0] == len(tokens) - 1:
                break
    if best is None:
        raise SpanError(f"tokens {tokens!r} not found in {sentence!r}")
    return best


def char_span(sentence: str, tokens: list[str], offset: int = 0) -> tuple[int, int]:
    """1-based inclusive character span covering ``tokens`` (see :func:`locate_tokens`)."""
    idx = locate_tokens(sentence, tokens, offset)
    spans = token_offsets(sentence)
    return spans[idx[0]][0], spans[idx[-1]][1]


def char_segments(sentence: str, indices) -> list[tuple[int, int]]:
    """Merge word indices into contiguous 1-based character runs."""
    spans = token_offsets(sentence)
    runs: list[list[int]] = []
    for i in sorted(indices):
        if runs and i == runs[-1][1] + 1:
            runs[-1][1] = i
        else:
            runs.append([i, i])
    return [(spans[a][0], spans[b][1]) for a, b in runs]


# --------------------------------------------------------------------------
# tree supply


def normalize_text(text: str) -> str:
    return " ".join(text.split())


class Treebank:
    """Sentence-keyed collection of gold trees.

    Also acts as a tree provider: :meth:`lookup` finds the tree for a text
    after whitespace normalization.
    """

    def __init__(self, entries=()):
        self.entries: list[tuple[str, Tree]] = []
        self._index: dict[str, Tree] = {}
        for sentence, tree in entries:
            self.add(sentence, tree)

    def add(self, sentence: str, tree: Tree):
        if sentence.split() != yield_tokens(tree):
            raise TreebankError(
                f"tree leaves {yield_tokens(tree)!r} do not match sentence {sentence!r}",
                len(self.entries),
            )
        self.entries.append((sentence, tree))
        self._index.setdefault(normalize_text(sentence), tree)

    def lookup(self, text: str) -> Optional[Tree]:
        return self._index.get(normalize_text(text))

    def merge(self, other: Treebank) -> Treebank:
        return Treebank(self.entries + other.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def read_treebank(text: str) -> Treebank:
    bank = Treebank()
    records = [r for r in re.split(r"\n\s*\n", text.strip("\n")) if r.strip()]
    for index, record in enumerate(records):
        lines = [ln for ln in record.splitlines() if ln.strip()]
        if len(lines) != 2:
            raise TreebankError(f"expected 2 lines (sentence, tree), got {len(lines)}", index)
        sentence, bracketed = lines
        try:
            tree = parse_ptb(bracketed.strip())
        except TreeParseError as exc:
            raise TreebankError(str(exc), index) from exc
        bank.add(sentence.strip(), tree)
    return bank


def load_treebank(path) -> Treebank:
    return read_treebank(Path(path).read_text(encoding="utf-8"))


def write_treebank(bank: Treebank) -> str:
    return "\n\n".join(f"{s}\n{to_ptb(t)}" for s, t in bank) + ("\n" if len(bank) else "")


class CommandTreeProvider:
    """Obtain trees from an external parser process.

    The command receives one fragment per line on stdin and must print one
    bracketed tree per line. Results are cached per fragment.
    """

    def __init__(self, command, timeout: float = 60.0):
        self.command = shlex.split(command) if isinstance(command, str) else list(command)
        self.timeout = timeout
        self._cache: dict[str, Tree] = {}

    def lookup_many(self, texts) -> list[Optional[Tree]]:
        todo = [normalize_text(t) for t in texts if normalize_text(t) not in self._cache]
        if todo:
            proc = subprocess.run(
                self.command,
                input="\n".join(todo) + "\n",
                capture_output=True,
                text=True,
                timeout=self.timeout,
                check=True,
            )
            lines = [ln for ln in proc.stdout.splitlines() if ln.strip()]
            if len(lines) != len(todo):
                raise RuntimeError(
                    f"parser command returned {len(lines)} trees for {len(todo)} fragments"
                )
            for text, line in zip(todo, lines):
                self._cache[text] = parse_ptb(line.strip())
        return [self._cache.get(normalize_text(t)) for t in texts]

    def lookup(self, text: str) -> Optional[Tree]:
        return self.lookup_many([text])[0]


class ChainProvider:
    """Try several providers in order."""

    def __init__(self, *providers):
        self.providers = [p for p in providers if p is not None]

    def lookup(self, text):
        for p in self.providers:
            t = p.lookup(text)
            if t is not None:
                return t
        return None
