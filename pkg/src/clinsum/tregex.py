"""A small Tregex dialect for constituency trees.

Supported node descriptions::

    NP          literal label (or, on a leaf, the token text)
    /no|VB*/    whole-label alternation; a trailing ``*`` means "label prefix"
    __          any node
    NP=target   any of the above with a named capture

Supported relations, ``A rel B``:

    <    A is the parent of B          >    A is a child of B
    <<   A properly dominates B        >>   B is a proper ancestor of A
    <<,  B is a leftmost descendant    <<-  B is a rightmost descendant
    <-   B is the last child of A      $    A and B are distinct sisters

A relation prefixed with ``!`` requires that no node satisfies it. Every
chained relation attaches to the pattern's root node; parentheses group a
relation onto an operand instead, e.g. ``S < (NP < DT)``. ``&`` between
relations is accepted and ignored.

Token comparison is case-insensitive; label comparison is exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import PatternSyntaxError
from .tree import Tree

RELATIONS = ("<", "<<", "<<,", "<<-", "<-", ">", ">>", "$")


@dataclass(frozen=True)
class NodeDesc:
    labels: tuple[str, ...] = ()
    prefixes: tuple[str, ...] = ()
    wildcard: bool = False
    capture: Optional[str] = None

    def __post_init__(self):
        if not self.wildcard and not (self.labels or self.prefixes):
            raise ValueError("a node description needs at least one alternative")

    def accepts(self, text: str, token: bool = False) -> bool:
        if token:
            low = text.lower()
            return any(low == a.lower() for a in self.labels) or any(
                low.startswith(p.lower()) for p in self.prefixes
            )
        return text in self.labels or any(text.startswith(p) for p in self.prefixes)

    def matches(self, node: Tree) -> bool:
        if self.wildcard:
            return True
        if self.accepts(node.label):
            return True
        return node.is_leaf and self.accepts(node.token, token=True)

    def __str__(self):
        if self.wildcard:
            body = "__"
        else:
            alts = list(self.labels) + [p + "*" for p in self.prefixes]
            body = alts[0] if len(alts) == 1 and not self.prefixes else "/" + "|".join(alts) + "/"
        return body + (f"={self.capture}" if self.capture else "")


@dataclass(frozen=True)
class Constraint:
    relation: str
    operand: Pattern
    negated: bool = False


@dataclass(frozen=True)
class Pattern:
    root: NodeDesc
    constraints: tuple[Constraint, ...] = ()

    def captures(self) -> list[str]:
        names = [self.root.capture] if self.root.capture else []
        for c in self.constraints:
            names.extend(c.operand.captures())
        return names

    def __str__(self):
        parts = [str(self.root)]
        for c in self.constraints:
            op = str(c.operand)
            if c.operand.constraints:
                op = f"({op})"
            parts.append(("!" if c.negated else "") + c.relation + " " + op)
        return " ".join(parts)


@dataclass(frozen=True)
class MatchBinding:
    root: int
    captures: dict = field(default_factory=dict)

    def __getitem__(self, name):
        return self.captures[name]

    def __contains__(self, name):
        return name in self.captures


# --------------------------------------------------------------------------
# parsing

_LEX = re.compile(
    r"""
    (?P<space>\s+)
  | (?P<rel>[<>$][<>$,\-+]*)
  | (?P<alt>/[^/]*/?)
  | (?P<open>\()
  | (?P<close>\))
  | (?P<bang>!)
  | (?P<amp>&)
  | (?P<capture>=[A-Za-z0-9_]*)
  | (?P<atom>[^\s()<>=!&/$][^\s()<>=!&/]*)
    """,
    re.VERBOSE,
)


def _lex(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _LEX.match(text, pos)
        if m is None:
            raise PatternSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "space":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _PatternParser:
    def __init__(self, text):
        self.text = text
        self.toks = _lex(text)
        self.i = 0
        self.seen: dict[str, int] = {}

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def parse(self) -> Pattern:
        pat = self.expr(negated=False)
        kind, value, pos = self.peek()
        if kind != "end":
            raise PatternSyntaxError(f"unexpected {value!r}", pos)
        return pat

    def expr(self, negated) -> Pattern:
        kind, value, pos = self.peek()
        if kind == "open":
            self.take()
            inner = self.expr(negated)
            kind, value, pos = self.take()
            if kind != "close":
                raise PatternSyntaxError("expected ')'", pos)
        else:
            inner = Pattern(self.nodedesc(negated))
        extra = self.constraints(negated)
        return Pattern(inner.root, inner.constraints + tuple(extra))

    def operand(self, negated) -> Pattern:
        kind, value, pos = self.peek()
        if kind == "open":
            self.take()
            inner = self.expr(negated)
            kind, value, pos = self.take()
            if kind != "close":
                raise PatternSyntaxError("expected ')'", pos)
            return inner
        return Pattern(self.nodedesc(negated))

    def constraints(self, negated) -> list[Constraint]:
        out = []
        while True:
            kind, value, pos = self.peek()
            if kind == "amp":
                self.take()
                kind, value, pos = self.peek()
                if kind not in ("rel", "bang"):
                    raise PatternSyntaxError("expected a relation after '&'", pos)
            neg = False
            if kind == "bang":
                self.take()
                neg = True
                kind, value, pos = self.peek()
                if kind != "rel":
                    raise PatternSyntaxError("expected a relation after '!'", pos)
            if kind != "rel":
                return out
            self.take()
            if value not in RELATIONS:
                raise PatternSyntaxError(f"unknown relation {value!r}", pos)
            operand = self.operand(negated or neg)
            out.append(Constraint(value, operand, neg))

    def nodedesc(self, negated) -> NodeDesc:
        kind, value, pos = self.take()
        if kind == "atom":
            desc = dict(wildcard=True) if value == "__" else dict(labels=(value,))
        elif kind == "alt":
            if len(value) < 2 or not value.endswith("/"):
                raise PatternSyntaxError("unterminated /.../ alternation", pos)
            alts = value[1:-1].split("|")
            if any(a in ("", "*") for a in alts):
                raise PatternSyntaxError("empty alternative in /.../", pos)
            desc = dict(
                labels=tuple(a for a in alts if not a.endswith("*")),
                prefixes=tuple(a[:-1] for a in alts if a.endswith("*")),
            )
        elif kind == "end":
            raise PatternSyntaxError("missing node description", pos)
        else:
            raise PatternSyntaxError(f"expected a node description, found {value!r}", pos)

        kind, value, cpos = self.peek()
        if kind == "capture":
            self.take()
            name = value[1:]
            if not name:
                raise PatternSyntaxError("empty capture name", cpos)
            if negated:
                raise PatternSyntaxError(f"capture {name!r} inside a negated relation", cpos)
            if name in self.seen:
                raise PatternSyntaxError(
                    f"capture {name!r} already bound at offset {self.seen[name]}", cpos
                )
            self.seen[name] = cpos
            desc["capture"] = name
        return NodeDesc(**desc)


def parse_pattern(text: str) -> Pattern:
    return _PatternParser(text).parse()


# --------------------------------------------------------------------------
# matching


class Matcher:
    """Pattern matcher bound to one tree; reuse it for many patterns."""

    def __init__(self, tree: Tree):
        self.tree = tree
        self.nodes = list(tree.preorder())
        self.parent: dict[int, Tree] = {}
        for n in self.nodes:
            for c in n.children:
                self.parent[c.node_id] = n

    def related(self, relation: str, a: Tree) -> Iterator[Tree]:
        """Nodes ``b`` with ``a relation b``, in pre-order."""
        if relation == "<":
            yield from a.children
        elif relation == "<<":
            it = a.preorder()
            next(it)
            yield from it
        elif relation == "<<,":
            while a.children:
                a = a.children[0]
                yield a
        elif relation == "<<-":
            while a.children:
                a = a.children[-1]
                yield a
        elif relation == "<-":
            if a.children:
                yield a.children[-1]
        elif relation == ">":
            p = self.parent.get(a.node_id)
            if p is not None:
                yield p
        elif relation == ">>":
            chain = []
            p = self.parent.get(a.node_id)
            while p is not None:
                chain.append(p)
                p = self.parent.get(p.node_id)
            yield from reversed(chain)
        elif relation == "$":
            p = self.parent.get(a.node_id)
            if p is not None:
                for s in p.children:
                    if s.node_id != a.node_id:
                        yield s
        else:
            raise ValueError(f"unknown relation {relation!r}")

    def bindings_at(self, pattern: Pattern, n: Tree, bound=None) -> Iterator[dict]:
        if not pattern.root.matches(n):
            return
        bound = dict(bound or {})
        if pattern.root.capture:
            bound[pattern.root.capture] = n.node_id
        yield from self._satisfy(pattern.constraints, 0, n, bound)

    def _satisfy(self, constraints, i, n, bound):
        if i == len(constraints):
            yield bound
            return
        c = constraints[i]
        if c.negated:
            for m in self.related(c.relation, n):
                for _ in self.bindings_at(c.operand, m, bound):
                    return
            yield from self._satisfy(constraints, i + 1, n, bound)
            return
        for m in self.related(c.relation, n):
            for b in self.bindings_at(c.operand, m, bound):
                yield from self._satisfy(constraints, i + 1, n, b)

    def first_at(self, pattern: Pattern, n: Tree) -> Optional[MatchBinding]:
        for b in self.bindings_at(pattern, n):
            return MatchBinding(n.node_id, b)
        return None

    def match_all(self, pattern: Pattern) -> list[MatchBinding]:
        out = []
        for n in self.nodes:
            m = self.first_at(pattern, n)
            if m is not None:
                out.append(m)
        return out

    def match_first(self, pattern: Pattern) -> Optional[MatchBinding]:
        for n in self.nodes:
            m = self.first_at(pattern, n)
            if m is not None:
                return m
        return None


def _as_pattern(pattern):
    return parse_pattern(pattern) if isinstance(pattern, str) else pattern


def match_first(pattern, tree: Tree) -> Optional[MatchBinding]:
    return Matcher(tree).match_first(_as_pattern(pattern))


def match_all(pattern, tree: Tree) -> list[MatchBinding]:
    return Matcher(tree).match_all(_as_pattern(pattern))
