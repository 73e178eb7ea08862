"""Tsurgeon-style edits: delete, excise and extract.

All operations are persistent: they return a new tree and keep the ``node_id``
of every surviving node, so ids from a :class:`~clinsum.tregex.MatchBinding`
stay valid across a multi-step script.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ScriptError, SurgeryError
from .tree import Tree

ARITY = {"delete": 1, "excise": 2, "extract": 1}
_OTHER_VERBS = {"move", "adjoin", "relabel", "insert", "replace", "prune", "coindex"}


def _require(tree: Tree, node_id: int) -> Tree:
    found = tree.find(node_id)
    if found is None:
        raise SurgeryError(f"node {node_id} is not in the tree")
    return found


def delete(tree: Tree, node_id: int) -> Tree:
    """Remove a node and its subtree.

    Nonterminals left without children are removed as well, bottom-up. The
    deletion must leave at least one token behind; deleting the root, or a
    node whose removal would empty the root, raises :class:`SurgeryError`.
    """
    _require(tree, node_id)
    if tree.node_id == node_id:
        raise SurgeryError("cannot delete the root")

    def rebuild(t):
        if t.node_id == node_id:
            return None
        if t.is_leaf:
            return t
        kids = tuple(k for k in (rebuild(c) for c in t.children) if k is not None)
        if not kids:
            return None
        if len(kids) == len(t.children) and all(a is b for a, b in zip(kids, t.children)):
            return t
        return Tree(t.label, kids, None, t.node_id)

    result = rebuild(tree)
    if result is None:
        raise SurgeryError(f"deleting node {node_id} would leave an empty tree")
    return result


def excise(tree: Tree, top: int, bottom: int) -> Tree:
    """Cut out the chain from ``top`` down to ``bottom``.

    ``bottom``'s children take ``top``'s place under ``top``'s parent, in
    order. Everything else on the chain (including siblings hanging off it)
    goes away. A leaf ``bottom`` is itself promoted, since its token is the
    only content it has.
    """
    top_node = _require(tree, top)
    if tree.node_id == top:
        raise SurgeryError("cannot excise the root")
    bottom_node = top_node.find(bottom)
    if bottom_node is None:
        if tree.find(bottom) is None:
            raise SurgeryError(f"node {bottom} is not in the tree")
        raise SurgeryError(f"node {top} does not dominate node {bottom}")
    replacement = (bottom_node,) if bottom_node.is_leaf else bottom_node.children

    def rebuild(t):
        if t.is_leaf:
            return t
        kids = []
        changed = False
        for c in t.children:
            if c.node_id == top:
                kids.extend(replacement)
                changed = True
            else:
                nc = rebuild(c)
                changed = changed or nc is not c
                kids.append(nc)
        if not changed:
            return t
        return Tree(t.label, tuple(kids), None, t.node_id)

    return rebuild(tree)


def extract(tree: Tree, node_id: int) -> Tree:
    """Copy a subtree out under a fresh ``TOP`` root."""
    target = _require(tree, node_id)
    if target is tree and tree.label == "TOP":
        return tree
    return Tree("TOP", (target,), None, tree.max_id() + 1)


@dataclass(frozen=True)
class SurgeryScript:
    ops: tuple[tuple[str, tuple[str, ...]], ...] = ()

    def __post_init__(self):
        for verb, names in self.ops:
            if verb not in ARITY:
                raise ScriptError(f"unknown verb {verb!r}")
            if len(names) != ARITY[verb]:
                raise ScriptError(f"{verb} takes {ARITY[verb]} name(s), got {len(names)}")

    def names(self) -> set[str]:
        return {n for _, names in self.ops for n in names}

    def __str__(self):
        return ",".join(" ".join((verb,) + names) for verb, names in self.ops)


def parse_script(text: str) -> SurgeryScript:
    """Parse action lines such as ``excise s head`` or ``delete head,delete neg``.

    Clauses are comma separated; a comma-separated piece that does not start
    with a verb continues the previous clause (``excise s,head``).
    """
    clauses: list[list[str]] = []
    for piece in text.split(","):
        words = piece.split()
        if not words:
            continue
        if words[0] in ARITY:
            clauses.append(list(words))
        elif words[0] in _OTHER_VERBS or not re.fullmatch(r"[A-Za-z_]\w*", words[0]):
            raise ScriptError(f"unsupported verb {words[0]!r}")
        elif not clauses:
            raise ScriptError(f"script must start with a verb, found {words[0]!r}")
        else:
            clauses[-1].extend(words)
    return SurgeryScript(tuple((c[0], tuple(c[1:])) for c in clauses))


def run_script(tree: Tree, binding, script: SurgeryScript) -> Tree:
    captures = getattr(binding, "captures", binding)
    missing = sorted(script.names() - set(captures))
    if missing:
        raise ScriptError(f"script names unbound capture(s): {', '.join(missing)}")
    for verb, names in script.ops:
        ids = [captures[n] for n in names]
        if verb == "delete":
            tree = delete(tree, ids[0])
        elif verb == "excise":
            tree = excise(tree, ids[0], ids[1])
        else:
            tree = extract(tree, ids[0])
    return tree
