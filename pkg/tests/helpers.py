"""Random generators and brute-force oracles shared by the test modules.

The oracles deliberately avoid the package's own traversal code: tree
positions are root paths (tuples of child indices) and every relation is
decided from those paths alone.
"""

from __future__ import annotations

import random
from pathlib import Path

from clinsum.tree import Tree, renumber

FIXTURES = Path(__file__).parent / "fixtures"

PHRASES = ("S", "NP", "VP", "PP", "SBAR")
TAGS = ("NN", "NNS", "VB", "VBD", "DT", "IN", "JJ", "RB")
WORDS = ("no", "No", "dvt", "fever", "the", "of", "denies", "seen")


# --------------------------------------------------------------------------
# random trees


def random_tree(rng: random.Random, max_nodes: int = 25) -> Tree:
    """A random well-formed tree with at most ``max_nodes`` nodes."""
    budget = [rng.randint(2, max_nodes - 1)]  # one node spare for the TOP wrapper

    def build(depth):
        budget[0] -= 1
        if depth >= 5 or budget[0] <= 0 or rng.random() < 0.3:
            return Tree(rng.choice(TAGS), (), rng.choice(WORDS))
        kids = []
        for _ in range(rng.randint(1, 3)):
            if budget[0] <= 0:
                break
            kids.append(build(depth + 1))
        if not kids:
            return Tree(rng.choice(TAGS), (), rng.choice(WORDS))
        return Tree(rng.choice(PHRASES), tuple(kids))

    t = build(0)
    if t.is_leaf:
        t = Tree("S", (t,))
    return renumber(Tree("TOP", (t,)) if rng.random() < 0.5 else t)


# --------------------------------------------------------------------------
# random patterns

_RELS = ("<", "<<", "<<,", "<<-", "<-", ">", ">>", "$")


def _random_desc(rng):
    r = rng.random()
    if r < 0.15:
        return "__"
    if r < 0.3:
        return "/" + "|".join(rng.sample(PHRASES + TAGS, 2)) + "/"
    if r < 0.4:
        return "/" + rng.choice(("N*", "V*", "S*")) + "/"
    if r < 0.5:
        return rng.choice(("no", "dvt", "NO"))
    return rng.choice(PHRASES + TAGS)


def random_pattern_text(rng: random.Random, max_depth: int = 3) -> str:
    names = iter(f"c{i}" for i in range(100))

    def expr(depth, negated):
        desc = _random_desc(rng)
        if not negated and rng.random() < 0.5:
            desc += "=" + next(names)
        parts = [desc]
        if depth < max_depth:
            for _ in range(rng.choice((0, 1, 1, 2))):
                neg = rng.random() < 0.2
                rel = rng.choice(_RELS)
                sub = expr(depth + 1, negated or neg)
                parts.append(("!" if neg else "") + rel + " " + (f"({sub})" if " " in sub else sub))
        return " ".join(parts)

    return expr(0, False)


# --------------------------------------------------------------------------
# brute-force matcher


class _Positions:
    def __init__(self, tree: Tree):
        self.nodes = []  # (path, node) in pre-order
        self.by_path = {}

        def walk(t, path):
            self.nodes.append((path, t))
            self.by_path[path] = t
            for i, c in enumerate(t.children):
                walk(c, path + (i,))

        walk(tree, ())

    def nkids(self, path):
        return len(self.by_path[path].children)

    def holds(self, rel, a, b) -> bool:
        """``a rel b`` for root paths ``a`` and ``b``."""
        if rel == "<":
            return b[:-1] == a and len(b) == len(a) + 1
        if rel == ">":
            return self.holds("<", b, a)
        if rel == "<<":
            return len(b) > len(a) and b[: len(a)] == a
        if rel == ">>":
            return self.holds("<<", b, a)
        if rel == "<<,":
            return self.holds("<<", a, b) and all(i == 0 for i in b[len(a):])
        if rel == "<<-":
            if not self.holds("<<", a, b):
                return False
            return all(b[k] == self.nkids(b[:k]) - 1 for k in range(len(a), len(b)))
        if rel == "<-":
            return self.holds("<", a, b) and b[-1] == self.nkids(a) - 1
        if rel == "$":
            return len(a) == len(b) and len(a) > 0 and a[:-1] == b[:-1] and a != b
        raise ValueError(rel)


def _desc_ok(desc, node) -> bool:
    if desc.wildcard:
        return True
    label = node.label
    if label in desc.labels or any(label.startswith(p) for p in desc.prefixes):
        return True
    if not node.is_leaf:
        return False
    tok = node.token.lower()
    return tok in {a.lower() for a in desc.labels} or any(tok.startswith(p.lower()) for p in desc.prefixes)


def _flatten(pattern, parent=None, rel=None, out=None):
    """Positive pattern nodes in depth-first order as (desc, parent index, relation, negated constraints)."""
    out = [] if out is None else out
    idx = len(out)
    negs = [c for c in pattern.constraints if c.negated]
    out.append((pattern.root, parent, rel, negs))
    for c in pattern.constraints:
        if not c.negated:
            _flatten(c.operand, idx, c.relation, out)
    return out


def _exists(pos, pattern, path, memo) -> bool:
    """Some assignment of ``pattern`` with its root at ``path``."""
    key = (id(pattern), path)
    if key not in memo:
        flat = memo.setdefault(("flat", id(pattern)), _flatten(pattern))
        memo[key] = _first(pos, flat, path, memo) is not None
    return memo[key]


def _first(pos, flat, root_path, memo):
    root = pos.by_path[root_path]
    if not _desc_ok(flat[0][0], root):
        return None
    ck = ("cands", id(flat))
    if ck not in memo:
        memo[ck] = [[p for p, n in pos.nodes if _desc_ok(d, n)] for d, _, _, _ in flat]
    cands = [[root_path]] + memo[ck][1:]
    assign = [None] * len(flat)

    def ok(k, path):
        _, parent, rel, negs = flat[k]
        if parent is not None and not pos.holds(rel, assign[parent], path):
            return False
        for c in negs:
            for other, _ in pos.nodes:
                if pos.holds(c.relation, path, other) and _exists(pos, c.operand, other, memo):
                    return False
        return True

    def search(k):
        if k == len(flat):
            return True
        for path in cands[k]:
            if ok(k, path):
                assign[k] = path
                if search(k + 1):
                    return True
        return False

    return list(assign) if search(0) else None


def brute_match_all(pattern, tree: Tree) -> list[tuple[int, dict]]:
    """(root node id, captures) for every tree node where the pattern matches,
    taking the first assignment in pre-order lexicographic order."""
    pos = _Positions(tree)
    flat = _flatten(pattern)
    memo: dict = {}
    out = []
    for path, node in pos.nodes:
        assign = _first(pos, flat, path, memo)
        if assign is None:
            continue
        caps = {}
        for (desc, _, _, _), p in zip(flat, assign):
            if desc.capture:
                caps[desc.capture] = pos.by_path[p].node_id
        out.append((node.node_id, caps))
    return out


# --------------------------------------------------------------------------
# longest-span oracle


def brute_longest_spans(low_tokens, surfaces) -> list[tuple[int, int]]:
    """All dictionary matches, then keep maximal-length non-nested spans,
    longest first and left to right."""
    found = []
    for i in range(len(low_tokens)):
        for j in range(i, len(low_tokens)):
            if tuple(low_tokens[i:j + 1]) in surfaces:
                found.append((i, j))
    kept = []
    for s, e in sorted(found, key=lambda x: (-(x[1] - x[0]), x[0])):
        if not any(a <= s and e <= b for a, b in kept):
            kept.append((s, e))
    return sorted(kept)


def is_subsequence(small, big) -> bool:
    it = iter(big)
    return all(any(x == y for y in it) for x in small)
