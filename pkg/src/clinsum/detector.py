"""Syntax-based negation detection.

For each trigger in a sentence the sentence is pruned to a fragment, the
fragment's parse is fetched from a tree provider, and phrase-structure rules
cut the parse down to the negated material. The result carries a trace of
every step so a run can be inspected the same way it was developed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .errors import MissingTreeError, PatternSyntaxError, ResourceError, ScriptError, SurgeryError
from .lexicon import PHRASE_TYPES, Lexicon, TriggerMatch, TriggerTerm
from .pruning import PrunedFragment, prune_all
from .resources import RULES, data_path
from .tree import Tree, char_segments, locate_tokens, token_offsets, yield_tokens
from .tregex import Matcher, Pattern, parse_pattern
from .tsurgeon import SurgeryScript, extract, parse_script, run_script

STAGES = ("pre", "main", "fallback")
UNMATCHED = "UNMATCHED"


@dataclass(frozen=True)
class Rule:
    name: str
    phrase_type: str
    pattern: Pattern
    script: SurgeryScript
    concept_capture: str
    priority: int = 0
    stage: str = "main"
    unless: Optional[Pattern] = None

    def __post_init__(self):
        names = set(self.pattern.captures())
        if self.concept_capture not in names:
            raise ValueError(f"concept capture {self.concept_capture!r} is not in the pattern")
        unbound = self.script.names() - names
        if unbound:
            raise ValueError(f"script names unbound capture(s): {', '.join(sorted(unbound))}")
        if self.stage not in STAGES:
            raise ValueError(f"unknown stage {self.stage!r}")
        if self.phrase_type != "ANY" and self.phrase_type not in PHRASE_TYPES[:-1]:
            raise ValueError(f"unknown phrase type {self.phrase_type!r}")

    @property
    def is_exception(self) -> bool:
        return self.phrase_type == "ANY"


@dataclass(frozen=True)
class NegationResult:
    sentence: str
    trigger: TriggerMatch
    fragment: PrunedFragment
    tree: Tree
    extracted: Optional[Tree]
    negated_tokens: tuple[str, ...]
    span: Optional[tuple[int, int]]
    possible: bool
    rule_name: str
    steps: tuple[tuple[str, Tree], ...] = field(default=(), compare=False)
    # contiguous character runs of the negated tokens; differs from ``span``
    # when surgery removed material from the middle
    segments: tuple[tuple[int, int], ...] = ()

    @property
    def matched(self) -> bool:
        return self.rule_name != UNMATCHED and self.span is not None

    @property
    def text(self) -> str:
        return " ".join(self.negated_tokens)


# --------------------------------------------------------------------------
# rule files

_KEYS = {"name", "type", "pattern", "script", "concept", "priority", "stage", "unless"}


def read_rules(text: str, path=None) -> list[Rule]:
    rules = []
    record: dict[str, tuple[str, int]] = {}

    def flush():
        if not record:
            return
        start = min(line for _, line in record.values())
        name = record.get("name", ("", start))[0] or f"rule@{start}"
        missing = {"name", "type", "pattern", "concept"} - set(record)
        if missing:
            raise ResourceError(f"rule {name!r} is missing {', '.join(sorted(missing))}", path, start)
        ptype = record["type"][0]
        try:
            rule = Rule(
                name=name,
                phrase_type=ptype,
                pattern=parse_pattern(record["pattern"][0]),
                script=parse_script(record.get("script", ("", 0))[0]),
                concept_capture=record["concept"][0],
                priority=int(record.get("priority", ("0", 0))[0]),
                stage=record.get("stage", ("fallback" if ptype == "ANY" else "main", 0))[0],
                unless=parse_pattern(record["unless"][0]) if "unless" in record else None,
            )
        except (PatternSyntaxError, ScriptError, ValueError) as exc:
            raise ResourceError(f"rule {name!r}: {exc}", path, start) from exc
        rules.append(rule)
        record.clear()

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            flush()
            continue
        key, sep, value = line.partition(":")
        key = key.strip().lower()
        if not sep or key not in _KEYS:
            raise ResourceError(f"unrecognized line {line!r}", path, lineno)
        if key in record:
            raise ResourceError(f"duplicate key {key!r}", path, lineno)
        record[key] = (value.strip(), lineno)
    flush()
    # stable sort keeps file order among equal keys
    return sorted(rules, key=lambda r: (not r.is_exception, r.priority))


def load_rules(path=None) -> list[Rule]:
    path = data_path(RULES) if path is None else Path(path)
    return read_rules(path.read_text(encoding="utf-8"), path)


# --------------------------------------------------------------------------
# token cleanup


def strip_split_trigger(tokens, trigger: TriggerTerm) -> list[str]:
    """Drop trigger words left at the front of an extracted span.

    The parser may split a multi-word trigger across constituents, so the
    longest run of leading tokens that equals any contiguous piece of the
    trigger is removed (``evidence of`` from ``without evidence of``).
    """
    tokens = list(tokens)
    trig = trigger.tokens
    best = 0
    for j in range(len(trig)):
        k = 0
        while k < len(tokens) and j + k < len(trig) and tokens[k].lower() == trig[j + k]:
            k += 1
        best = max(best, k)
    return tokens[best:]


def drop_leading(tokens, words) -> list[str]:
    tokens = list(tokens)
    while tokens and tokens[0].lower() in words:
        tokens.pop(0)
    return tokens


# --------------------------------------------------------------------------
# detection


def _apply(rule: Rule, tree: Tree) -> Optional[Tree]:
    """Run one rule against ``tree``; return the extracted subtree or None."""
    matcher = Matcher(tree)
    if rule.unless is not None and matcher.match_first(rule.unless) is not None:
        return None
    binding = matcher.match_first(rule.pattern)
    if binding is None:
        return None
    try:
        result = run_script(tree, binding, rule.script)
    except SurgeryError:
        return None
    concept = binding[rule.concept_capture]
    if result.find(concept) is None:
        concept = result.node_id
    return extract(result, concept)


def _apply_repeatedly(rule: Rule, tree: Tree) -> tuple[Tree, bool]:
    changed = False
    for _ in range(len(tree)):
        matcher = Matcher(tree)
        if rule.unless is not None and matcher.match_first(rule.unless) is not None:
            break
        binding = matcher.match_first(rule.pattern)
        if binding is None:
            break
        try:
            new = run_script(tree, binding, rule.script)
        except SurgeryError:
            break
        if new is tree:
            break
        tree, changed = new, True
    return tree, changed


def negate_fragment(
    sentence: str,
    fragment: PrunedFragment,
    tree: Tree,
    rules,
    drop_words=frozenset(),
    strip_trigger: bool = False,
) -> NegationResult:
    trigger = fragment.trigger
    ptype = trigger.term.phrase_type
    steps = []
    work = tree
    for rule in rules:
        if rule.stage == "pre":
            work, changed = _apply_repeatedly(rule, work)
            if changed:
                steps.append((rule.name, work))

    extracted = None
    used = UNMATCHED
    main = [r for r in rules if r.stage == "main" and r.phrase_type == ptype]
    fallback = [r for r in rules if r.stage == "fallback"]
    candidates = [(r, f"tregex/tsurgeon with negated type: {ptype}") for r in main]
    candidates += [(r, r.name) for r in fallback]
    for rule, label in candidates:
        extracted = _apply(rule, work)
        if extracted is not None:
            used = rule.name
            steps.append((label, extracted))
            break

    tokens: list[str] = []
    span = None
    segments: list[tuple[int, int]] = []
    if extracted is not None:
        tokens = drop_leading(yield_tokens(extracted), drop_words)
        if strip_trigger:
            tokens = strip_split_trigger(tokens, trigger.term)
        if tokens:
            idx = locate_tokens(sentence, tokens, offset=fragment.orig_token_offset)
            offsets = token_offsets(sentence)
            span = (offsets[idx[0]][0], offsets[idx[-1]][1])
            segments = char_segments(sentence, idx)
    return NegationResult(
        sentence=sentence,
        trigger=trigger,
        fragment=fragment,
        tree=tree,
        extracted=extracted,
        negated_tokens=tuple(tokens),
        span=span,
        possible=trigger.term.possible,
        rule_name=used,
        steps=tuple(steps),
        segments=tuple(segments),
    )


def detect(
    sentence: str,
    provider,
    lexicon: Lexicon,
    rules,
    stopwords=frozenset(),
    strip_trigger: bool = False,
) -> list[NegationResult]:
    """Find negated spans in one pre-tokenized sentence.

    ``provider`` is anything with a ``lookup(text) -> Tree | None`` method,
    typically a :class:`~clinsum.tree.Treebank`. Leading tokens of each
    extracted span are dropped while they are single-word triggers or
    stopwords. Raises :class:`MissingTreeError` naming every fragment
    without a tree.
    """
    tokens = sentence.split()
    fragments = prune_all(tokens, lexicon)
    trees = [provider.lookup(f.text) for f in fragments]
    missing = [f.text for f, t in zip(fragments, trees) if t is None]
    if missing:
        raise MissingTreeError(missing)
    drop_words = frozenset(stopwords) | lexicon.single_words()
    return [
        negate_fragment(sentence, f, t, rules, drop_words, strip_trigger)
        for f, t in zip(fragments, trees)
    ]


def fragments_needing_trees(sentence: str, lexicon: Lexicon) -> list[str]:
    return [f.text for f in prune_all(sentence.split(), lexicon)]

