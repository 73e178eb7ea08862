"""Window-and-punctuation negation baseline.

Each trigger negates up to ``window`` tokens on its side of the sentence,
stopping early at a terminator or at another trigger.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lexicon import PRE, Lexicon, TriggerMatch, find_triggers
from .tree import token_offsets

DEFAULT_TERMINATORS = frozenset({".", ",", ";", ":"})


@dataclass(frozen=True)
class WindowConfig:
    window: int = 5
    terminators: frozenset = field(default=DEFAULT_TERMINATORS)

    def __post_init__(self):
        if self.window < 1:
            raise ValueError("window must be at least 1")

    @classmethod
    def make(cls, window: int = 5, comma_terminates: bool = True) -> WindowConfig:
        terms = DEFAULT_TERMINATORS if comma_terminates else DEFAULT_TERMINATORS - {","}
        return cls(window, frozenset(terms))


@dataclass(frozen=True)
class NegexResult:
    trigger: TriggerMatch
    scope: range

    @property
    def possible(self) -> bool:
        return self.trigger.term.possible


def negex_detect(tokens, lexicon: Lexicon, cfg: WindowConfig = WindowConfig()) -> list[NegexResult]:
    """Scopes exclude the trigger tokens. Pseudonegations get no scope but
    still block scopes of neighbouring triggers."""
    tokens = list(tokens)
    triggers = find_triggers(tokens, lexicon)
    claimed = set()
    for t in triggers:
        claimed.update(range(t.token_start, t.token_end + 1))

    def stop(i):
        return tokens[i] in cfg.terminators or i in claimed

    out = []
    for t in triggers:
        if t.term.is_pseudo:
            continue
        if t.term.location in PRE:
            end = t.token_end + 1
            limit = min(len(tokens), end + cfg.window)
            while end < limit and not stop(end):
                end += 1
            scope = range(t.token_end + 1, end)
        else:
            start = t.token_start - 1
            limit = max(-1, t.token_start - 1 - cfg.window)
            while start > limit and not stop(start):
                start -= 1
            scope = range(start + 1, t.token_start)
        if len(scope):
            out.append(NegexResult(t, scope))
    return out


def scope_span(sentence: str, scope: range) -> tuple[int, int]:
    """1-based inclusive character span of a non-empty token scope."""
    offsets = token_offsets(sentence)
    return offsets[scope.start][0], offsets[scope.stop - 1][1]
