"""Cut a sentence down to the part a trigger can negate."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .lexicon import POST, PRE, Lexicon, TriggerMatch, find_triggers


@dataclass(frozen=True)
class PrunedFragment:
    tokens: tuple[str, ...]
    trigger: TriggerMatch
    orig_token_offset: int

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


def prune(tokens, trigger: TriggerMatch) -> Optional[PrunedFragment]:
    """Pre-triggers keep the trigger through sentence end; post-triggers keep
    sentence start through the trigger. Pseudonegations produce nothing."""
    tokens = tuple(tokens)
    loc = trigger.term.location
    if loc in PRE:
        return PrunedFragment(tokens[trigger.token_start:], trigger, trigger.token_start)
    if loc in POST:
        return PrunedFragment(tokens[:trigger.token_end + 1], trigger, 0)
    return None


def prune_all(tokens, lexicon: Lexicon) -> list[PrunedFragment]:
    out = []
    for match in find_triggers(tokens, lexicon):
        frag = prune(tokens, match)
        if frag is not None:
            out.append(frag)
    return out
