"""Sentence and note level glue: negation + concepts + polarity."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .concepts import (
    ConceptDictionary,
    ConceptMention,
    SemanticGroups,
    assign_polarity,
    identify,
    load_dictionary,
    load_groups,
    semantic_filter,
)
from .detector import NegationResult, detect, load_rules
from .errors import MissingTreeError
from .lexicon import Lexicon, load_lexicon
from .notes import NoteDocument
from .resources import load_stopwords


@dataclass
class SentenceAnalysis:
    sentence: str
    negations: list[NegationResult]
    mentions: list[ConceptMention]


@dataclass
class Pipeline:
    """Bundle of the resources one summarization run needs.

    ``provider`` supplies fragment trees (a Treebank or a command provider).
    ``groups`` set to None switches semantic filtering off.
    """

    provider: object
    lexicon: Lexicon = field(default_factory=load_lexicon)
    rules: list = field(default_factory=load_rules)
    dictionary: ConceptDictionary = field(default_factory=load_dictionary)
    groups: Optional[SemanticGroups] = field(default_factory=load_groups)
    stopwords: frozenset = field(default_factory=load_stopwords)
    strip_trigger: bool = False

    def negations(self, sentence: str) -> list[NegationResult]:
        return detect(
            sentence, self.provider, self.lexicon, self.rules, self.stopwords, self.strip_trigger
        )

    def analyze(self, sentence: str) -> SentenceAnalysis:
        negs = self.negations(sentence)
        mentions = identify(sentence.split(), self.dictionary, sentence)
        if self.groups is not None:
            mentions = semantic_filter(mentions, self.groups)
        return SentenceAnalysis(sentence, negs, assign_polarity(mentions, negs))

    def summarize(self, note: NoteDocument) -> list[tuple[str, list[ConceptMention]]]:
        """Per-section mentions in document order, duplicates kept.

        Missing trees are collected over the whole note and reported together.
        """
        out = []
        missing = []
        for header, sentences in note.sections:
            mentions = []
            for s in sentences:
                try:
                    mentions.extend(self.analyze(s).mentions)
                except MissingTreeError as exc:
                    missing.extend(f"{f} (in: {s})" for f in exc.fragments)
            out.append((header, mentions))
        if missing:
            raise MissingTreeError(missing)
        return out


def format_text(summary) -> str:
    lines = []
    for header, mentions in summary:
        lines.append(f"--- {header} ---")
        lines.append(", ".join(m.label() for m in mentions))
    return "\n".join(lines) + ("\n" if lines else "")


def format_tsv(summary) -> str:
    lines = []
    for header, mentions in summary:
        for m in mentions:
            cui = "|".join((m.cui,) + m.alternatives)
            lines.append(
                "\t".join(
                    [
                        header,
                        cui,
                        m.preferred,
                        m.polarity,
                        str(m.possible).lower(),
                        f"{m.char_span[0]},{m.char_span[1]}",
                    ]
                )
            )
    return "\n".join(lines) + ("\n" if lines else "")
