"""scikit-learn style wrappers.

Nothing here is learned: ``fit`` only loads and validates resources so the
detectors can sit in a pipeline or be compared with ``score``.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin

from .concepts import load_dictionary, load_groups
from .detector import detect, load_rules
from .evaluation import EvalRecord, GoldConcept, evaluate_negation
from .lexicon import load_lexicon
from .negex import WindowConfig, negex_detect, scope_span
from .notes import NoteDocument, split_note
from .pipeline import Pipeline
from .resources import load_stopwords
from .tree import ChainProvider, CommandTreeProvider, Treebank, load_treebank


def _sentences(X) -> list[str]:
    if isinstance(X, str):
        raise TypeError("expected a sequence of sentences, got a single string")
    out = []
    for s in X:
        if not isinstance(s, str):
            raise TypeError(f"sentences must be strings, got {type(s).__name__}")
        out.append(s)
    return out


def _records(X, y) -> list[EvalRecord]:
    X = _sentences(X)
    y = list(y)
    if len(X) != len(y):
        raise ValueError(f"X has {len(X)} sentences but y has {len(y)} gold lists")
    return [
        EvalRecord(s, tuple(GoldConcept(text, pol) for text, pol in gold))
        for s, gold in zip(X, y)
    ]


def _provider(trees, parser_cmd):
    bank = None
    if isinstance(trees, Treebank):
        bank = trees
    elif trees is not None:
        bank = load_treebank(trees)
    cmd = CommandTreeProvider(parser_cmd) if parser_cmd else None
    if bank is None and cmd is None:
        raise ValueError("need trees (a Treebank or path) or parser_cmd")
    return ChainProvider(bank, cmd)


class NegationDetector(BaseEstimator):
    """Syntax-based negation detection over pre-tokenized sentences.

    ``predict`` returns, per sentence, the list of negated character spans.
    ``y`` for ``score`` is, per sentence, a list of ``(concept_text, polarity)``.
    """

    def __init__(self, trees=None, parser_cmd=None, lexicon=None, rules=None, stopwords=None):
        self.trees = trees
        self.parser_cmd = parser_cmd
        self.lexicon = lexicon
        self.rules = rules
        self.stopwords = stopwords

    def fit(self, X=None, y=None):
        self.provider_ = _provider(self.trees, self.parser_cmd)
        self.lexicon_ = load_lexicon(self.lexicon)
        self.rules_ = load_rules(self.rules)
        self.stopwords_ = load_stopwords(self.stopwords)
        return self

    def detect(self, sentence: str):
        return detect(sentence, self.provider_, self.lexicon_, self.rules_, self.stopwords_)

    def predict(self, X):
        return [[r.span for r in self.detect(s) if r.span is not None] for s in _sentences(X)]

    def score(self, X, y):
        return evaluate_negation(
            _records(X, y),
            "syntax",
            provider=self.provider_,
            lexicon=self.lexicon_,
            rules=self.rules_,
            stopwords=self.stopwords_,
        ).accuracy


class NegexDetector(BaseEstimator):
    """Window baseline with the same predict/score contract as :class:`NegationDetector`."""

    def __init__(self, window=5, comma_terminator=True, lexicon=None):
        self.window = window
        self.comma_terminator = comma_terminator
        self.lexicon = lexicon

    def fit(self, X=None, y=None):
        self.cfg_ = WindowConfig.make(self.window, self.comma_terminator)
        self.lexicon_ = load_lexicon(self.lexicon)
        return self

    def predict(self, X):
        return [
            [scope_span(s, r.scope) for r in negex_detect(s.split(), self.lexicon_, self.cfg_)]
            for s in _sentences(X)
        ]

    def score(self, X, y):
        return evaluate_negation(_records(X, y), "negex", lexicon=self.lexicon_, cfg=self.cfg_).accuracy


class ConceptSummarizer(TransformerMixin, BaseEstimator):
    """Turn notes (raw text or :class:`NoteDocument`) into itemized summaries.

    ``transform`` returns one list of ``(section, ["Concept(+)", ...])`` per note.
    """

    def __init__(
        self,
        trees=None,
        parser_cmd=None,
        lexicon=None,
        rules=None,
        dictionary=None,
        groups=None,
        filtering=True,
        stopwords=None,
    ):
        self.trees = trees
        self.parser_cmd = parser_cmd
        self.lexicon = lexicon
        self.rules = rules
        self.dictionary = dictionary
        self.groups = groups
        self.filtering = filtering
        self.stopwords = stopwords

    def fit(self, X=None, y=None):
        self.pipeline_ = Pipeline(
            provider=_provider(self.trees, self.parser_cmd),
            lexicon=load_lexicon(self.lexicon),
            rules=load_rules(self.rules),
            dictionary=load_dictionary(self.dictionary),
            groups=load_groups(self.groups) if self.filtering else None,
            stopwords=load_stopwords(self.stopwords),
        )
        return self

    def transform(self, X):
        if isinstance(X, (str, NoteDocument)):
            raise TypeError("expected a sequence of notes")
        out = []
        for note in X:
            doc = note if isinstance(note, NoteDocument) else split_note(note)
            summary = self.pipeline_.summarize(doc)
            out.append([(h, [m.label() for m in ms]) for h, ms in summary])
        return out
