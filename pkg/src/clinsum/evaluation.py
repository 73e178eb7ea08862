"""Gold-annotated evaluation of negation detection and concept identification."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .concepts import NEGATED, POSITIVE, identify, semantic_filter
from .detector import detect
from .errors import MissingTreeError, ResourceError
from .negex import WindowConfig, negex_detect, scope_span
from .tree import token_offsets

MODES = ("syntax", "negex")
_POLARITY = {"negated": NEGATED, "neg": NEGATED, "-": NEGATED, "positive": POSITIVE, "pos": POSITIVE, "+": POSITIVE}


@dataclass(frozen=True)
class GoldConcept:
    text: str
    polarity: str
    cui: Optional[str] = None


@dataclass(frozen=True)
class EvalRecord:
    sentence: str
    gold: tuple[GoldConcept, ...]

    def spans(self) -> list[tuple[GoldConcept, tuple[int, int]]]:
        """Character span of each gold concept; repeated texts take successive occurrences."""
        words = [w.lower() for w in self.sentence.split()]
        offsets = token_offsets(self.sentence)
        used: dict[str, int] = {}
        out = []
        for g in self.gold:
            target = g.text.lower().split()
            n = len(target)
            hits = [i for i in range(len(words) - n + 1) if words[i:i + n] == target]
            k = used.get(g.text.lower(), 0)
            if k >= len(hits):
                raise ValueError(f"concept {g.text!r} not found in {self.sentence!r}")
            used[g.text.lower()] = k + 1
            i = hits[k]
            out.append((g, (offsets[i][0], offsets[i + n - 1][1])))
        return out


@dataclass(frozen=True)
class Metrics:
    accuracy: float
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int
    total: int

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int, total: int, accuracy: Optional[float] = None):
        p = tp / (tp + fp) if tp + fp else 0.0
        r = tp / (tp + fn) if tp + fn else 0.0
        f = 2 * p * r / (p + r) if p + r else 0.0
        if accuracy is None:
            accuracy = tp / (tp + fp + fn) if tp + fp + fn else 0.0
        return cls(accuracy, p, r, f, tp, fp, fn, total)

    def __str__(self):
        return (
            f"accuracy={self.accuracy:.3f} precision={self.precision:.3f} "
            f"recall={self.recall:.3f} f1={self.f1:.3f} "
            f"(tp={self.tp} fp={self.fp} fn={self.fn} total={self.total})"
        )


def read_eval(text: str, path=None) -> list[EvalRecord]:
    records = []
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        if not lines[i].strip() or lines[i].lstrip().startswith("#"):
            i += 1
            continue
        start = i
        sentence = " ".join(lines[i].split())
        i += 1
        gold = []
        while i < len(lines) and lines[i].strip():
            cols = [c.strip() for c in lines[i].split("\t")]
            if len(cols) not in (2, 3):
                raise ResourceError("expected 'concept<TAB>polarity[<TAB>cui]'", path, i + 1)
            pol = _POLARITY.get(cols[1].lower())
            if pol is None:
                raise ResourceError(f"unknown polarity {cols[1]!r}", path, i + 1)
            gold.append(GoldConcept(cols[0], pol, cols[2] if len(cols) == 3 else None))
            i += 1
        rec = EvalRecord(sentence, tuple(gold))
        try:
            rec.spans()
        except ValueError as exc:
            raise ResourceError(str(exc), path, start + 1) from exc
        records.append(rec)
    return records


def load_eval(path) -> list[EvalRecord]:
    return read_eval(Path(path).read_text(encoding="utf-8"), path)


def _covered(span, negs) -> bool:
    return any(s[0] <= span[0] and span[1] <= s[1] for s in negs)


def negated_spans(record: EvalRecord, mode: str, **resources) -> list[tuple[int, int]]:
    sentence = record.sentence
    if mode == "syntax":
        results = detect(
            sentence,
            resources["provider"],
            resources["lexicon"],
            resources["rules"],
            resources.get("stopwords", frozenset()),
        )
        return [seg for r in results if r.span is not None for seg in (r.segments or (r.span,))]
    if mode == "negex":
        cfg = resources.get("cfg") or WindowConfig()
        found = negex_detect(sentence.split(), resources["lexicon"], cfg)
        return [scope_span(sentence, r.scope) for r in found]
    raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")


def evaluate_negation(records, mode: str, **resources) -> Metrics:
    """Accuracy is the share of gold negated concepts whose span lies inside a
    detected negated span (for syntax mode, inside one contiguous segment of
    it). A gold positive concept inside a negated span
    counts as a false positive.

    Resources: ``lexicon`` always; ``provider`` and ``rules`` (and optionally
    ``stopwords``) for syntax mode; ``cfg`` for negex mode.
    """
    records = list(records)
    if not records:
        raise ValueError("empty evaluation set")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    tp = fp = fn = 0
    missing = []
    for rec in records:
        try:
            negs = negated_spans(rec, mode, **resources)
        except MissingTreeError as exc:
            missing.extend(exc.fragments)
            continue
        for g, span in rec.spans():
            hit = _covered(span, negs)
            if g.polarity == NEGATED:
                tp += hit
                fn += not hit
            else:
                fp += hit
    if missing:
        raise MissingTreeError(missing)
    total = tp + fn
    return Metrics.from_counts(tp, fp, fn, total, accuracy=tp / total if total else 0.0)


def evaluate_concepts(records, dictionary, groups=None, filtering: bool = True) -> Metrics:
    """Score predicted mentions against gold concepts by span and cui.

    A gold concept without a cui matches on span alone.
    """
    if filtering and groups is None:
        raise ValueError("filtering needs semantic groups")
    tp = fp = fn = total = 0
    for rec in records:
        mentions = identify(rec.sentence.split(), dictionary, rec.sentence)
        if filtering:
            mentions = semantic_filter(mentions, groups)
        predicted = {(m.char_span, m.cui) for m in mentions}
        matched = set()
        for g, span in rec.spans():
            total += 1
            hit = None
            for p in predicted - matched:
                if p[0] == span and (g.cui is None or g.cui == p[1]):
                    hit = p
                    break
            if hit is None:
                fn += 1
            else:
                tp += 1
                matched.add(hit)
        fp += len(predicted - matched)
    return Metrics.from_counts(tp, fp, fn, total)

