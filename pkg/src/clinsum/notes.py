"""Splitting clinical notes into sections and sentences."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

BODY = "BODY"

_DASH_HEADER = re.compile(r"^\s*-{3,}\s*(.+?)\s*-{3,}\s*$")
_COLON_HEADER = re.compile(r"^\s*([A-Z][A-Za-z0-9 /&()'-]{0,60}):\s*$")
_SENT_END = re.compile(r"[.!?]+(?=\s)")
_ABBREV = re.compile(r"(?:^|\s)(?:[A-Za-z]\.)+$")
_TRAIL = re.compile(r"^(.*?)([.,;:!?)\]\"']*)$")
_LEAD = re.compile(r"^([(\[\"']*)(.*)$")
_DOTTED = re.compile(r"^(?:[A-Za-z]\.)+$")


@dataclass
class NoteDocument:
    sections: list[tuple[str, list[str]]] = field(default_factory=list)

    def sentences(self):
        for header, sents in self.sections:
            for s in sents:
                yield header, s

    def __len__(self):
        return len(self.sections)


def split_sentences(text: str) -> list[str]:
    """Split on ``.``/``!``/``?`` runs followed by whitespace.

    A period that closes a single-letter abbreviation (``J.`` or ``e.g.``)
    does not end a sentence.
    """
    text = " ".join(text.split())
    out = []
    start = 0
    for m in _SENT_END.finditer(text):
        head = text[start:m.end()]
        if m.group() == "." and _ABBREV.search(head):
            continue
        if head.strip():
            out.append(head.strip())
        start = m.end()
    tail = text[start:].strip()
    if tail:
        out.append(tail)
    return out


def tokenize(sentence: str) -> list[str]:
    """Whitespace tokens with edge punctuation detached.

    Internal punctuation stays (``x-ray``, ``U/S``, ``3.5``) and dotted
    abbreviations are left whole.
    """
    out = []
    for raw in sentence.split():
        if _DOTTED.match(raw):
            out.append(raw)
            continue
        lead, rest = _LEAD.match(raw).groups()
        core, trail = _TRAIL.match(rest).groups()
        out.extend(lead)
        if core:
            out.append(core)
        if trail.startswith("...") or trail.startswith(".."):
            out.append(trail[: len(trail) - len(trail.lstrip("."))])
            trail = trail.lstrip(".")
        out.extend(trail)
    return out


def split_note(text: str) -> NoteDocument:
    """Sections start at ``--- Name ---`` lines or lines holding only ``Name:``.

    Text before the first header belongs to the ``BODY`` section. Sentences
    are returned tokenized and space-joined, which is the form the negation
    detector and the span arithmetic expect.
    """
    sections: list[tuple[str, list[str]]] = []
    header = BODY
    buf: list[str] = []

    def flush():
        paragraphs = re.split(r"\n\s*\n", "\n".join(buf))
        sents = [
            " ".join(tokenize(s))
            for para in paragraphs
            for s in split_sentences(para)
        ]
        sents = [s for s in sents if s]
        if sents or header != BODY:
            sections.append((header, sents))

    for line in text.splitlines():
        m = _DASH_HEADER.match(line) or _COLON_HEADER.match(line)
        if m:
            flush()
            header, buf = m.group(1).strip(), []
        else:
            buf.append(line)
    flush()
    return NoteDocument(sections)
