"""Locations of the bundled data files."""

from importlib.resources import files
from pathlib import Path

LEXICON = "lexicon.tsv"
RULES = "rules.txt"
DICTIONARY = "dictionary.tsv"
GROUPS = "groups.tsv"
STOPWORDS = "stopwords.txt"


def data_path(name: str) -> Path:
    return Path(str(files("clinsum") / "data" / name))


def load_stopwords(path=None) -> frozenset:
    path = data_path(STOPWORDS) if path is None else Path(path)
    words = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)
