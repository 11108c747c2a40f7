"""Corpus ingestion and token cleanup.

Raw documents are plain UTF-8 files with a three-line header (id / title /
year), a blank line, then body text.  Tokenization lowercases, strips edge
punctuation, expands declared abbreviations, and drops mixed letter-digit
tokens; pure-digit tokens survive.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from pathlib import Path

from .errors import DuplicateId, MissingMetadata, UnreadableFile
from .kb import KnowledgeBase


@dataclass(frozen=True)
class Document:
    id: str
    title: str
    year: int
    text: str


@dataclass(frozen=True)
class Token:
    text: str
    position: int


def ingest(paths) -> list:
    """Read document files in the given order; duplicate ids are rejected."""
    docs = []
    seen = set()
    for path in paths:
        try:
            raw = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise UnreadableFile(f"{path}: {exc}") from exc
        header, _, body = raw.partition("\n\n")
        fields = {}
        for line in header.splitlines():
            key, sep, value = line.partition(":")
            if sep:
                fields[key.strip()] = value.strip()
        for required in ("id", "title", "year"):
            if required not in fields:
                raise MissingMetadata(f"{path}: missing {required!r} header")
        try:
            year = int(fields["year"])
        except ValueError:
            raise MissingMetadata(f"{path}: year {fields['year']!r} is not an integer")
        if year <= 0:
            raise MissingMetadata(f"{path}: year must be positive")
        doc_id = fields["id"]
        if doc_id in seen:
            raise DuplicateId(f"{path}: duplicate document id {doc_id!r}")
        seen.add(doc_id)
        docs.append(Document(doc_id, fields["title"], year, body))
    return docs


def _is_mixed_alnum(word: str) -> bool:
    return any(c.isalpha() for c in word) and any(c.isdigit() for c in word)


def _clean_word(kb: KnowledgeBase, word: str, out: list, seen: frozenset) -> None:
    # abbreviation expansion runs before the mixed-alnum filter; the seen set
    # guards against expansion cycles
    if word in kb.abbreviations and word not in seen:
        for part in kb.abbreviations[word].split():
            _clean_word(kb, part, out, seen | {word})
        return
    stripped = word.strip(string.punctuation)
    if stripped != word and stripped in kb.abbreviations and stripped not in seen:
        for part in kb.abbreviations[stripped].split():
            _clean_word(kb, part, out, seen | {stripped})
        return
    if not stripped:
        return
    if _is_mixed_alnum(stripped):
        return
    out.append(stripped)


def tokenize(kb: KnowledgeBase, text: str) -> list:
    words = []
    for raw in text.split():
        _clean_word(kb, raw.lower(), words, frozenset())
    return [Token(w, i) for i, w in enumerate(words)]
