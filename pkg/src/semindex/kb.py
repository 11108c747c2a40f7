"""Knowledge base: canonical terms, synonym classes, quasi-synonym links.

The KB is a single JSON file.  Synonym classes act as hyperedges grouping
surface forms under one canonical; quasi-synonym links connect classes and
are treated as symmetric at query time regardless of declaration direction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .errors import InconsistentKb, MalformedKb, UnknownTerm

CATEGORIES = frozenset(
    {
        "noun",
        "verb",
        "adjective",
        "homonym",
        "hyponym",
        "hyperonym",
        "meronym",
        "contextual-expression",
        "entity-person",
        "entity-place",
        "entity-organization",
        "entity-product",
    }
)

_TOP_LEVEL_KEYS = frozenset({"classes", "categories", "stop_words", "abbreviations"})


@dataclass(frozen=True)
class TermRecord:
    surface: str
    canonical: str
    category: str
    class_id: str


@dataclass(frozen=True)
class SynonymClass:
    class_id: str
    members: frozenset
    canonical: str
    quasi_synonym_of: frozenset


@dataclass(frozen=True)
class KnowledgeBase:
    records: dict  # surface -> TermRecord
    classes: dict  # class_id -> SynonymClass
    stop_words: frozenset
    abbreviations: dict  # surface -> expansion
    canonical_classes: dict = field(default_factory=dict)  # canonical -> class_id

    @property
    def canonicals(self) -> set:
        return set(self.canonical_classes)


def _check_word(word, what: str) -> str:
    if not isinstance(word, str) or not word:
        raise InconsistentKb(f"{what} must be a nonempty string, got {word!r}")
    if word != word.lower():
        raise InconsistentKb(f"{what} {word!r} is not lowercase")
    if any(ch.isspace() for ch in word):
        raise InconsistentKb(f"{what} {word!r} contains whitespace")
    return word


def load_kb(path) -> KnowledgeBase:
    """Parse and validate a KB file, raising MalformedKb / InconsistentKb."""
    raw = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise MalformedKb(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise MalformedKb(f"{path}: top level must be an object")
    unknown = set(data) - _TOP_LEVEL_KEYS
    if unknown:
        raise MalformedKb(f"{path}: unknown top-level keys {sorted(unknown)}")

    categories = {}
    for entry in data.get("categories", []):
        if not isinstance(entry, dict) or set(entry) != {"surface", "category"}:
            raise MalformedKb(f"bad categories entry {entry!r}")
        surface = _check_word(entry["surface"], "surface")
        if entry["category"] not in CATEGORIES:
            raise MalformedKb(f"unknown category {entry['category']!r} for {surface!r}")
        if surface in categories:
            raise InconsistentKb(f"duplicate category record for {surface!r}")
        categories[surface] = entry["category"]

    classes = {}
    surface_to_class = {}
    for entry in data.get("classes", []):
        if not isinstance(entry, dict) or set(entry) != {"id", "canonical", "members", "quasi"}:
            raise MalformedKb(f"bad classes entry {entry!r}")
        cid = entry["id"]
        if not isinstance(cid, str) or not cid:
            raise MalformedKb(f"bad class id {cid!r}")
        if cid in classes:
            raise InconsistentKb(f"duplicate class id {cid!r}")
        members = frozenset(_check_word(m, "member") for m in entry["members"])
        if not members:
            raise InconsistentKb(f"class {cid!r} has no members")
        canonical = _check_word(entry["canonical"], "canonical")
        if canonical not in members:
            raise InconsistentKb(f"class {cid!r}: canonical {canonical!r} not among members")
        quasi = frozenset(entry["quasi"])
        if cid in quasi:
            raise InconsistentKb(f"class {cid!r} lists itself as quasi-synonym")
        for m in members:
            if m in surface_to_class:
                raise InconsistentKb(f"surface {m!r} appears in classes {surface_to_class[m]!r} and {cid!r}")
            surface_to_class[m] = cid
        classes[cid] = SynonymClass(cid, members, canonical, quasi)

    # every class member needs a category record
    for cls in classes.values():
        for m in sorted(cls.members):
            if m not in categories:
                raise InconsistentKb(f"class {cls.class_id!r} lists {m!r} but no record for {m!r} exists")

    # categorized surfaces outside any class become singleton classes
    for surface in sorted(categories):
        if surface not in surface_to_class:
            if surface in classes:
                raise InconsistentKb(f"implicit singleton class for {surface!r} collides with class id")
            classes[surface] = SynonymClass(surface, frozenset({surface}), surface, frozenset())
            surface_to_class[surface] = surface

    for cls in classes.values():
        for q in cls.quasi_synonym_of:
            if q not in classes:
                raise InconsistentKb(f"class {cls.class_id!r} quasi-links unknown class {q!r}")

    records = {}
    for surface, cid in surface_to_class.items():
        records[surface] = TermRecord(surface, classes[cid].canonical, categories[surface], cid)

    stop_words = frozenset(_check_word(w, "stop word") for w in data.get("stop_words", []))
    canonical_classes = {}
    for cls in classes.values():
        if cls.canonical in canonical_classes:
            raise InconsistentKb(f"canonical {cls.canonical!r} shared by two classes")
        canonical_classes[cls.canonical] = cls.class_id
    bad_stops = stop_words & set(canonical_classes)
    if bad_stops:
        raise InconsistentKb(f"canonical terms declared as stop words: {sorted(bad_stops)}")

    abbreviations = {}
    for key, value in data.get("abbreviations", {}).items():
        if not isinstance(key, str) or not key or not isinstance(value, str) or not value:
            raise MalformedKb(f"bad abbreviation entry {key!r}: {value!r}")
        abbreviations[key.lower()] = value.lower()

    return KnowledgeBase(records, classes, stop_words, abbreviations, canonical_classes)


def save_kb(kb: KnowledgeBase, path) -> None:
    """Write a KB back out in canonical key order; load_kb(save_kb(x)) == x."""
    data = {
        "classes": [
            {
                "id": cls.class_id,
                "canonical": cls.canonical,
                "members": sorted(cls.members),
                "quasi": sorted(cls.quasi_synonym_of),
            }
            for cls in sorted(kb.classes.values(), key=lambda c: c.class_id)
        ],
        "categories": [
            {"surface": rec.surface, "category": rec.category}
            for rec in sorted(kb.records.values(), key=lambda r: r.surface)
        ],
        "stop_words": sorted(kb.stop_words),
        "abbreviations": {k: kb.abbreviations[k] for k in sorted(kb.abbreviations)},
    }
    Path(path).write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def normalize_term(kb: KnowledgeBase, surface: str) -> Optional[str]:
    """Canonical form of a known surface, None when the KB has no entry."""
    rec = kb.records.get(surface)
    return rec.canonical if rec is not None else None


def quasi_synonyms(kb: KnowledgeBase, canonical: str) -> set:
    """Canonicals one quasi-synonym hop away, counting links in either direction."""
    cid = kb.canonical_classes.get(canonical)
    if cid is None:
        raise UnknownTerm(f"{canonical!r} is not the canonical of any class")
    out = set()
    for other in kb.classes.values():
        if other.class_id == cid:
            continue
        if other.class_id in kb.classes[cid].quasi_synonym_of or cid in other.quasi_synonym_of:
            out.add(other.canonical)
    out.discard(canonical)
    return out
