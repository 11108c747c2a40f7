"""Term extraction levels, heuristic stemming, and vocabulary thresholding."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import EmptyVocabulary, UnimplementedLevel
from .kb import KnowledgeBase, normalize_term, quasi_synonyms


class ExtractionLevel(Enum):
    GRAPHEME = "grapheme"
    LEXICAL = "lexical"
    SYNTACTIC = "syntactic"
    SEMANTIC = "semantic"
    PRAGMATIC = "pragmatic"  # accepted in config, never implemented


# ordered suffix rules; guards keep very short stems intact
_SUFFIX_RULES = (
    ("sses", "ss", 0),
    ("ies", "y", 0),
    ("ations", "ate", 0),
    ("ing", "", 3),
    ("ed", "", 3),
    ("s", "", 2),
)


def _stem_once(word: str) -> str:
    for suffix, replacement, min_stem in _SUFFIX_RULES:
        if not word.endswith(suffix):
            continue
        if suffix == "s" and word.endswith("ss"):
            continue
        stem_len = len(word) - len(suffix)
        if stem_len < min_stem:
            continue
        return word[:stem_len] + replacement
    return word


def stem(word: str) -> str:
    """Strip known suffixes until a fixed point; idempotent by construction."""
    while True:
        reduced = _stem_once(word)
        if reduced == word:
            return word
        word = reduced


def extract_terms(kb: KnowledgeBase, tokens, level: ExtractionLevel) -> list:
    """Produce index term candidates for one extraction level.

    Grapheme emits character 3-grams; the other levels start from a lexical
    pass that skips link-like tokens (containing '/') and acronyms kept in
    their original all-caps spelling.
    """
    if level is ExtractionLevel.PRAGMATIC:
        raise UnimplementedLevel("pragmatic extraction requires live user context")

    if level is ExtractionLevel.GRAPHEME:
        grams = []
        for tok in tokens:
            text = tok.text.lower()
            if len(text) < 3:
                grams.append(text)
            else:
                grams.extend(text[i : i + 3] for i in range(len(text) - 2))
        return grams

    lexical = []
    for tok in tokens:
        if "/" in tok.text:
            continue
        if tok.text.isupper():
            continue
        lexical.append(tok.text.lower())

    if level is ExtractionLevel.LEXICAL:
        return lexical

    if level is ExtractionLevel.SYNTACTIC:
        out = []
        for term in lexical:
            rec = kb.records.get(term)
            out.append(f"{term}/{rec.category}" if rec is not None else term)
        return out

    # semantic: canonicalize through synonym classes, append hyperonyms
    out = []
    for term in lexical:
        canonical = normalize_term(kb, term) or term
        out.append(canonical)
        if canonical in kb.canonical_classes:
            for linked in sorted(quasi_synonyms(kb, canonical)):
                rec = kb.records.get(linked)
                if rec is not None and rec.category == "hyperonym":
                    out.append(linked)
    return out


@dataclass(frozen=True)
class MinCount:
    count: int


@dataclass(frozen=True)
class TopN:
    n: int


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple  # descending score, ties lexicographic
    scores: dict

    def __len__(self):
        return len(self.terms)


def build_vocabulary(indexed_docs, threshold_mode) -> Vocabulary:
    """Score terms by total count over Index-routed documents and threshold."""
    from .agents import Routing, TermStatus

    counts = Counter()
    for doc in indexed_docs:
        if doc.routing is not Routing.INDEX:
            continue
        for term, (count, status) in doc.terms.items():
            if status is TermStatus.REJECTED:
                continue
            counts[term] += count

    ranked = sorted(counts, key=lambda t: (-counts[t], t))
    if isinstance(threshold_mode, MinCount):
        kept = [t for t in ranked if counts[t] >= threshold_mode.count]
    elif isinstance(threshold_mode, TopN):
        kept = ranked[: threshold_mode.n]
    else:
        raise TypeError(f"unsupported threshold mode {threshold_mode!r}")
    if not kept:
        raise EmptyVocabulary("no term survives the threshold")
    return Vocabulary(tuple(kept), {t: float(counts[t]) for t in kept})


def save_vocabulary(vocab: Vocabulary, path) -> None:
    lines = [f"{t}\t{vocab.scores[t]:g}" for t in vocab.terms]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
