"""Greedy longest-match mapping from tagged tokens to pictogram segments.

The scanner walks left to right taking the longest lexicon phrase at each
position; a single-word lemma retry (strip -s/-ing/-ed, undo doubled final
consonants, restore a dropped -e) runs before a token is declared unknown,
so inflected words reach their base-form pictograms.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .lexicon import Lexicon, lookup
from .textproc import Token

MATCHED = "matched"
SUBSTITUTED = "substituted"
DROPPED = "dropped"
UNKNOWN = "unknown"

FUNCTION_WORD = "function_word"
NO_MATCH_POLICY = "no_match_policy"

_KINDS = frozenset({MATCHED, SUBSTITUTED, DROPPED, UNKNOWN})


class UnknownEntryError(LookupError):
    """A segment references an entry id the lexicon does not contain."""


@dataclass(frozen=True)
class Segment:
    kind: str
    start: int
    end: int  # token span [start, end)
    entry_id: Optional[str] = None
    original: Optional[str] = None
    substitute: Optional[str] = None
    similarity: Optional[float] = None
    reason: Optional[str] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown segment kind {self.kind!r}")
        if self.kind in (MATCHED, SUBSTITUTED) and not self.entry_id:
            raise ValueError(f"{self.kind} segment needs an entry_id")
        if self.similarity is not None and not -1.0 <= self.similarity <= 1.0:
            raise ValueError(f"similarity {self.similarity} outside [-1, 1]")

    @property
    def length(self) -> int:
        return self.end - self.start


@dataclass
class PictogramSequence:
    segments: list[Segment]
    source: list[Token]


def lemma_candidates(word: str) -> list[str]:
    """Base-form guesses for an inflected word, in lookup order."""
    out: list[str] = []

    def add(cand: str) -> None:
        if cand and cand != word and cand not in out:
            out.append(cand)

    if word.endswith("ing") and len(word) >= 5:
        base = word[:-3]
        add(base)
        add(base + "e")
        if len(base) >= 2 and base[-1] == base[-2]:
            add(base[:-1])
    if word.endswith("ed") and len(word) >= 4:
        base = word[:-2]
        add(base)
        add(base + "e")
        if len(base) >= 2 and base[-1] == base[-2]:
            add(base[:-1])
    if word.endswith("ies") and len(word) >= 5:
        add(word[:-3] + "y")
    if word.endswith("es") and len(word) >= 4:
        add(word[:-2])
    if word.endswith("s") and not word.endswith("ss") and len(word) >= 3:
        add(word[:-1])
    return out


def map_text(tokens: Sequence[Token], lex: Lexicon) -> PictogramSequence:
    """Left-to-right maximal munch over normalized tokens.

    Matches emit Matched segments and consume their whole span; pure
    punctuation is dropped as a function word; everything else becomes a
    single-token Unknown segment for the semantic-fallback stage.
    """
    words = [t.normalized for t in tokens]
    segments: list[Segment] = []
    i = 0
    n = len(tokens)
    while i < n:
        if not words[i]:
            segments.append(Segment(DROPPED, i, i + 1, reason=FUNCTION_WORD))
            i += 1
            continue
        hit = lookup(lex, words, i)
        if hit is not None:
            entry, length = hit
            segments.append(Segment(MATCHED, i, i + length, entry_id=entry.id))
            i += length
            continue
        lemma_hit = None
        for cand in lemma_candidates(words[i]):
            found = lookup(lex, [cand], 0)
            if found is not None:
                lemma_hit = found[0]
                break
        if lemma_hit is not None:
            segments.append(Segment(MATCHED, i, i + 1, entry_id=lemma_hit.id))
        else:
            segments.append(Segment(UNKNOWN, i, i + 1))
        i += 1
    return PictogramSequence(segments, list(tokens))


def render(seq: PictogramSequence, lex: Lexicon) -> list[str]:
    """Image refs of Matched and Substituted segments, in sentence order."""
    refs: list[str] = []
    for seg in seq.segments:
        if seg.kind not in (MATCHED, SUBSTITUTED):
            continue
        entry = lex.by_id.get(seg.entry_id or "")
        if entry is None:
            raise UnknownEntryError(f"segment references unknown entry {seg.entry_id!r}")
        refs.append(entry.image_ref)
    return refs
