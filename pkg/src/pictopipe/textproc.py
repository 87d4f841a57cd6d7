"""Tokenization, rule-based POS tagging, stopword flags, and gazetteer NER.

Everything here is deterministic and data-driven: tag dictionary, suffix
rules, stopword list, and entity gazetteer are plain text resources.
"""
from __future__ import annotations

import re
import string
from dataclasses import dataclass, replace
from typing import IO, Optional, Sequence

POS_TAGS = frozenset(
    {"DET", "ADP", "CONJ", "PRON", "NOUN", "PROPN", "VERB", "ADJ", "ADV", "NUM", "INTJ", "OTHER"}
)
NE_CLASSES = frozenset({"PERSON", "ORG", "LOC", "MISC"})

_CHUNK_RE = re.compile(r"\S+")
_PUNCT = frozenset(string.punctuation)
_NUM_RE = re.compile(r"^\d+(?:[.,]\d+)*$")


class ResourceFormatError(ValueError):
    """Malformed tagger resource file."""


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    start: int
    end: int
    pos: Optional[str] = None
    is_stopword: bool = False
    ne: Optional[str] = None  # entity class, None means no entity


@dataclass(frozen=True)
class TagResources:
    tag_dictionary: dict[str, str]
    suffix_rules: tuple[tuple[str, str], ...]
    stopword_set: frozenset[str]
    gazetteer: dict[tuple[str, ...], str]

    def __post_init__(self):
        if not self.suffix_rules:
            raise ResourceFormatError("suffix rule list is empty")


def tokenize(sentence: str) -> list[Token]:
    """Whitespace tokenization with edge punctuation split off.

    Leading/trailing punctuation runs become their own tokens with an empty
    normalized form; contractions and hyphenated words stay whole. Spans
    index into the source, so the sentence can be rebuilt from them.
    """
    tokens: list[Token] = []

    def emit(start: int, end: int, text: str) -> None:
        is_punct = all(ch in _PUNCT for ch in text)
        tokens.append(Token(text, "" if is_punct else text.lower(), start, end))

    for m in _CHUNK_RE.finditer(sentence):
        chunk, start = m.group(), m.start()
        left = 0
        while left < len(chunk) and chunk[left] in _PUNCT:
            left += 1
        if left == len(chunk):  # pure punctuation chunk
            emit(start, m.end(), chunk)
            continue
        right = len(chunk)
        while right > left and chunk[right - 1] in _PUNCT:
            right -= 1
        if left:
            emit(start, start + left, chunk[:left])
        emit(start + left, start + right, chunk[left:right])
        if right < len(chunk):
            emit(start + right, m.end(), chunk[right:])
    return tokens


def pos_tag(tokens: Sequence[Token], res: TagResources) -> list[Token]:
    """Assign coarse POS tags.

    Dictionary words win; unknown capitalized words away from the sentence
    start become PROPN; the rest fall through suffix rules and default to
    NOUN. Pure punctuation is OTHER.
    """
    first_word = next((i for i, t in enumerate(tokens) if t.normalized), None)
    out: list[Token] = []
    for i, tok in enumerate(tokens):
        if not tok.normalized:
            out.append(replace(tok, pos="OTHER"))
            continue
        word = tok.normalized
        if word in res.tag_dictionary:
            pos = res.tag_dictionary[word]
        elif _NUM_RE.match(word):
            pos = "NUM"
        elif tok.surface[:1].isupper() and i != first_word:
            pos = "PROPN"
        else:
            pos = next(
                (tag for suf, tag in res.suffix_rules
                 if word.endswith(suf) and len(word) >= len(suf) + 2),
                "NOUN",
            )
        out.append(replace(tok, pos=pos))
    return out


def mark_stopwords(tokens: Sequence[Token], res: TagResources) -> list[Token]:
    return [
        replace(t, is_stopword=bool(t.normalized) and t.normalized in res.stopword_set)
        for t in tokens
    ]


def detect_entities(tokens: Sequence[Token], res: TagResources) -> list[Token]:
    """Gazetteer annotation: longest phrases claim their spans first
    (leftmost wins within a length), then leftover PROPN runs become MISC.
    """
    n = len(tokens)
    labels: list[Optional[str]] = [None] * n
    covered = [False] * n
    if res.gazetteer:
        max_len = max(len(p) for p in res.gazetteer)
        for length in range(min(max_len, n), 0, -1):
            for s in range(0, n - length + 1):
                if any(covered[s : s + length]):
                    continue
                phrase = tuple(t.normalized for t in tokens[s : s + length])
                cls = res.gazetteer.get(phrase)
                if cls is None:
                    continue
                for k in range(s, s + length):
                    labels[k] = cls
                    covered[k] = True
    for i, tok in enumerate(tokens):
        if not covered[i] and tok.pos == "PROPN":
            labels[i] = "MISC"
    return [replace(t, ne=labels[i]) for i, t in enumerate(tokens)]


def tag_all(tokens: Sequence[Token], res: TagResources) -> list[Token]:
    """Full pass: POS, stopword flags, then entity labels."""
    return detect_entities(mark_stopwords(pos_tag(tokens, res), res), res)


def _read_tsv(source: IO[str], ncols: int, what: str) -> list[list[str]]:
    rows = []
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != ncols:
            raise ResourceFormatError(
                f"{what} line {lineno}: expected {ncols} columns, got {len(cols)}"
            )
        rows.append([c.strip() for c in cols])
    return rows


def load_tag_resources(
    tag_dictionary: IO[str],
    suffix_rules: IO[str],
    stopwords: IO[str],
    gazetteer: Optional[IO[str]] = None,
) -> TagResources:
    """Load the four tagger resource files (gazetteer optional).

    Tag dictionary and suffix rules are two-column TSV; stopwords are one
    word per line; gazetteer is TSV (phrase, entity class).
    """
    tag_map: dict[str, str] = {}
    for word, tag in _read_tsv(tag_dictionary, 2, "tag dictionary"):
        if tag not in POS_TAGS:
            raise ResourceFormatError(f"unknown POS tag {tag!r} for {word!r}")
        tag_map[word.lower()] = tag
    rules = []
    for suffix, tag in _read_tsv(suffix_rules, 2, "suffix rules"):
        if tag not in POS_TAGS:
            raise ResourceFormatError(f"unknown POS tag {tag!r} for suffix {suffix!r}")
        rules.append((suffix.lower(), tag))
    stop = frozenset(
        line.strip().lower() for line in stopwords if line.strip() and not line.startswith("#")
    )
    gaz: dict[tuple[str, ...], str] = {}
    if gazetteer is not None:
        for phrase, cls in _read_tsv(gazetteer, 2, "gazetteer"):
            cls = cls.upper()
            if cls not in NE_CLASSES:
                raise ResourceFormatError(f"unknown entity class {cls!r} for {phrase!r}")
            gaz[tuple(phrase.lower().split())] = cls
    return TagResources(tag_map, tuple(rules), stop, gaz)
