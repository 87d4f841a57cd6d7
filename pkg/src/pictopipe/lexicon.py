"""Pictogram lexicon: loading, indexing, and longest-match phrase lookup."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Iterable, Optional, Sequence

TERMINAL_PUNCT = ".,!?"

JSONL = "jsonl"
TSV = "tsv"


class LexiconError(ValueError):
    """Malformed or inconsistent lexicon data."""


@dataclass(frozen=True)
class LexiconEntry:
    id: str
    phrase: tuple[str, ...]
    image_ref: str
    priority: int = 0

    def __post_init__(self):
        if not self.phrase or any(not tok for tok in self.phrase):
            raise LexiconError(f"entry {self.id!r}: phrase must be non-empty tokens")
        if any(tok != tok.strip().lower() for tok in self.phrase):
            raise LexiconError(f"entry {self.id!r}: phrase tokens must be normalized")
        if not self.image_ref:
            raise LexiconError(f"entry {self.id!r}: image_ref must be non-empty")


@dataclass
class Lexicon:
    """Immutable after construction; share freely across threads."""

    entries: list[LexiconEntry]
    index: dict[str, list[LexiconEntry]]
    by_id: dict[str, LexiconEntry]
    max_ngram: int

    def __len__(self) -> int:
        return len(self.entries)

    def unigram_vocab(self) -> set[str]:
        """Single words that have their own entry."""
        return {e.phrase[0] for e in self.entries if len(e.phrase) == 1}


def normalize_phrase(text: str) -> tuple[str, ...]:
    """Lowercase, collapse whitespace, and strip terminal .,!? from a phrase.

    Intra-phrase hyphens and apostrophes are kept as-is.
    """
    cleaned = " ".join(text.split()).lower()
    while cleaned and cleaned[-1] in TERMINAL_PUNCT:
        cleaned = cleaned[:-1]
    return tuple(cleaned.split())


def auto_id(phrase: Sequence[str], priority: int = 0) -> str:
    base = "_".join(phrase)
    return base if priority == 0 else f"{base}@{priority}"


def build_lexicon(entries: Iterable[LexiconEntry]) -> Lexicon:
    """Assemble the first-token index; buckets are ordered longest phrase
    first, then by descending priority, then by id for determinism."""
    ents = list(entries)
    if not ents:
        raise LexiconError("lexicon is empty")
    seen_keys: set[tuple[tuple[str, ...], int]] = set()
    by_id: dict[str, LexiconEntry] = {}
    for e in ents:
        key = (e.phrase, e.priority)
        if key in seen_keys:
            raise LexiconError(
                f"duplicate phrase {' '.join(e.phrase)!r} at priority {e.priority}"
            )
        seen_keys.add(key)
        if e.id in by_id:
            raise LexiconError(f"duplicate entry id {e.id!r}")
        by_id[e.id] = e
    index: dict[str, list[LexiconEntry]] = {}
    for e in ents:
        index.setdefault(e.phrase[0], []).append(e)
    for bucket in index.values():
        bucket.sort(key=lambda e: (-len(e.phrase), -e.priority, e.id))
    return Lexicon(
        entries=ents,
        index=index,
        by_id=by_id,
        max_ngram=max(len(e.phrase) for e in ents),
    )


def _record_error(row: int, message: str) -> LexiconError:
    return LexiconError(f"row {row}: {message}")


def _parse_jsonl_row(row: int, line: str) -> tuple[tuple[str, ...], str, Optional[str], int]:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise _record_error(row, f"invalid JSON ({exc.msg})") from exc
    if not isinstance(obj, dict):
        raise _record_error(row, "record must be a JSON object")
    phrase_raw = obj.get("phrase")
    image_ref = obj.get("image_ref")
    if not isinstance(phrase_raw, str) or not isinstance(image_ref, str):
        raise _record_error(row, "record needs string 'phrase' and 'image_ref'")
    entry_id = obj.get("id")
    if entry_id is not None and not isinstance(entry_id, str):
        raise _record_error(row, "'id' must be a string")
    priority = obj.get("priority", 0)
    if not isinstance(priority, int) or isinstance(priority, bool):
        raise _record_error(row, "'priority' must be an integer")
    return normalize_phrase(phrase_raw), image_ref, entry_id, priority


def _parse_tsv_row(row: int, line: str) -> tuple[tuple[str, ...], str, Optional[str], int]:
    cols = line.split("\t")
    if not 2 <= len(cols) <= 4:
        raise _record_error(row, f"expected 2-4 tab-separated columns, got {len(cols)}")
    phrase_raw, image_ref = cols[0], cols[1].strip()
    entry_id = cols[2].strip() if len(cols) >= 3 and cols[2].strip() else None
    priority = 0
    if len(cols) == 4 and cols[3].strip():
        try:
            priority = int(cols[3])
        except ValueError as exc:
            raise _record_error(row, f"priority is not an integer: {cols[3]!r}") from exc
    return normalize_phrase(phrase_raw), image_ref, entry_id, priority


def load_lexicon(source: IO[str], format: str = JSONL) -> Lexicon:
    """Read lexicon records from a UTF-8 stream and build the index.

    Formats: ``jsonl`` objects {"phrase", "image_ref", "id"?, "priority"?},
    or ``tsv`` columns phrase / image_ref / [id] / [priority] (literal tabs,
    no quoting). Missing ids are derived from the normalized phrase, so
    identical inputs always produce identical lexicons.
    """
    if format not in (JSONL, TSV):
        raise LexiconError(f"unknown lexicon format {format!r}")
    parse = _parse_jsonl_row if format == JSONL else _parse_tsv_row
    entries: list[LexiconEntry] = []
    seen: dict[tuple[tuple[str, ...], int], int] = {}
    for row, raw in enumerate(source, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip():
            continue
        phrase, image_ref, entry_id, priority = parse(row, line)
        if not phrase:
            raise _record_error(row, "phrase is empty after normalization")
        if not image_ref:
            raise _record_error(row, "image_ref is empty")
        key = (phrase, priority)
        if key in seen:
            raise _record_error(
                row,
                f"duplicate phrase {' '.join(phrase)!r} at priority {priority}"
                f" (first seen at row {seen[key]})",
            )
        seen[key] = row
        if entry_id is None:
            entry_id = auto_id(phrase, priority)
        try:
            entries.append(LexiconEntry(entry_id, phrase, image_ref, priority))
        except LexiconError as exc:
            raise _record_error(row, str(exc)) from exc
    return build_lexicon(entries)


def lookup(
    lex: Lexicon, tokens: Sequence[str], start: int
) -> Optional[tuple[LexiconEntry, int]]:
    """Longest exact phrase match beginning at tokens[start].

    Returns (entry, match_length) for the largest length with a matching
    entry (ties at equal length broken by priority, then id), or None when
    nothing matches even as a single word.
    """
    if not 0 <= start < len(tokens):
        raise IndexError(f"start {start} out of range for {len(tokens)} tokens")
    bucket = lex.index.get(tokens[start])
    if not bucket:
        return None
    remaining = len(tokens) - start
    for entry in bucket:  # ordered longest-first, then priority, then id
        n = len(entry.phrase)
        if n > remaining:
            continue
        if tuple(tokens[start : start + n]) == entry.phrase:
            return entry, n
    return None
