"""Semantic fallback for out-of-vocabulary words and recency-based pronoun
resolution.

Unknown words first try the synonym graph, then nearest-neighbor search over
the embedding table; residual function words are suppressed rather than
rendered.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, replace
from typing import IO, Iterable, Optional, Sequence

import numpy as np

from .lexicon import Lexicon, lookup
from .textproc import Token
from .tp import (
    DROPPED,
    FUNCTION_WORD,
    SUBSTITUTED,
    UNKNOWN,
    PictogramSequence,
    Segment,
)

FUNCTION_POS = frozenset({"DET", "ADP", "CONJ"})
FIRST_SECOND_PERSON = frozenset(
    {"i", "you", "we", "me", "my", "us", "our", "your", "mine", "yours", "ours"}
)
THIRD_PERSON = frozenset({"he", "she", "it", "they", "him", "her", "them"})
_PERSON_ONLY = frozenset({"he", "she", "him", "her"})

DEFAULT_TAU = 0.4


class EmbeddingFormatError(ValueError):
    """Malformed word-vector file."""


@dataclass
class EmbeddingTable:
    dim: int
    vectors: dict[str, np.ndarray]

    def __contains__(self, word: str) -> bool:
        return word in self.vectors

    def get(self, word: str) -> Optional[np.ndarray]:
        return self.vectors.get(word)


def load_embeddings(source: IO[str]) -> EmbeddingTable:
    """Read word2vec text format: header "V D", then V lines "word c1 .. cD"."""
    header = source.readline()
    parts = header.split()
    if len(parts) != 2:
        raise EmbeddingFormatError("line 1: header must be 'V D'")
    try:
        count, dim = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise EmbeddingFormatError("line 1: header must hold two integers") from exc
    if count <= 0 or dim <= 0:
        raise EmbeddingFormatError("line 1: V and D must be positive")
    vectors: dict[str, np.ndarray] = {}
    lineno = 1
    for raw in source:
        lineno += 1
        line = raw.strip()
        if not line:
            continue
        cols = line.split()
        if len(cols) != dim + 1:
            raise EmbeddingFormatError(
                f"line {lineno}: expected word + {dim} components, got {len(cols) - 1}"
            )
        word = cols[0]
        if word in vectors:
            raise EmbeddingFormatError(f"line {lineno}: duplicate word {word!r}")
        try:
            vec = np.array([float(c) for c in cols[1:]], dtype=np.float64)
        except ValueError as exc:
            raise EmbeddingFormatError(f"line {lineno}: non-numeric component") from exc
        if not np.all(np.isfinite(vec)):
            raise EmbeddingFormatError(f"line {lineno}: non-finite component")
        vectors[word] = vec
    if len(vectors) != count:
        raise EmbeddingFormatError(
            f"header declared {count} vectors but file holds {len(vectors)}"
        )
    return EmbeddingTable(dim, vectors)


def dump_embeddings(table: EmbeddingTable, dest: IO[str]) -> None:
    dest.write(f"{len(table.vectors)} {table.dim}\n")
    for word, vec in table.vectors.items():
        dest.write(word + " " + " ".join(repr(float(c)) for c in vec) + "\n")


def cosine_similarity(u: Sequence[float], v: Sequence[float]) -> float:
    """dot(u,v) / (|u||v|), clamped to [-1, 1]; zero vectors score 0."""
    a = np.asarray(u, dtype=np.float64)
    b = np.asarray(v, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = math.sqrt(float(np.dot(a, a)))
    nb = math.sqrt(float(np.dot(b, b)))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return max(-1.0, min(1.0, float(np.dot(a, b)) / (na * nb)))


@dataclass
class SynonymGraph:
    adjacency: dict[str, frozenset[str]]

    def neighbors(self, word: str) -> frozenset[str]:
        return self.adjacency.get(word, frozenset())


def build_synonym_graph(pairs: Iterable[tuple[str, str]]) -> SynonymGraph:
    """Symmetric closure of word pairs; self-pairs are rejected."""
    adj: dict[str, set[str]] = {}
    for a, b in pairs:
        a, b = a.strip().lower(), b.strip().lower()
        if not a or not b:
            raise ValueError("synonym pair with empty word")
        if a == b:
            raise ValueError(f"self-loop synonym {a!r}")
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    return SynonymGraph({w: frozenset(s) for w, s in adj.items()})


def load_synonyms(source: IO[str]) -> SynonymGraph:
    pairs = []
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise ValueError(f"synonyms line {lineno}: expected 2 columns")
        pairs.append((cols[0], cols[1]))
    return build_synonym_graph(pairs)


class SessionContext:
    """Bounded FIFO of recent (noun, entity class) pairs from one session.

    Single-writer: the service serializes utterances per session, so no
    locking happens here.
    """

    def __init__(self, capacity: int = 8):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self._items: deque[tuple[str, Optional[str]]] = deque(maxlen=capacity)

    def push(self, noun: str, ne_class: Optional[str] = None) -> None:
        self._items.append((noun, ne_class))

    def recent(self) -> list[tuple[str, Optional[str]]]:
        return list(self._items)

    def __len__(self) -> int:
        return len(self._items)


def find_substitute(
    word: str,
    lexicon_vocab: set[str],
    emb: Optional[EmbeddingTable] = None,
    syn: Optional[SynonymGraph] = None,
    tau: float = DEFAULT_TAU,
) -> Optional[tuple[str, float]]:
    """Best in-vocabulary stand-in for an out-of-vocabulary word.

    Synonyms win first (scored by embedding similarity, 1.0 when a vector is
    missing); otherwise the vocabulary word with maximal cosine similarity,
    subject to the tau threshold. Ties break lexicographically.
    """
    if syn is not None:
        candidates = sorted(syn.neighbors(word) & lexicon_vocab)
        if candidates:
            best, best_score = None, -math.inf
            for cand in candidates:
                if emb is not None and word in emb and cand in emb:
                    score = cosine_similarity(emb.get(word), emb.get(cand))
                else:
                    score = 1.0
                if score > best_score:
                    best, best_score = cand, score
            return best, best_score
    if emb is None or word not in emb:
        return None
    wvec = emb.get(word)
    best, best_score = None, -math.inf
    for cand in sorted(lexicon_vocab):
        cvec = emb.get(cand)
        if cvec is None:
            continue
        score = cosine_similarity(wvec, cvec)
        if score > best_score:
            best, best_score = cand, score
    if best is not None and best_score >= tau:
        return best, best_score
    return None


def resolve_pronouns(
    tokens: Sequence[Token], ctx: SessionContext, lex: Lexicon
) -> list[Token]:
    """Swap third-person pronouns for the most recent context noun that the
    lexicon knows. he/she/him/her only accept PERSON-class nouns; first and
    second person are never touched (they have their own pictograms)."""
    vocab = lex.unigram_vocab()
    out: list[Token] = []
    for tok in tokens:
        word = tok.normalized
        if word in THIRD_PERSON:
            need_person = word in _PERSON_ONLY
            found: Optional[tuple[str, Optional[str]]] = None
            for noun, ne_class in reversed(ctx.recent()):
                if noun not in vocab:
                    continue
                if need_person and ne_class != "PERSON":
                    continue
                found = (noun, ne_class)
                break
            if found is not None:
                noun, ne_class = found
                out.append(
                    replace(
                        tok,
                        surface=noun,
                        normalized=noun,
                        pos="PROPN" if ne_class else "NOUN",
                        ne=ne_class,
                    )
                )
                continue
        out.append(tok)
    return out


def resolve_unknowns(
    seq: PictogramSequence,
    lex: Lexicon,
    emb: Optional[EmbeddingTable] = None,
    syn: Optional[SynonymGraph] = None,
    tau: float = DEFAULT_TAU,
) -> PictogramSequence:
    """Rewrite Unknown segments: substitute semantically when possible, drop
    function words and stopwords, keep the rest Unknown. Matched segments and
    the span partition are left untouched."""
    vocab = lex.unigram_vocab()
    segments: list[Segment] = []
    for seg in seq.segments:
        if seg.kind != UNKNOWN:
            segments.append(seg)
            continue
        token = seq.source[seg.start]
        word = token.normalized
        sub = find_substitute(word, vocab, emb, syn, tau) if word else None
        if sub is not None:
            substitute, similarity = sub
            entry = lookup(lex, [substitute], 0)
            assert entry is not None  # substitute came from lexicon vocab
            segments.append(
                Segment(
                    SUBSTITUTED,
                    seg.start,
                    seg.end,
                    entry_id=entry[0].id,
                    original=word,
                    substitute=substitute,
                    similarity=similarity,
                )
            )
        elif (token.pos in FUNCTION_POS) or token.is_stopword:
            segments.append(Segment(DROPPED, seg.start, seg.end, reason=FUNCTION_WORD))
        else:
            segments.append(seg)
    return PictogramSequence(segments, seq.source)
