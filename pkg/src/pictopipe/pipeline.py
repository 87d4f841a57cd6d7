"""End-to-end orchestration: repair the sentence, tag it, resolve pronouns,
map to pictograms, resolve unknowns, and render image refs."""
from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import resources as _res
from .gec import EXTERNAL, RULES, GecEdit, GecResult, GecRuleSet, correct
from .lexicon import JSONL, TSV, Lexicon, load_lexicon
from .nlu import (
    DEFAULT_TAU,
    EmbeddingTable,
    SessionContext,
    SynonymGraph,
    load_embeddings,
    load_synonyms,
    resolve_pronouns,
    resolve_unknowns,
)
from .textproc import TagResources, Token, load_tag_resources, tag_all, tokenize
from .tp import MATCHED, SUBSTITUTED, PictogramSequence, map_text, render
from .tpa import PredictNe, PredictTp


class EmptyInputError(ValueError):
    """The utterance is empty after trimming."""


class ConfigError(ValueError):
    """A configured resource path does not exist or is invalid."""


_CONFIG_KEYS = {
    "lexicon_path",
    "lexicon_format",
    "tag_dictionary_path",
    "suffix_rules_path",
    "stopwords_path",
    "gazetteer_path",
    "embeddings_path",
    "synonyms_path",
    "gec_backend",
    "gec_endpoint",
    "gec_timeout",
    "tau",
    "session_capacity",
    "session_ttl",
    "host",
    "port",
    "asset_root",
    "allow_local_eval",
}


@dataclass
class PipelineConfig:
    """Paths default to the bundled demo dataset when left unset."""

    lexicon_path: Optional[str] = None
    lexicon_format: str = TSV
    tag_dictionary_path: Optional[str] = None
    suffix_rules_path: Optional[str] = None
    stopwords_path: Optional[str] = None
    gazetteer_path: Optional[str] = None
    embeddings_path: Optional[str] = None
    synonyms_path: Optional[str] = None
    gec_backend: str = RULES
    gec_endpoint: Optional[str] = None
    gec_timeout: float = 5.0
    tau: float = DEFAULT_TAU
    session_capacity: int = 8
    session_ttl: float = 1800.0
    host: str = "127.0.0.1"
    port: int = 8075
    asset_root: Optional[str] = None
    allow_local_eval: bool = False

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ConfigError(f"tau must lie in [0, 1], got {self.tau}")
        if self.lexicon_format not in (JSONL, TSV):
            raise ConfigError(f"unknown lexicon format {self.lexicon_format!r}")
        if self.gec_backend not in (RULES, EXTERNAL):
            raise ConfigError(f"unknown gec backend {self.gec_backend!r}")


_BOOL_KEYS = {"allow_local_eval"}
_FLOAT_KEYS = {"gec_timeout", "tau", "session_ttl"}
_INT_KEYS = {"session_capacity", "port"}

ENV_PREFIX = "PICTOPIPE_"


def load_config(path: Optional[str] = None, env: Optional[dict] = None) -> PipelineConfig:
    """Build a config from a key=value file plus PICTOPIPE_* overrides."""
    values: dict[str, object] = {}

    def set_value(key: str, raw: str, where: str) -> None:
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{where}: unknown config key {key!r}")
        raw = raw.strip()
        if key in _BOOL_KEYS:
            values[key] = raw.lower() in ("1", "true", "yes", "on")
        elif key in _FLOAT_KEYS:
            values[key] = float(raw)
        elif key in _INT_KEYS:
            values[key] = int(raw)
        else:
            values[key] = raw or None

    if path:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path} line {lineno}: expected key=value")
                key, value = line.split("=", 1)
                set_value(key.strip(), value, f"{path} line {lineno}")
    env = dict(os.environ) if env is None else env
    for key in sorted(_CONFIG_KEYS):
        env_key = ENV_PREFIX + key.upper()
        if env_key in env:
            set_value(key, env[env_key], env_key)
    try:
        return PipelineConfig(**values)  # type: ignore[arg-type]
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


@dataclass
class TranslationResult:
    input: str
    corrected: str
    edits: list[GecEdit]
    gec_backend: str
    gec_fallback: bool
    sequence: PictogramSequence
    images: list[str]
    timing: dict[str, float] = field(default_factory=dict)

    def segment_summaries(self, lex: Lexicon) -> list[dict]:
        out = []
        for seg in self.sequence.segments:
            entry = lex.by_id.get(seg.entry_id) if seg.entry_id else None
            item: dict = {
                "kind": seg.kind,
                "words": [t.surface for t in self.sequence.source[seg.start : seg.end]],
                "entry_id": seg.entry_id,
                "image_ref": entry.image_ref if entry else None,
            }
            if seg.similarity is not None:
                item["similarity"] = seg.similarity
            out.append(item)
        return out

    def to_dict(self, lex: Lexicon) -> dict:
        return {
            "input": self.input,
            "corrected": self.corrected,
            "edits": [
                {
                    "start": e.start,
                    "end": e.end,
                    "original": e.original,
                    "replacement": e.replacement,
                    "category": e.category,
                }
                for e in self.edits
            ],
            "gec_backend": self.gec_backend,
            "gec_fallback": self.gec_fallback,
            "segments": self.segment_summaries(lex),
            "images": list(self.images),
            "timing": dict(self.timing),
        }


def _open_or_raise(path: Path, what: str):
    if not path.exists():
        raise ConfigError(f"{what} not found: {path}")
    return open(path, encoding="utf-8")


class Engine:
    """Loaded resources plus the process() entry point.

    All resources are immutable after construction; per-session state lives
    in the SessionContext the caller passes in.
    """

    def __init__(self, config: Optional[PipelineConfig] = None):
        cfg = config or PipelineConfig()
        self.config = cfg
        if cfg.lexicon_path:
            with _open_or_raise(Path(cfg.lexicon_path), "lexicon") as fh:
                self.lexicon: Lexicon = load_lexicon(fh, format=cfg.lexicon_format)
        else:
            self.lexicon = _res.bundled_lexicon()
        custom_tagger = [
            cfg.tag_dictionary_path,
            cfg.suffix_rules_path,
            cfg.stopwords_path,
        ]
        if any(custom_tagger):
            if not all(custom_tagger):
                raise ConfigError(
                    "tag_dictionary_path, suffix_rules_path, and stopwords_path "
                    "must be configured together"
                )
            gaz_path = cfg.gazetteer_path
            with _open_or_raise(Path(cfg.tag_dictionary_path), "tag dictionary") as tags, \
                    _open_or_raise(Path(cfg.suffix_rules_path), "suffix rules") as sufs, \
                    _open_or_raise(Path(cfg.stopwords_path), "stopword list") as stops:
                if gaz_path:
                    with _open_or_raise(Path(gaz_path), "gazetteer") as gaz:
                        self.resources: TagResources = load_tag_resources(tags, sufs, stops, gaz)
                else:
                    self.resources = load_tag_resources(tags, sufs, stops)
        else:
            self.resources = _res.bundled_tag_resources()
        self.ruleset: GecRuleSet = _res.bundled_ruleset()
        if cfg.embeddings_path:
            with _open_or_raise(Path(cfg.embeddings_path), "embeddings") as fh:
                self.embeddings: Optional[EmbeddingTable] = load_embeddings(fh)
        else:
            self.embeddings = _res.bundled_embeddings()
        if cfg.synonyms_path:
            with _open_or_raise(Path(cfg.synonyms_path), "synonyms") as fh:
                self.synonyms: Optional[SynonymGraph] = load_synonyms(fh)
        else:
            self.synonyms = _res.bundled_synonyms()
        self.asset_root = Path(cfg.asset_root) if cfg.asset_root else _res.asset_root()

    def new_session(self) -> SessionContext:
        return SessionContext(self.config.session_capacity)

    def process(self, text: str, session: Optional[SessionContext] = None) -> TranslationResult:
        """Run the full utterance pipeline and update the session context."""
        stripped = text.strip() if text else ""
        if not stripped:
            raise EmptyInputError("input text is empty")
        timing: dict[str, float] = {}

        t0 = time.perf_counter()
        gec_result: GecResult = correct(
            stripped,
            self.ruleset,
            backend=self.config.gec_backend,
            endpoint=self.config.gec_endpoint,
            timeout=self.config.gec_timeout,
        )
        timing["gec"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        tokens = tag_all(tokenize(gec_result.corrected), self.resources)
        timing["tag"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        if session is not None:
            tokens = resolve_pronouns(tokens, session, self.lexicon)
        timing["pronouns"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        seq = map_text(tokens, self.lexicon)
        timing["map"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        seq = resolve_unknowns(seq, self.lexicon, self.embeddings, self.synonyms, self.config.tau)
        timing["nlu"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        images = render(seq, self.lexicon)
        timing["render"] = time.perf_counter() - t0

        if session is not None:
            for tok in tokens:
                if tok.pos in ("NOUN", "PROPN") and tok.normalized:
                    session.push(tok.normalized, tok.ne)
        return TranslationResult(
            input=text,
            corrected=gec_result.corrected,
            edits=gec_result.edits,
            gec_backend=gec_result.backend,
            gec_fallback=gec_result.fallback,
            sequence=seq,
            images=images,
            timing=timing,
        )

    def tpa_predictors(self) -> tuple[PredictTp, PredictNe]:
        """Prediction callbacks over this engine's TP+NLU stack, suitable for
        the accuracy scorer. Entity predictions reuse the tagger output."""
        cache: dict[tuple[str, ...], list[Optional[str]]] = {}

        def per_token_entries(tokens: Sequence[Token]) -> list[Optional[str]]:
            key = tuple(t.surface for t in tokens)
            if key not in cache:
                seq = resolve_unknowns(
                    map_text(tokens, self.lexicon),
                    self.lexicon,
                    self.embeddings,
                    self.synonyms,
                    self.config.tau,
                )
                ids: list[Optional[str]] = [None] * len(tokens)
                for seg in seq.segments:
                    if seg.kind in (MATCHED, SUBSTITUTED):
                        for i in range(seg.start, seg.end):
                            ids[i] = seg.entry_id
                cache[key] = ids
            return cache[key]

        def predict_tp(tokens: Sequence[Token], i: int) -> Optional[str]:
            return per_token_entries(tokens)[i]

        def predict_ne(tokens: Sequence[Token], i: int) -> Optional[str]:
            return tokens[i].ne or "NONE"

        return predict_tp, predict_ne
