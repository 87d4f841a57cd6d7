"""pictopipe: text-to-pictogram communication engine.

Corrects grammatically noisy input, maps it onto a pictogram lexicon with
greedy longest-match scanning, resolves out-of-vocabulary words through
synonym and embedding similarity, and scores conversions with a
deletion-case accuracy metric. Ships as a library, CLI, and HTTP service.
"""
from __future__ import annotations

from .gec import (
    EXTERNAL,
    RULES,
    GecEdit,
    GecResult,
    GecRuleSet,
    GecServiceError,
    apply_edits,
    correct,
    correct_external,
    correct_rules,
    load_ruleset,
)
from .lexicon import (
    Lexicon,
    LexiconEntry,
    LexiconError,
    build_lexicon,
    load_lexicon,
    lookup,
    normalize_phrase,
)
from .metrics import ScoredPair, bleu, gleu, load_scored_pairs, scored_pair, spearman
from .nlu import (
    DEFAULT_TAU,
    EmbeddingFormatError,
    EmbeddingTable,
    SessionContext,
    SynonymGraph,
    build_synonym_graph,
    cosine_similarity,
    dump_embeddings,
    find_substitute,
    load_embeddings,
    load_synonyms,
    resolve_pronouns,
    resolve_unknowns,
)
from .pipeline import (
    ConfigError,
    EmptyInputError,
    Engine,
    PipelineConfig,
    TranslationResult,
    load_config,
)
from .textproc import (
    NE_CLASSES,
    POS_TAGS,
    TagResources,
    Token,
    detect_entities,
    load_tag_resources,
    mark_stopwords,
    pos_tag,
    tag_all,
    tokenize,
)
from .tp import (
    DROPPED,
    FUNCTION_WORD,
    MATCHED,
    NO_MATCH_POLICY,
    SUBSTITUTED,
    UNKNOWN,
    PictogramSequence,
    Segment,
    UnknownEntryError,
    lemma_candidates,
    map_text,
    render,
)
from .tpa import (
    CASES,
    CaseMatrix,
    CorpusFormatError,
    TpaConfig,
    TpaReport,
    TpaSample,
    load_tpa_corpus,
    run_case_matrix,
    tpa_score,
)

__version__ = "0.1.0"
