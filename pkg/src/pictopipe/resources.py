"""Access to the bundled demo dataset: lexicon, tagger resources, repair
rules, embeddings, synonyms, and pictogram images."""
from __future__ import annotations

from functools import lru_cache
from importlib import resources as _ilr
from pathlib import Path

from .gec import GecRuleSet, load_ruleset
from .lexicon import Lexicon, load_lexicon
from .nlu import EmbeddingTable, SynonymGraph, load_embeddings, load_synonyms
from .textproc import TagResources, load_tag_resources


def data_dir() -> Path:
    return Path(str(_ilr.files("pictopipe").joinpath("data")))


def data_path(*parts: str) -> Path:
    return data_dir().joinpath(*parts)


@lru_cache(maxsize=1)
def bundled_lexicon() -> Lexicon:
    with open(data_path("lexicon_demo.tsv"), encoding="utf-8") as fh:
        return load_lexicon(fh, format="tsv")


@lru_cache(maxsize=1)
def bundled_tag_resources() -> TagResources:
    with open(data_path("tagger", "tag_dictionary.tsv"), encoding="utf-8") as tags, open(
        data_path("tagger", "suffix_rules.tsv"), encoding="utf-8"
    ) as suffixes, open(
        data_path("tagger", "stopwords.txt"), encoding="utf-8"
    ) as stops, open(
        data_path("tagger", "gazetteer.tsv"), encoding="utf-8"
    ) as gaz:
        return load_tag_resources(tags, suffixes, stops, gaz)


@lru_cache(maxsize=1)
def bundled_ruleset() -> GecRuleSet:
    with open(data_path("gec", "spelling_words.txt"), encoding="utf-8") as spelling, open(
        data_path("gec", "irregular_past.tsv"), encoding="utf-8"
    ) as irregular, open(
        data_path("gec", "infinitive_verbs.txt"), encoding="utf-8"
    ) as infinitives, open(
        data_path("gec", "bare_nouns.txt"), encoding="utf-8"
    ) as bare, open(
        data_path("gec", "base_verbs.txt"), encoding="utf-8"
    ) as verbs:
        return load_ruleset(spelling, irregular, infinitives, bare, verbs)


@lru_cache(maxsize=1)
def bundled_embeddings() -> EmbeddingTable:
    with open(data_path("nlu", "embeddings_demo.txt"), encoding="utf-8") as fh:
        return load_embeddings(fh)


@lru_cache(maxsize=1)
def bundled_synonyms() -> SynonymGraph:
    with open(data_path("nlu", "synonyms_demo.tsv"), encoding="utf-8") as fh:
        return load_synonyms(fh)


def asset_root() -> Path:
    """Directory that pictogram image_refs are resolved against."""
    return data_dir()

