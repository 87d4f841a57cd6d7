from __future__ import annotations

import io
import math
import random

import numpy as np
import pytest

from pictopipe.lexicon import LexiconEntry, build_lexicon
from pictopipe.nlu import (
    EmbeddingFormatError,
    EmbeddingTable,
    SessionContext,
    build_synonym_graph,
    cosine_similarity,
    dump_embeddings,
    find_substitute,
    load_embeddings,
    load_synonyms,
    resolve_pronouns,
    resolve_unknowns,
)
from pictopipe.textproc import tag_all, tokenize
from pictopipe.tp import DROPPED, MATCHED, SUBSTITUTED, UNKNOWN, map_text


def test_load_embeddings_basic():
    table = load_embeddings(io.StringIO("2 3\na 1 2 3\nb 0.5 -1 2\n"))
    assert table.dim == 3
    assert set(table.vectors) == {"a", "b"}
    assert np.allclose(table.get("a"), [1, 2, 3])


def test_load_embeddings_arity_error_reports_row():
    with pytest.raises(EmbeddingFormatError, match="line 3"):
        load_embeddings(io.StringIO("2 3\na 1 2 3\nb 1 2\n"))


def test_load_embeddings_other_errors():
    with pytest.raises(EmbeddingFormatError, match="line 1"):
        load_embeddings(io.StringIO("3\n"))
    with pytest.raises(EmbeddingFormatError, match="non-numeric"):
        load_embeddings(io.StringIO("1 2\na 1 x\n"))
    with pytest.raises(EmbeddingFormatError, match="duplicate"):
        load_embeddings(io.StringIO("2 2\na 1 2\na 3 4\n"))
    with pytest.raises(EmbeddingFormatError, match="declared"):
        load_embeddings(io.StringIO("3 2\na 1 2\nb 3 4\n"))


def test_embeddings_roundtrip():
    rng = np.random.default_rng(3)
    table = EmbeddingTable(5, {f"w{i}": rng.normal(size=5) for i in range(20)})
    buf = io.StringIO()
    dump_embeddings(table, buf)
    buf.seek(0)
    again = load_embeddings(buf)
    assert again.dim == table.dim
    for word, vec in table.vectors.items():
        assert np.allclose(again.get(word), vec, atol=1e-6)


def test_cosine_identity_and_orthogonality():
    rng = np.random.default_rng(4)
    for _ in range(20):
        u = rng.normal(size=8)
        assert abs(cosine_similarity(u, u) - 1.0) <= 1e-9
    assert cosine_similarity([1.0, 0.0], [0.0, 1.0]) == 0.0
    assert cosine_similarity([0.0, 0.0], [1.0, 1.0]) == 0.0


def test_cosine_against_high_precision_reference():
    rng = np.random.default_rng(5)
    for _ in range(100):
        n = rng.integers(2, 12)
        u = rng.normal(size=n)
        v = rng.normal(size=n)
        dot = math.fsum(a * b for a, b in zip(u, v))
        nu = math.sqrt(math.fsum(a * a for a in u))
        nv = math.sqrt(math.fsum(b * b for b in v))
        want = max(-1.0, min(1.0, dot / (nu * nv)))
        assert abs(cosine_similarity(u, v) - want) <= 1e-9


def test_cosine_symmetry():
    rng = np.random.default_rng(6)
    for _ in range(50):
        u = rng.normal(size=6)
        v = rng.normal(size=6)
        assert abs(cosine_similarity(u, v) - cosine_similarity(v, u)) <= 1e-12


def test_cosine_dimension_mismatch():
    with pytest.raises(ValueError):
        cosine_similarity([1.0, 2.0], [1.0, 2.0, 3.0])


def test_synonym_graph_symmetry():
    graph = build_synonym_graph([("pup", "dog"), ("dog", "hound")])
    assert "dog" in graph.neighbors("pup")
    assert "pup" in graph.neighbors("dog")
    assert "hound" in graph.neighbors("dog")
    with pytest.raises(ValueError):
        build_synonym_graph([("dog", "dog")])


def test_load_synonyms_tsv():
    graph = load_synonyms(io.StringIO("pup\tdog\nkitten\tcat\n"))
    assert graph.neighbors("cat") == frozenset({"kitten"})


def test_find_substitute_synonym_branch():
    graph = build_synonym_graph([("pup", "dog")])
    emb = EmbeddingTable(2, {"pup": np.array([1.0, 0.1]), "dog": np.array([1.0, 0.0])})
    got = find_substitute("pup", {"dog", "cat"}, emb, graph, tau=0.4)
    assert got is not None
    assert got[0] == "dog"
    assert got[1] == pytest.approx(cosine_similarity([1.0, 0.1], [1.0, 0.0]))


def test_find_substitute_synonym_without_vectors_scores_one():
    graph = build_synonym_graph([("pup", "dog")])
    got = find_substitute("pup", {"dog"}, None, graph)
    assert got == ("dog", 1.0)


def test_find_substitute_threshold():
    emb = EmbeddingTable(2, {"word": np.array([1.0, 0.0]), "far": np.array([0.31, 1.0])})
    got = find_substitute("word", {"far"}, emb, None, tau=0.4)
    sim = cosine_similarity([1.0, 0.0], [0.31, 1.0])
    assert sim < 0.4
    assert got is None


def test_find_substitute_never_leaves_vocab(embeddings, synonyms):
    vocab = {"dog", "cat"}
    for word in ["pup", "kitten", "juice", "zebra"]:
        got = find_substitute(word, vocab, embeddings, synonyms)
        if got is not None:
            assert got[0] in vocab


def oracle_substitute(word, vocab, emb, syn, tau):
    """Independent re-coding: explicit candidate lists and max() scans."""
    if syn is not None:
        syn_hits = sorted(set(syn.neighbors(word)) & set(vocab))
        if syn_hits:
            scored = []
            for cand in syn_hits:
                if emb is not None and word in emb and cand in emb:
                    scored.append((cosine_similarity(emb.get(word), emb.get(cand)), cand))
                else:
                    scored.append((1.0, cand))
            best_score = max(s for s, _ in scored)
            best_word = min(c for s, c in scored if s == best_score)
            return best_word, best_score
    if emb is None or word not in emb:
        return None
    scored = [
        (cosine_similarity(emb.get(word), emb.get(cand)), cand)
        for cand in sorted(vocab)
        if cand in emb
    ]
    if not scored:
        return None
    best_score = max(s for s, _ in scored)
    best_word = min(c for s, c in scored if s == best_score)
    if best_score >= tau:
        return best_word, best_score
    return None


def test_find_substitute_matches_oracle_200_instances():
    rng = np.random.default_rng(12)
    pyrng = random.Random(12)
    for _ in range(200):
        dim = int(rng.integers(2, 6))
        n_words = int(rng.integers(2, 15))
        words = [f"w{i}" for i in range(n_words)]
        emb = EmbeddingTable(
            dim, {w: rng.normal(size=dim) for w in words if pyrng.random() < 0.8}
        )
        pairs = []
        for _ in range(int(rng.integers(0, 6))):
            a, b = pyrng.sample(words, 2)
            pairs.append((a, b))
        syn = build_synonym_graph(pairs) if pairs else None
        vocab = {w for w in words if pyrng.random() < 0.5}
        word = pyrng.choice(words)
        vocab.discard(word)
        tau = pyrng.choice([0.0, 0.2, 0.4, 0.8])
        assert find_substitute(word, vocab, emb, syn, tau) == oracle_substitute(
            word, vocab, emb, syn, tau
        )


def _ctx(items):
    ctx = SessionContext(8)
    for noun, cls in items:
        ctx.push(noun, cls)
    return ctx


def test_resolve_pronouns_recency(resources, demo_lexicon):
    ctx = _ctx([("pizza", None), ("toy", None)])
    toks = tag_all(tokenize("he took it"), resources)
    out = resolve_pronouns(toks, ctx, demo_lexicon)
    # "it" takes the most recent lexicon noun; "he" needs a PERSON noun
    assert [t.normalized for t in out] == ["he", "took", "toy"]


def test_resolve_pronouns_person_class(resources, demo_lexicon):
    ctx = _ctx([("teacher", "PERSON"), ("toy", None)])
    toks = tag_all(tokenize("she took it"), resources)
    out = resolve_pronouns(toks, ctx, demo_lexicon)
    assert [t.normalized for t in out] == ["teacher", "took", "toy"]


def test_resolve_pronouns_skips_unknown_nouns(resources, demo_lexicon):
    ctx = _ctx([("toy", None), ("zebra", None)])  # zebra has no pictogram
    toks = tag_all(tokenize("it is big"), resources)
    out = resolve_pronouns(toks, ctx, demo_lexicon)
    assert out[0].normalized == "toy"


def test_resolve_pronouns_empty_context(resources, demo_lexicon):
    toks = tag_all(tokenize("he took it"), resources)
    out = resolve_pronouns(toks, SessionContext(8), demo_lexicon)
    assert [t.normalized for t in out] == ["he", "took", "it"]


def test_resolve_pronouns_first_person_untouched(resources, demo_lexicon):
    ctx = _ctx([("toy", None)])
    toks = tag_all(tokenize("I love BTS"), resources)
    out = resolve_pronouns(toks, ctx, demo_lexicon)
    assert [t.normalized for t in out] == ["i", "love", "bts"]


def test_session_context_capacity():
    ctx = SessionContext(3)
    for i in range(5):
        ctx.push(f"n{i}")
    assert [n for n, _ in ctx.recent()] == ["n2", "n3", "n4"]
    with pytest.raises(ValueError):
        SessionContext(0)


def test_resolve_unknowns_substitution(resources, demo_lexicon, embeddings, synonyms):
    toks = tag_all(tokenize("the pup sleeps"), resources)
    seq = resolve_unknowns(map_text(toks, demo_lexicon), demo_lexicon, embeddings, synonyms)
    kinds = {seq.source[s.start].normalized: s for s in seq.segments}
    assert kinds["pup"].kind == SUBSTITUTED
    assert kinds["pup"].substitute == "dog"
    assert kinds["pup"].entry_id == "dog"
    assert kinds["the"].kind == DROPPED


def test_resolve_unknowns_drops_function_words(resources, demo_lexicon, embeddings, synonyms):
    toks = tag_all(tokenize("the dog and i"), resources)
    seq = resolve_unknowns(map_text(toks, demo_lexicon), demo_lexicon, embeddings, synonyms)
    for seg in seq.segments:
        tok = seq.source[seg.start]
        if tok.normalized in {"the", "and"}:
            assert seg.kind == DROPPED
            assert seg.reason == "function_word"


def test_resolve_unknowns_preserves_matches_and_partition(
    resources, demo_lexicon, embeddings, synonyms
):
    rng = random.Random(17)
    words = ["i", "love", "pup", "the", "zzkqx", "ice", "cream", "and", "buddy", "!"]
    for _ in range(300):
        sentence = " ".join(rng.choice(words) for _ in range(rng.randint(1, 10)))
        toks = tag_all(tokenize(sentence), resources)
        before = map_text(toks, demo_lexicon)
        after = resolve_unknowns(before, demo_lexicon, embeddings, synonyms)
        assert len(after.segments) == len(before.segments)
        pos = 0
        for b, a in zip(before.segments, after.segments):
            assert (a.start, a.end) == (b.start, b.end)
            if b.kind == MATCHED:
                assert a == b
            assert a.start == pos
            pos = a.end
        assert pos == len(toks)
        for seg in after.segments:
            if seg.kind == UNKNOWN:
                assert after.source[seg.start].pos not in {"DET", "ADP", "CONJ"}


def test_no_unknown_stopwords_survive(resources, demo_lexicon):
    lex = build_lexicon([LexiconEntry("dog", ("dog",), "img/dog.svg")])
    toks = tag_all(tokenize("the dog is mine"), resources)
    seq = resolve_unknowns(map_text(toks, lex), lex)
    for seg in seq.segments:
        if seq.source[seg.start].is_stopword:
            assert seg.kind == DROPPED
