from __future__ import annotations

import io
import math
import random
from collections import Counter
from fractions import Fraction
from itertools import permutations

import pytest

from pictopipe.metrics import ScoredPair, bleu, gleu, load_scored_pairs, scored_pair, spearman


# ---------------------------------------------------------------------------
# independent literal-definition reimplementations used as oracles
# ---------------------------------------------------------------------------

def _grams(seq, n):
    return Counter(tuple(seq[i : i + n]) for i in range(len(seq) - n + 1))


def oracle_bleu(corpus, max_n=4):
    total_hyp = 0
    total_ref = 0
    matched = {n: 0 for n in range(1, max_n + 1)}
    seen = {n: 0 for n in range(1, max_n + 1)}
    for pair in corpus:
        hyp = list(pair.hypothesis)
        total_hyp += len(hyp)
        total_ref += min(
            (abs(len(r) - len(hyp)), len(r)) for r in pair.references
        )[1]
        for n in range(1, max_n + 1):
            hgrams = _grams(hyp, n)
            seen[n] += sum(hgrams.values())
            best = Counter()
            for ref in pair.references:
                rgrams = _grams(ref, n)
                for g in rgrams:
                    best[g] = max(best[g], rgrams[g])
            matched[n] += sum(min(hgrams[g], best[g]) for g in hgrams)
    logs = []
    for n in range(1, max_n + 1):
        if seen[n] == 0:
            logs.append(0.0)
        elif matched[n] == 0:
            if n == 1:
                return 0.0
            logs.append(math.log(1.0 / (seen[n] + 1)))
        else:
            logs.append(math.log(matched[n] / seen[n]))
    bp = 1.0 if total_hyp > total_ref else math.exp(1.0 - total_ref / total_hyp)
    return 100.0 * bp * math.exp(sum(logs) / max_n)


def oracle_gleu(corpus, max_n=4):
    total_hyp = 0
    total_ref = 0
    matched = {n: 0 for n in range(1, max_n + 1)}
    seen = {n: 0 for n in range(1, max_n + 1)}
    for pair in corpus:
        hyp = list(pair.hypothesis)
        src = list(pair.source)
        total_hyp += len(hyp)
        total_ref += min(
            (abs(len(r) - len(hyp)), len(r)) for r in pair.references
        )[1]
        for n in range(1, max_n + 1):
            hgrams = _grams(hyp, n)
            sgrams = _grams(src, n)
            best = Counter()
            for ref in pair.references:
                rgrams = _grams(ref, n)
                for g in rgrams:
                    best[g] = max(best[g], rgrams[g])
            seen[n] += sum(hgrams.values())
            hits = sum(min(hgrams[g], best[g]) for g in hgrams)
            bad = sum(max(0, min(hgrams[g], sgrams[g]) - best[g]) for g in hgrams)
            matched[n] += max(0, hits - bad)
    logs = []
    for n in range(1, max_n + 1):
        if seen[n] == 0:
            logs.append(0.0)
        elif matched[n] == 0:
            if n == 1:
                return 0.0
            logs.append(math.log(1.0 / (seen[n] + 1)))
        else:
            logs.append(math.log(matched[n] / seen[n]))
    bp = 1.0 if total_hyp > total_ref else math.exp(1.0 - total_ref / total_hyp)
    return 100.0 * bp * math.exp(sum(logs) / max_n)


def oracle_spearman_p(x, y):
    """Exact two-sided permutation p-value via Fractions."""
    def ranks(vals):
        order = sorted(range(len(vals)), key=lambda i: vals[i])
        out = [Fraction(0)] * len(vals)
        i = 0
        while i < len(vals):
            j = i
            while j < len(vals) and vals[order[j]] == vals[order[i]]:
                j += 1
            avg = Fraction(i + 1 + j, 2)
            for k in range(i, j):
                out[order[k]] = avg
            i = j
        return out

    def rho_num(rx, ry):
        n = len(rx)
        sx, sy = sum(rx), sum(ry)
        return n * sum(a * b for a, b in zip(rx, ry)) - sx * sy

    rx, ry = ranks(x), ranks(y)
    observed = abs(rho_num(rx, ry))
    hits = 0
    total = 0
    for perm in permutations(ry):
        if abs(rho_num(rx, list(perm))) >= observed:
            hits += 1
        total += 1
    return Fraction(hits, total)


# ---------------------------------------------------------------------------
# bleu / gleu
# ---------------------------------------------------------------------------

def _rand_corpus(rng, with_source=True):
    vocab = ["a", "b", "c", "d", "e", "f", "g"]
    corpus = []
    for _ in range(rng.randint(1, 6)):
        hyp = [rng.choice(vocab) for _ in range(rng.randint(1, 12))]
        refs = [
            [rng.choice(vocab) for _ in range(rng.randint(1, 12))]
            for _ in range(rng.randint(1, 2))
        ]
        src = [rng.choice(vocab) for _ in range(rng.randint(1, 12))] if with_source else None
        corpus.append(scored_pair(hyp, refs, src))
    return corpus


def test_bleu_perfect_match_is_exactly_100():
    corpus = [scored_pair(["i", "love", "bts"], [["i", "love", "bts"]])]
    assert bleu(corpus) == 100.0


def test_gleu_perfect_match_is_exactly_100():
    corpus = [
        scored_pair(["i", "love", "bts"], [["i", "love", "bts"]], ["i", "lovedd", "bts"])
    ]
    assert gleu(corpus) == 100.0


def test_bleu_no_overlap_is_zero_region():
    corpus = [scored_pair(["x", "y"], [["a", "b"]])]
    assert bleu(corpus) == 0.0


def test_gleu_uncorrected_disjoint_hypothesis_scores_zero():
    corpus = [scored_pair(["x", "y"], [["a", "b"]], ["x", "y"])]
    assert gleu(corpus) == 0.0


def test_gleu_penalizes_source_ngrams():
    # hypothesis keeps a source word the reference removed
    pair_kept = scored_pair(["the", "dog", "runned"], [["the", "dog", "ran"]],
                            ["the", "dog", "runned"])
    pair_fixed = scored_pair(["the", "dog", "ran"], [["the", "dog", "ran"]],
                             ["the", "dog", "runned"])
    assert gleu([pair_fixed]) > gleu([pair_kept])
    assert bleu([pair_fixed]) > bleu([pair_kept])


def test_bleu_matches_oracle_on_20_random_corpora():
    rng = random.Random(101)
    for _ in range(20):
        corpus = _rand_corpus(rng, with_source=False)
        assert bleu(corpus) == pytest.approx(oracle_bleu(corpus), abs=1e-6)


def test_gleu_matches_oracle_on_20_random_corpora():
    rng = random.Random(202)
    for _ in range(20):
        corpus = _rand_corpus(rng, with_source=True)
        assert gleu(corpus) == pytest.approx(oracle_gleu(corpus), abs=1e-6)


def test_corpus_reorder_invariance():
    rng = random.Random(303)
    corpus = _rand_corpus(rng)
    shuffled = list(corpus)
    rng.shuffle(shuffled)
    assert bleu(corpus) == pytest.approx(bleu(shuffled), abs=1e-12)
    assert gleu(corpus) == pytest.approx(gleu(shuffled), abs=1e-12)


def test_bleu_bounds():
    rng = random.Random(404)
    for _ in range(30):
        corpus = _rand_corpus(rng)
        assert 0.0 <= bleu(corpus) <= 100.0
        assert 0.0 <= gleu(corpus) <= 100.0


def test_bleu_errors():
    with pytest.raises(ValueError):
        bleu([])
    with pytest.raises(ValueError):
        bleu([ScoredPair((), ((),))])
    with pytest.raises(ValueError):
        gleu([scored_pair(["a"], [["a"]])])  # missing source
    with pytest.raises(ValueError):
        ScoredPair(("a",), ())  # no reference


# ---------------------------------------------------------------------------
# spearman
# ---------------------------------------------------------------------------

def test_spearman_monotone_is_exactly_one():
    x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]
    y = [v * v for v in x]
    rho, _ = spearman(x, y)
    assert rho == 1.0


def test_spearman_reversed_is_exactly_minus_one():
    x = [1.0, 2.0, 3.0, 4.0, 5.0]
    rho, _ = spearman(x, list(reversed(x)))
    assert rho == -1.0


def test_spearman_invariant_under_monotone_transform():
    rng = random.Random(505)
    x = [rng.random() for _ in range(12)]
    y = [rng.random() for _ in range(12)]
    rho1, p1 = spearman(x, y)
    rho2, p2 = spearman([math.exp(v) for v in x], [v ** 3 for v in y])
    assert rho1 == pytest.approx(rho2, abs=1e-12)
    assert p1 == pytest.approx(p2, abs=1e-12)


def test_spearman_permutation_p_exact_n6():
    rng = random.Random(606)
    for _ in range(10):
        x = [rng.random() for _ in range(6)]
        y = [rng.random() for _ in range(6)]
        _, p = spearman(x, y)
        assert p == pytest.approx(float(oracle_spearman_p(x, y)), abs=1e-12)


def test_spearman_permutation_p_with_ties():
    x = [1.0, 1.0, 2.0, 3.0, 4.0]
    y = [2.0, 1.0, 1.0, 3.0, 3.0]
    _, p = spearman(x, y)
    assert p == pytest.approx(float(oracle_spearman_p(x, y)), abs=1e-12)


def test_spearman_t_approximation_for_large_n():
    rng = random.Random(707)
    x = [rng.random() for _ in range(30)]
    y = [xi + rng.random() * 0.4 for xi in x]
    rho, p = spearman(x, y)
    assert 0.0 < rho <= 1.0
    assert 0.0 <= p < 0.05  # strongly correlated


def test_spearman_errors():
    with pytest.raises(ValueError):
        spearman([1.0, 2.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        spearman([1.0, 2.0, 3.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        spearman([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])


# ---------------------------------------------------------------------------
# corpus file format
# ---------------------------------------------------------------------------

def test_load_scored_pairs():
    text = "he taked toy\the took toy\the took toy\nx y\tx z\tx q\n"
    pairs = load_scored_pairs(io.StringIO(text))
    assert len(pairs) == 2
    assert pairs[0].source == ("he", "taked", "toy")
    assert pairs[0].hypothesis == ("he", "took", "toy")
    assert pairs[0].references == (("he", "took", "toy"),)


def test_load_scored_pairs_errors():
    with pytest.raises(ValueError, match="line 1"):
        load_scored_pairs(io.StringIO("only two\tcolumns\n"))
    with pytest.raises(ValueError, match="empty"):
        load_scored_pairs(io.StringIO("\n"))
