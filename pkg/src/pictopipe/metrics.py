"""Corpus metrics: BLEU, source-aware GLEU, and Spearman rank correlation.

BLEU/GLEU are corpus-level: n-gram counts are pooled over all pairs before
precisions are formed. Precisions for n >= 2 get add-one smoothing when
their match count is zero. GLEU additionally subtracts, per pair, hypothesis
n-grams that were inherited from the source but are absent from the
reference (floored at zero).
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import IO, Optional, Sequence

from scipy import stats as _sps


@dataclass(frozen=True)
class ScoredPair:
    hypothesis: tuple[str, ...]
    references: tuple[tuple[str, ...], ...]
    source: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if not self.references:
            raise ValueError("a scored pair needs at least one reference")


def scored_pair(
    hypothesis: Sequence[str],
    references: Sequence[Sequence[str]],
    source: Optional[Sequence[str]] = None,
) -> ScoredPair:
    return ScoredPair(
        tuple(hypothesis),
        tuple(tuple(r) for r in references),
        tuple(source) if source is not None else None,
    )


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _max_ref_counts(references: Sequence[Sequence[str]], n: int) -> Counter:
    best: Counter = Counter()
    for ref in references:
        for gram, count in _ngrams(ref, n).items():
            if count > best[gram]:
                best[gram] = count
    return best


def _closest_ref_len(references: Sequence[Sequence[str]], hyp_len: int) -> int:
    return min((abs(len(r) - hyp_len), len(r)) for r in references)[1]


def _combine(matches: list[int], totals: list[int], hyp_len: int, ref_len: int, max_n: int) -> float:
    log_sum = 0.0
    for n in range(1, max_n + 1):
        if totals[n] == 0:
            precision = 1.0
        elif matches[n] == 0:
            if n == 1:
                return 0.0
            precision = 1.0 / (totals[n] + 1)
        else:
            precision = matches[n] / totals[n]
        log_sum += math.log(precision)
    brevity = 1.0 if hyp_len > ref_len else math.exp(1.0 - ref_len / hyp_len)
    return 100.0 * brevity * math.exp(log_sum / max_n)


def bleu(corpus: Sequence[ScoredPair], max_n: int = 4) -> float:
    """Corpus BLEU on a 0-100 scale: geometric mean of clipped n-gram
    precisions times the brevity penalty."""
    if not corpus:
        raise ValueError("empty corpus")
    matches = [0] * (max_n + 1)
    totals = [0] * (max_n + 1)
    hyp_len = ref_len = 0
    for pair in corpus:
        if not pair.hypothesis:
            raise ValueError("empty hypothesis")
        hyp_len += len(pair.hypothesis)
        ref_len += _closest_ref_len(pair.references, len(pair.hypothesis))
        for n in range(1, max_n + 1):
            hyp_grams = _ngrams(pair.hypothesis, n)
            totals[n] += sum(hyp_grams.values())
            ref_grams = _max_ref_counts(pair.references, n)
            matches[n] += sum(min(c, ref_grams[g]) for g, c in hyp_grams.items())
    return _combine(matches, totals, hyp_len, ref_len, max_n)


def gleu(corpus: Sequence[ScoredPair], max_n: int = 4) -> float:
    """Correction-aware BLEU variant: per pair, hypothesis n-grams that also
    occur in the source but not in the reference are subtracted from the
    match count (never below zero) before pooling."""
    if not corpus:
        raise ValueError("empty corpus")
    matches = [0] * (max_n + 1)
    totals = [0] * (max_n + 1)
    hyp_len = ref_len = 0
    for pair in corpus:
        if not pair.hypothesis:
            raise ValueError("empty hypothesis")
        if pair.source is None:
            raise ValueError("gleu needs a source sentence in every pair")
        hyp_len += len(pair.hypothesis)
        ref_len += _closest_ref_len(pair.references, len(pair.hypothesis))
        for n in range(1, max_n + 1):
            hyp_grams = _ngrams(pair.hypothesis, n)
            src_grams = _ngrams(pair.source, n)
            ref_grams = _max_ref_counts(pair.references, n)
            totals[n] += sum(hyp_grams.values())
            matched = sum(min(c, ref_grams[g]) for g, c in hyp_grams.items())
            penalty = sum(
                max(0, min(c, src_grams[g]) - ref_grams[g]) for g, c in hyp_grams.items()
            )
            matches[n] += max(0, matched - penalty)
    return _combine(matches, totals, hyp_len, ref_len, max_n)


def _average_ranks(values: Sequence[float]) -> list[int]:
    """Ranks with ties averaged, scaled by 2 so they stay integral."""
    n = len(values)
    order = sorted(range(n), key=lambda i: values[i])
    ranks = [0] * n
    i = 0
    while i < n:
        j = i
        while j < n and values[order[j]] == values[order[i]]:
            j += 1
        doubled = i + 1 + j  # 2 * average of ranks i+1 .. j
        for k in range(i, j):
            ranks[order[k]] = doubled
        i = j
    return ranks


def _rank_stats(rx: Sequence[int], ry: Sequence[int]) -> tuple[int, int, int]:
    n = len(rx)
    sx, sy = sum(rx), sum(ry)
    sxy = sum(a * b for a, b in zip(rx, ry))
    sxx = sum(a * a for a in rx)
    syy = sum(b * b for b in ry)
    return n * sxy - sx * sy, n * sxx - sx * sx, n * syy - sy * sy


def spearman(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Spearman rho with a two-sided p-value.

    Rho is the Pearson correlation of average ranks, computed in exact
    integer arithmetic so monotone inputs give exactly +/-1. The p-value is
    an exhaustive permutation enumeration for n <= 8 and the t-distribution
    approximation above that.
    """
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 3:
        raise ValueError("need at least 3 observations")
    rx = _average_ranks(x)
    ry = _average_ranks(y)
    num, dx, dy = _rank_stats(rx, ry)
    if dx == 0 or dy == 0:
        raise ValueError("constant input has no rank correlation")
    rho_sq = Fraction(num * num, dx * dy)
    rho = math.copysign(math.sqrt(float(rho_sq)), num) if num else 0.0
    if n <= 8:
        threshold = abs(num)
        hits = 0
        total = 0
        for perm in permutations(ry):
            pnum, _, _ = _rank_stats(rx, perm)
            if abs(pnum) >= threshold:
                hits += 1
            total += 1
        p_value = hits / total
    else:
        if abs(rho) >= 1.0:
            p_value = 0.0
        else:
            t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
            p_value = 2.0 * float(_sps.t.sf(abs(t), n - 2))
    return rho, min(1.0, p_value)


def load_scored_pairs(source: IO[str]) -> list[ScoredPair]:
    """Read the evaluation TSV: source, hypothesis, reference per line."""
    pairs: list[ScoredPair] = []
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise ValueError(f"line {lineno}: expected 3 tab-separated columns")
        src, hyp, ref = (c.split() for c in cols)
        if not hyp or not ref:
            raise ValueError(f"line {lineno}: hypothesis and reference must be non-empty")
        pairs.append(scored_pair(hyp, [ref], src))
    if not pairs:
        raise ValueError("evaluation corpus is empty")
    return pairs
