"""BLEU and GLEU on a correction corpus, plus rank correlation with
significance for survey-style analyses.

Run:  python demos/06_correction_metrics.py
"""
from pictopipe import bleu, gleu, load_scored_pairs, scored_pair, spearman
from pictopipe.resources import data_path

with open(data_path("eval", "gec_demo.tsv"), encoding="utf-8") as fh:
    pairs = load_scored_pairs(fh)

print(f"correction corpus: {len(pairs)} triples")
print(f"BLEU = {bleu(pairs):.2f}")
print(f"GLEU = {gleu(pairs):.2f}")
print()

# GLEU punishes hypotheses that keep source errors; BLEU alone does not see
# the source at all.
kept = [scored_pair("the dog runned home".split(),
                    ["the dog ran home".split()],
                    "the dog runned home".split())]
fixed = [scored_pair("the dog ran home".split(),
                     ["the dog ran home".split()],
                     "the dog runned home".split())]
print(f"uncorrected hypothesis: BLEU {bleu(kept):6.2f}  GLEU {gleu(kept):6.2f}")
print(f"corrected hypothesis:   BLEU {bleu(fixed):6.2f}  GLEU {gleu(fixed):6.2f}")
print()

# five-question satisfaction profile of two rater groups
q_scores_a = [4.6, 4.4, 3.9, 4.1, 3.8]
q_scores_b = [4.5, 4.6, 3.7, 4.0, 3.6]
rho, p = spearman(q_scores_a, q_scores_b)
print(f"spearman rho = {rho:.3f}, p = {p:.4f} (exact permutation enumeration for n <= 8)")
