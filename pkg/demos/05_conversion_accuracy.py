"""Scoring text-to-pictogram conversion over the four deletion cases,
with and without the entity penalty.

Run:  python demos/05_conversion_accuracy.py
"""
from pictopipe import Engine, load_tpa_corpus, run_case_matrix, tpa_score, TpaConfig
from pictopipe.resources import data_path

engine = Engine()
with open(data_path("eval", "tpa_demo.jsonl"), encoding="utf-8") as fh:
    corpus = load_tpa_corpus(fh)
predict_tp, predict_ne = engine.tpa_predictors()

print(f"demo gold corpus: {len(corpus)} sentences\n")
matrix = run_case_matrix(corpus, predict_tp, predict_ne, resources=engine.resources)
print(matrix.to_table())
print()

cfg = TpaConfig(delete_pos=True, delete_stopwords=True, apply_penalty=True)
report = tpa_score(corpus, predict_tp, predict_ne, cfg, engine.resources)
print("per-sentence breakdown (content words only, penalty on):")
for line in report.per_sentence:
    print(f"  {line.sentence!r:40} counted={line.counted} correct={line.correct} "
          f"penalties={line.penalties}")
print(f"\noverall: {report.score:.2f} "
      f"({report.correct}/{report.counted} correct, {report.penalties} penalties)")
