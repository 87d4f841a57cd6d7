"""Conversion-accuracy scoring: per-word correctness over configurable
POS/stopword deletion cases, with an optional entity-mismatch penalty.

Each counted word contributes a Kronecker delta between the predicted and
gold conversion; the penalty subtracts one for every entity-label mismatch
on a counted word. The final ratio is normalized by N + epsilon and reported
on a 0-100 scale.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO, Callable, Optional, Sequence, Union

from .textproc import NE_CLASSES, TagResources, Token, tag_all, tokenize

LENIENT = "lenient"
STRICT = "strict"

EXCLUDED_POS = frozenset({"DET", "ADP", "CONJ"})

GoldTp = Union[str, bool, None]
PredictTp = Callable[[Sequence[Token], int], Optional[str]]
PredictNe = Callable[[Sequence[Token], int], Optional[str]]


class CorpusFormatError(ValueError):
    """Malformed or misaligned gold corpus."""


@dataclass(frozen=True)
class TpaConfig:
    delete_pos: bool = True
    delete_stopwords: bool = True
    apply_penalty: bool = False
    epsilon: float = 1e-9
    match_mode: str = LENIENT

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.match_mode not in (LENIENT, STRICT):
            raise ValueError(f"unknown match mode {self.match_mode!r}")


@dataclass(frozen=True)
class TpaSample:
    sentence: str
    gold_tp: tuple[GoldTp, ...]
    gold_ne: tuple[str, ...]


@dataclass
class SentenceScore:
    sentence: str
    counted: int
    correct: int
    penalties: int


@dataclass
class TpaReport:
    score: float  # 0-100 scale
    ratio: float  # raw score / (N + epsilon)
    counted: int
    correct: int
    penalties: int
    per_sentence: list[SentenceScore] = field(default_factory=list)
    warning: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "score": self.score,
            "ratio": self.ratio,
            "counted": self.counted,
            "correct": self.correct,
            "penalties": self.penalties,
            "warning": self.warning,
        }


def _gold_converts(gold: GoldTp) -> bool:
    return bool(gold)


def tpa_score(
    corpus: Sequence[TpaSample],
    predict_tp: PredictTp,
    predict_ne: PredictNe,
    cfg: TpaConfig,
    resources: Optional[TagResources] = None,
) -> TpaReport:
    """Score a gold-annotated corpus against prediction callbacks.

    predict_tp(tokens, i) returns the predicted entry id for token i (None if
    not converted); predict_ne(tokens, i) returns the predicted entity label.
    Lenient mode compares converted-or-not booleans; strict mode compares
    entry ids. Gold arrays must align with the tokenizer output.
    """
    if not corpus:
        raise CorpusFormatError("corpus is empty")
    res = resources if resources is not None else _default_resources()
    total_correct = total_pen = total_n = 0
    per_sentence: list[SentenceScore] = []
    for si, sample in enumerate(corpus):
        tokens = tag_all(tokenize(sample.sentence), res)
        if len(sample.gold_tp) != len(tokens) or len(sample.gold_ne) != len(tokens):
            raise CorpusFormatError(
                f"sample {si}: gold arrays ({len(sample.gold_tp)}/{len(sample.gold_ne)})"
                f" misaligned with {len(tokens)} tokens"
            )
        correct = pen = counted = 0
        for i, tok in enumerate(tokens):
            if cfg.delete_pos and tok.pos in EXCLUDED_POS:
                continue
            if cfg.delete_stopwords and tok.is_stopword:
                continue
            pred = predict_tp(tokens, i)
            if cfg.match_mode == STRICT:
                gold = sample.gold_tp[i]
                if isinstance(gold, bool):
                    raise CorpusFormatError(
                        f"sample {si}: strict mode needs entry ids, found boolean gold"
                    )
                delta = 1 if pred == gold else 0
            else:
                delta = 1 if (pred is not None) == _gold_converts(sample.gold_tp[i]) else 0
            correct += delta
            if cfg.apply_penalty:
                pred_ne = predict_ne(tokens, i) or "NONE"
                if pred_ne != sample.gold_ne[i]:
                    pen += 1
            counted += 1
        per_sentence.append(SentenceScore(sample.sentence, counted, correct, pen))
        total_correct += correct
        total_pen += pen
        total_n += counted
    points = total_correct - total_pen if cfg.apply_penalty else total_correct
    ratio = points / (total_n + cfg.epsilon)
    return TpaReport(
        score=100.0 * ratio,
        ratio=ratio,
        counted=total_n,
        correct=total_correct,
        penalties=total_pen,
        per_sentence=per_sentence,
        warning="no counted words" if total_n == 0 else None,
    )


CASES: dict[int, tuple[bool, bool]] = {
    1: (True, True),  # (delete_pos, delete_stopwords)
    2: (False, True),
    3: (True, False),
    4: (False, False),
}


@dataclass
class CaseMatrix:
    cells: dict[tuple[int, bool], TpaReport]

    def report(self, case: int, penalty: bool) -> TpaReport:
        return self.cells[(case, penalty)]

    def to_dict(self) -> dict:
        out: dict = {"tpa": {}, "tpa_with_penalty": {}}
        for (case, penalty), rep in sorted(self.cells.items()):
            bucket = "tpa_with_penalty" if penalty else "tpa"
            pos, stop = CASES[case]
            out[bucket][str(case)] = dict(rep.to_dict(), delete_pos=pos, delete_stopwords=stop)
        return out

    def to_table(self) -> str:
        rows = [f"{'':18s} {'case':>4s} {'POS':>4s} {'Stopwords':>9s} {'Score':>8s}"]
        for penalty in (False, True):
            label = "TPA with penalty" if penalty else "TPA"
            for case in sorted(CASES):
                pos, stop = CASES[case]
                rep = self.cells[(case, penalty)]
                rows.append(
                    f"{label if case == 1 else '':18s} ({case}) "
                    f"{'x' if pos else '-':>3s} {'x' if stop else '-':>9s} "
                    f"{rep.score:8.2f}"
                )
        return "\n".join(rows)


def run_case_matrix(
    corpus: Sequence[TpaSample],
    predict_tp: PredictTp,
    predict_ne: PredictNe,
    epsilon: float = 1e-9,
    match_mode: str = LENIENT,
    resources: Optional[TagResources] = None,
) -> CaseMatrix:
    """Evaluate all four deletion cases, each with and without the penalty."""
    cells: dict[tuple[int, bool], TpaReport] = {}
    for case, (del_pos, del_stop) in CASES.items():
        for penalty in (False, True):
            cfg = TpaConfig(
                delete_pos=del_pos,
                delete_stopwords=del_stop,
                apply_penalty=penalty,
                epsilon=epsilon,
                match_mode=match_mode,
            )
            cells[(case, penalty)] = tpa_score(corpus, predict_tp, predict_ne, cfg, resources)
    return CaseMatrix(cells)


def load_tpa_corpus(source: IO[str]) -> list[TpaSample]:
    """Parse the JSONL gold corpus: one object per line with "sentence",
    "gold_tp" (entry id, boolean, or null per token), and "gold_ne"."""
    samples: list[TpaSample] = []
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
        if not isinstance(obj, dict) or not isinstance(obj.get("sentence"), str):
            raise CorpusFormatError(f"line {lineno}: record needs a string 'sentence'")
        gold_tp = obj.get("gold_tp")
        gold_ne = obj.get("gold_ne")
        if not isinstance(gold_tp, list) or not isinstance(gold_ne, list):
            raise CorpusFormatError(f"line {lineno}: 'gold_tp' and 'gold_ne' must be arrays")
        for item in gold_tp:
            if item is not None and not isinstance(item, (str, bool)):
                raise CorpusFormatError(
                    f"line {lineno}: gold_tp entries must be string, boolean, or null"
                )
        labels = []
        for item in gold_ne:
            if not isinstance(item, str):
                raise CorpusFormatError(f"line {lineno}: gold_ne entries must be strings")
            label = item.upper()
            if label != "NONE" and label not in NE_CLASSES:
                raise CorpusFormatError(f"line {lineno}: unknown entity label {item!r}")
            labels.append(label)
        samples.append(TpaSample(obj["sentence"], tuple(gold_tp), tuple(labels)))
    if not samples:
        raise CorpusFormatError("corpus is empty")
    return samples


def _default_resources() -> TagResources:
    from .resources import bundled_tag_resources

    return bundled_tag_resources()
