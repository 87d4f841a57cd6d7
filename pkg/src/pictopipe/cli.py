"""Command line entry points: translate, serve, eval, lexicon validate."""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .gec import GecServiceError
from .lexicon import JSONL, TSV, LexiconError, load_lexicon
from .metrics import bleu, gleu, load_scored_pairs
from .nlu import EmbeddingFormatError
from .pipeline import ConfigError, EmptyInputError, Engine, load_config
from .service import create_server, run_server
from .tpa import CASES, CorpusFormatError, TpaConfig, load_tpa_corpus, run_case_matrix, tpa_score

_DATA_ERRORS = (
    ConfigError,
    CorpusFormatError,
    EmptyInputError,
    EmbeddingFormatError,
    GecServiceError,
    LexiconError,
    OSError,
    ValueError,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pictopipe",
        description="Text-to-pictogram translation, service, and evaluation tools.",
    )
    parser.add_argument("--config", help="key=value config file (PICTOPIPE_* env overrides)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_translate = sub.add_parser("translate", help="translate one utterance to pictograms")
    p_translate.add_argument("text", help="utterance to translate")

    p_serve = sub.add_parser("serve", help="run the HTTP JSON service")
    p_serve.add_argument("--host", help="bind address (default from config)")
    p_serve.add_argument("--port", type=int, help="bind port (default from config)")
    p_serve.add_argument(
        "--local-eval",
        action="store_true",
        help="allow /api/eval/tpa to read corpus files from local paths",
    )

    p_eval = sub.add_parser("eval", help="run evaluation metrics")
    eval_sub = p_eval.add_subparsers(dest="eval_command", required=True)

    p_tpa = eval_sub.add_parser("tpa", help="conversion-accuracy case matrix")
    p_tpa.add_argument("--corpus", required=True, help="gold corpus JSONL file")
    p_tpa.add_argument("--case", type=int, choices=sorted(CASES), help="report one deletion case")
    p_tpa.add_argument("--penalty", action="store_true", help="apply the entity penalty")
    p_tpa.add_argument("--epsilon", type=float, default=1e-9)
    p_tpa.add_argument("--mode", choices=["lenient", "strict"], default="lenient")
    p_tpa.add_argument("--json", action="store_true", help="emit JSON instead of the table")

    p_gec = eval_sub.add_parser("gec", help="score a correction corpus")
    p_gec.add_argument("--corpus", required=True, help="TSV file: source, hypothesis, reference")
    p_gec.add_argument("--metric", choices=["bleu", "gleu", "both"], default="both")
    p_gec.add_argument("--json", action="store_true")

    p_lex = sub.add_parser("lexicon", help="lexicon tools")
    lex_sub = p_lex.add_subparsers(dest="lexicon_command", required=True)
    p_val = lex_sub.add_parser("validate", help="load a lexicon file and report problems")
    p_val.add_argument("path")
    p_val.add_argument("--format", choices=[JSONL, TSV], help="default: by file extension")
    return parser


def _cmd_translate(args) -> int:
    engine = Engine(load_config(args.config))
    result = engine.process(args.text, engine.new_session())
    print(json.dumps(result.to_dict(engine.lexicon), indent=2))
    return 0


def _cmd_serve(args) -> int:
    engine = Engine(load_config(args.config))
    server = create_server(engine, args.host, args.port, allow_local_eval=args.local_eval)
    host, port = server.server_address[:2]
    print(f"pictopipe service listening on http://{host}:{port}", flush=True)
    run_server(server)
    return 0


def _cmd_eval_tpa(args) -> int:
    engine = Engine(load_config(args.config))
    with open(args.corpus, encoding="utf-8") as fh:
        corpus = load_tpa_corpus(fh)
    predict_tp, predict_ne = engine.tpa_predictors()
    if args.case is not None:
        del_pos, del_stop = CASES[args.case]
        cfg = TpaConfig(
            delete_pos=del_pos,
            delete_stopwords=del_stop,
            apply_penalty=args.penalty,
            epsilon=args.epsilon,
            match_mode=args.mode,
        )
        report = tpa_score(corpus, predict_tp, predict_ne, cfg, engine.resources)
        if args.json:
            print(json.dumps(report.to_dict(), indent=2))
        else:
            label = "TPA with penalty" if args.penalty else "TPA"
            print(f"{label} case ({args.case}): {report.score:.2f} "
                  f"({report.correct}/{report.counted} correct, {report.penalties} penalties)")
        return 0
    matrix = run_case_matrix(
        corpus, predict_tp, predict_ne,
        epsilon=args.epsilon, match_mode=args.mode, resources=engine.resources,
    )
    print(json.dumps(matrix.to_dict(), indent=2) if args.json else matrix.to_table())
    return 0


def _cmd_eval_gec(args) -> int:
    with open(args.corpus, encoding="utf-8") as fh:
        pairs = load_scored_pairs(fh)
    scores = {}
    if args.metric in ("bleu", "both"):
        scores["bleu"] = bleu(pairs)
    if args.metric in ("gleu", "both"):
        scores["gleu"] = gleu(pairs)
    if args.json:
        print(json.dumps(scores, indent=2))
    else:
        for name, value in scores.items():
            print(f"{name.upper()} = {value:.2f}")
    return 0


def _cmd_lexicon_validate(args) -> int:
    fmt = args.format or (JSONL if args.path.endswith((".jsonl", ".json")) else TSV)
    with open(args.path, encoding="utf-8") as fh:
        lex = load_lexicon(fh, format=fmt)
    print(f"{args.path}: OK ({len(lex)} entries, max phrase length {lex.max_ngram})")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "translate":
            return _cmd_translate(args)
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "eval":
            if args.eval_command == "tpa":
                return _cmd_eval_tpa(args)
            return _cmd_eval_gec(args)
        if args.command == "lexicon":
            return _cmd_lexicon_validate(args)
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
