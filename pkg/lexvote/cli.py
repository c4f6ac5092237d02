"""
Command-line interface.

    python -m lexvote extract    --train FILE --view C --out features.jsonl
    python -m lexvote train      --train FILE --ensemble UBC --out models/
    python -m lexvote classify   --models models/ --test FILE --out predictions.tsv
    python -m lexvote score      --gold gold.tsv PRED [PRED ...]
    python -m lexvote agree      --gold gold.tsv PRED PRED [PRED ...]
    python -m lexvote experiment --config experiment.env [overrides]
    python -m lexvote generate   OUT_DIR [--seed N]
    python -m lexvote serve      [--host H] [--port P]

Exit codes: 0 success, 1 I/O error, 2 invalid input (or a failed word in
`experiment`).
"""
import argparse
import logging
import sys
from itertools import combinations
from pathlib import Path

from lexvote import config
from lexvote.exceptions import LexvoteError, ValidationError
from lexvote.models import Instance
from lexvote.utils.bundle import load_models, save_feature_set, save_models
from lexvote.utils.corpus import default_stoplist, load_lexical_sample, load_lexical_samples, load_stoplist, read_instances
from lexvote.utils.ensemble import train_classifier
from lexvote.utils.features import build_feature_set
from lexvote.utils.experiment import RunError, run_experiment
from lexvote.utils.reports import agreement_rows, emit_reports, kway_rows
from lexvote.utils.scoring import (
    kway_agreement, load_gold, load_predictions, merge_predictions, pairwise_agreement, predict, round_percent, score,
    write_predictions,
)

logger = logging.getLogger("lexvote")


# ---------------------------------------------------------------------------
# Shared options
# ---------------------------------------------------------------------------

def _add_corpus_args(parser, test=True):
    parser.add_argument("--config", type=Path, help="flat KEY=VALUE experiment config file")
    parser.add_argument("--train", type=Path, help="instance file (records with '-' are test instances)")
    if test:
        parser.add_argument("--test", type=Path, help="separate test instance file")
    parser.add_argument("--stoplist", type=Path, help="stoplist file (default: packaged English list)")


def _add_feature_args(parser):
    group = parser.add_argument_group("feature selection")
    group.add_argument("--unigram-min-freq", type=int)
    group.add_argument("--bigram-min-freq", type=int)
    group.add_argument("--bigram-g2", type=float)
    group.add_argument("--bigram-top-n", type=int)
    group.add_argument("--cooc-min-freq", type=int)
    group.add_argument("--cooc-g2", type=float)
    group.add_argument("--cooc-window", type=int)


def _add_learning_args(parser):
    group = parser.add_argument_group("learning")
    group.add_argument("--bags", type=int, help="trees per bagged classifier")
    group.add_argument("--seed", type=int, help="master seed (falls back to LEXVOTE_SEED)")
    group.add_argument("--no-resample", dest="resample", action="store_const", const=False,
                       help="train every tree on the full training set")
    group.add_argument("--no-prune", dest="prune", action="store_const", const=False)
    group.add_argument("--min-leaf", type=int)
    group.add_argument("--confidence", type=float, help="pruning confidence level")


def _overrides(args) -> dict:
    keys = {
        "TRAIN": "train", "TEST": "test", "STOPLIST": "stoplist", "SEED": "seed", "BAGS": "bags",
        "RESAMPLE": "resample", "PRUNE": "prune", "MIN_LEAF": "min_leaf", "CONFIDENCE": "confidence",
        "UNIGRAM_MIN_FREQ": "unigram_min_freq", "BIGRAM_MIN_FREQ": "bigram_min_freq",
        "BIGRAM_G2": "bigram_g2", "BIGRAM_TOP_N": "bigram_top_n", "COOC_MIN_FREQ": "cooc_min_freq",
        "COOC_G2": "cooc_g2", "COOC_WINDOW": "cooc_window", "CLASSIFIERS": "classifiers",
        "EXTERNAL": "external", "OUT": "out",
    }
    return {key: getattr(args, attr) for key, attr in keys.items() if getattr(args, attr, None) is not None}


def _experiment_config(args) -> config.ExperimentConfig:
    cfg = config.load_experiment_config(getattr(args, "config", None), _overrides(args))
    if cfg.train_path is None:
        raise ValidationError("no training file given (--train or TRAIN in --config)")
    return cfg


def _stoplist(cfg: config.ExperimentConfig):
    return load_stoplist(cfg.stoplist_path) if cfg.stoplist_path else default_stoplist("en")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_extract(args) -> int:
    cfg = _experiment_config(args)
    sample = load_lexical_sample(cfg.train_path, cfg.test_path)
    fs = build_feature_set(sample.train, args.view, _stoplist(cfg), cfg.features)
    path = save_feature_set(fs, args.out)
    print(f"{fs.width} {fs.view.value} features -> {path}")
    return 0


def cmd_train(args) -> int:
    cfg = _experiment_config(args)
    samples = load_lexical_samples(cfg.train_path, cfg.test_path)
    name = config.validate_classifier_name(args.ensemble)
    stoplist = _stoplist(cfg)
    classifiers = {
        word: train_classifier(sample, name, stoplist, cfg.features, cfg.tree, cfg.bagging)
        for word, sample in samples.items()
    }
    out = args.out or config.model_dir()
    save_models(classifiers, out)
    print(f"Trained {name} for {len(classifiers)} target words -> {out}")
    return 0


def cmd_classify(args) -> int:
    models = load_models(args.models)
    instances: list[Instance] = read_instances(args.test)
    missing = sorted({i.target_word for i in instances} - set(models))
    if missing:
        raise ValidationError(f"no model for target words {missing}")
    names = sorted({clf.name for clf in models.values()})
    system = args.name or (names[0] if len(names) == 1 else "lexvote")
    pred = merge_predictions(
        system,
        (predict(clf, (i for i in instances if i.target_word == word)) for word, clf in sorted(models.items())),
    )
    path = write_predictions(pred, args.out)
    print(f"Classified {len(pred.answers)} instances -> {path}")
    return 0


def cmd_score(args) -> int:
    gold = load_gold(args.gold)
    reports = [score(load_predictions(p), gold) for p in args.predictions]
    for r in reports:
        print(f"{r.system_name}\t{round_percent(r.correct, r.total)}%\t{r.correct}/{r.total}")
    if args.out:
        emit_reports(reports, [], args.out)
    return 0


def cmd_agree(args) -> int:
    gold = load_gold(args.gold)
    preds = [load_predictions(p) for p in args.predictions]
    if len(preds) < 2:
        raise ValidationError("agree needs at least two prediction files")
    tables = [pairwise_agreement(a, b, gold) for a, b in combinations(preds, 2)]
    if len(preds) > 2:
        tables.append(kway_agreement(preds, gold))

    for row in agreement_rows(t for t in tables if t.k == 2):
        print(
            f"{row['system_a']} {row['system_b']}\t"
            f"both {row['both_pct']}% ({row['both']})\t"
            f"one {row['one_pct']}% ({row['one']})\t"
            f"zero {row['zero_pct']}% ({row['zero']})"
        )
    for row in kway_rows(t for t in tables if t.k > 2):
        print(
            f"{row['systems']}\tall {row['all_pct']}% ({row['all_correct']})\t"
            f"none {row['none_pct']}% ({row['none_correct']})\tbound {row['bound_pct']}%"
        )
    if args.out:
        emit_reports([], tables, args.out)
    return 0


def cmd_experiment(args) -> int:
    result = run_experiment(_experiment_config(args))
    for report in sorted(result.scores, key=lambda r: (-r.accuracy, r.system_name)):
        print(f"{report.system_name}\t{round_percent(report.correct, report.total)}%\t{report.correct}/{report.total}")
    print(f"Reports -> {result.out_dir}")
    if not result.ok:
        raise RunError(f"{len(result.failures)} target word(s) failed: {', '.join(sorted(result.failures))}")
    return 0


def cmd_generate(args) -> int:
    from lexvote.seed import TARGET_WORDS, generate_corpus, write_corpus

    words = args.words or list(TARGET_WORDS)
    seed = args.seed if args.seed is not None else config.env_seed()
    train, test = write_corpus(generate_corpus(words, args.train_size, args.test_size, seed), args.out_dir)
    print(f"Wrote {train} and {test}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("lexvote.main:app", host=args.host, port=args.port)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lexvote", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="select the features of one view and write them")
    _add_corpus_args(p)
    _add_feature_args(p)
    p.add_argument("--view", default="C", choices=["U", "B", "C", "mixed"])
    p.add_argument("--out", type=Path, default=Path("features.jsonl"))
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("train", help="train one classifier per target word and save model bundles")
    _add_corpus_args(p)
    _add_feature_args(p)
    _add_learning_args(p)
    p.add_argument("--ensemble", "--view", dest="ensemble", default="UBC",
                   help="U, B, C, UB, UC, BC, UBC, mixed, stump or majority")
    p.add_argument("--out", type=Path, help="model root (default: LEXVOTE_MODEL_DIR)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="apply saved models to an instance file")
    p.add_argument("--models", type=Path, default=config.model_dir())
    p.add_argument("--test", type=Path, required=True)
    p.add_argument("--out", type=Path, default=Path("predictions.tsv"))
    p.add_argument("--name", help="system name (default: the model's)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("score", help="accuracy of prediction files against gold")
    p.add_argument("--gold", type=Path, required=True)
    p.add_argument("predictions", nargs="+", type=Path)
    p.add_argument("--out", type=Path, help="write accuracy reports here")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("agree", help="pairwise and k-way agreement of prediction files")
    p.add_argument("--gold", type=Path, required=True)
    p.add_argument("predictions", nargs="+", type=Path)
    p.add_argument("--out", type=Path, help="write agreement reports here")
    p.set_defaults(func=cmd_agree)

    p = sub.add_parser("experiment", help="train, predict, score and report every classifier")
    _add_corpus_args(p)
    _add_feature_args(p)
    _add_learning_args(p)
    p.add_argument("--classifiers", help="comma-separated report rows (default: all ten)")
    p.add_argument("--external", action="append", type=Path, help="extra system prediction file")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("generate", help="write a synthetic lexical sample corpus")
    p.add_argument("out_dir", type=Path)
    p.add_argument("--words", nargs="*")
    p.add_argument("--train-size", type=int, default=500)
    p.add_argument("--test-size", type=int, default=200)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)
    return parser


def configure_logging(verbosity: int) -> None:
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, config.LOG_LEVEL.upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return args.func(args)
    except LexvoteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
