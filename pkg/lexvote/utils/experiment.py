"""
End-to-end experiment: train every requested classifier per target word,
predict the test instances, score, and write the report directory.

Output layout (under ExperimentConfig.out_dir):
    predictions/<system>.tsv   answers of every system over all words
    gold.tsv                   gold senses of the scored test instances
    accuracy.{tsv,txt}         one row per system
    agreement.{tsv,txt}        every system pair
    kway.{tsv,txt}             U+B+C, UBC+stump+majority, and all systems together
    accuracy_by_word.tsv       word x system accuracy
    failures.tsv               words that could not be trained, with the error

Words are processed independently; a word that fails is logged, recorded in
failures.tsv and left out of scoring. Reports contain no timestamps, so two
runs with the same config and seed write identical files.
"""
import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from lexvote.config import BASELINES, ExperimentConfig
from lexvote.exceptions import LexvoteError, ValidationError
from lexvote.models import (
    AgreementTable, BaggedClassifier, EnsembleSpec, LexicalSample, PredictionSet, ScoreReport, Stoplist, View,
)
from lexvote.utils.corpus import default_stoplist, load_lexical_samples, load_stoplist
from lexvote.utils.ensemble import (
    assemble_ensemble, classify_all, majority_vote, train_bagged, train_majority, train_stump_classifier,
)
from lexvote.utils.reports import emit_reports, write_accuracy_by_word, write_tsv
from lexvote.utils.scoring import (
    kway_agreement, load_predictions, merge_predictions, pairwise_agreement, score, write_predictions,
)

logger = logging.getLogger(__name__)

KWAY_GROUPS = (("U", "B", "C"), ("UBC", "stump", "majority"))


class RunError(LexvoteError):
    """The experiment finished but at least one target word failed."""


@dataclass
class ExperimentResult:
    out_dir: Path
    systems: tuple[str, ...]
    predictions: dict[str, PredictionSet] = field(default_factory=dict)
    scores: list[ScoreReport] = field(default_factory=list)
    pairwise: list[AgreementTable] = field(default_factory=list)
    kway: list[AgreementTable] = field(default_factory=list)
    per_word: dict[str, dict[str, ScoreReport]] = field(default_factory=dict)
    failures: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures


def _views_needed(classifiers: Sequence[str]) -> list[View]:
    views = []
    for name in classifiers:
        if name in BASELINES:
            continue
        for view in EnsembleSpec.parse(name).members:
            if view not in views:
                views.append(view)
    return views


def run_word(sample: LexicalSample, config: ExperimentConfig, stoplist: Stoplist) -> dict[str, dict[str, str]]:
    """
    Train and apply every requested classifier for one word.
    Returns system name -> {instance_id: sense}.
    """
    members: dict[View, BaggedClassifier] = {
        view: train_bagged(sample, view, stoplist, config.features, config.tree, config.bagging)
        for view in _views_needed(config.classifiers)
    }
    member_answers = {view: dict(classify_all(clf, sample.test)) for view, clf in members.items()}

    answers: dict[str, dict[str, str]] = {}
    for name in config.classifiers:
        if name == "majority":
            answers[name] = dict(classify_all(train_majority(sample), sample.test))
        elif name == "stump":
            answers[name] = dict(classify_all(train_stump_classifier(sample, config.features), sample.test))
        else:
            ensemble = assemble_ensemble(name, members, sample.sense_priors())
            # members were already applied once per view; vote over their answers
            answers[name] = {
                i.instance_id: majority_vote(
                    (member_answers[v][i.instance_id] for v in ensemble.spec.members), ensemble.sense_priors
                )
                for i in sample.test
            }
    return answers


def _kway_groups(systems: Sequence[str]) -> list[tuple[str, ...]]:
    groups = [g for g in KWAY_GROUPS if all(s in systems for s in g)]
    if len(systems) >= 3 and tuple(systems) not in groups:
        groups.append(tuple(systems))
    return groups


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    if config.train_path is None:
        raise ValidationError("no training file given (TRAIN / --train)")
    samples = load_lexical_samples(config.train_path, config.test_path)
    stoplist = load_stoplist(config.stoplist_path) if config.stoplist_path else default_stoplist("en")
    externals = [load_predictions(path) for path in config.external_paths]

    systems = (*config.classifiers, *(p.system_name for p in externals))
    if len(set(systems)) != len(systems):
        raise ValidationError(f"system names collide: {systems!r}")
    result = ExperimentResult(out_dir=Path(config.out_dir), systems=systems)

    parts: dict[str, list[PredictionSet]] = {name: [] for name in config.classifiers}
    gold: dict[str, str] = {}
    word_gold: dict[str, dict[str, str]] = {}
    word_answers: dict[str, dict[str, dict[str, str]]] = {}
    for word, sample in samples.items():
        try:
            per_system = run_word(sample, config, stoplist)
        except LexvoteError as exc:
            logger.warning("Word %r failed: %s", word, exc)
            result.failures[word] = str(exc)
            continue
        for name, word_pred in per_system.items():
            parts[name].append(PredictionSet(name, word_pred))
        word_answers[word] = per_system
        word_gold[word] = sample.gold
        gold.update(sample.gold)
        logger.info("Word %r: %d train, %d test", word, len(sample.train), len(sample.test))

    result.predictions = {name: merge_predictions(name, parts[name]) for name in config.classifiers}
    result.predictions.update({p.system_name: p for p in externals})
    _score_all(result, gold, word_gold, word_answers)
    _write_outputs(result, gold)
    return result


def _score_all(result: ExperimentResult, gold, word_gold, word_answers) -> None:
    if not gold:
        logger.warning("No gold senses among the test instances; reports will be empty")
        return
    preds = [result.predictions[s] for s in result.systems]
    result.scores = [score(p, gold) for p in preds]
    result.pairwise = [pairwise_agreement(a, b, gold) for a, b in combinations(preds, 2)]
    result.kway = [
        kway_agreement([result.predictions[s] for s in group], gold) for group in _kway_groups(result.systems)
    ]
    for word, wgold in word_gold.items():
        if wgold:
            result.per_word[word] = {
                name: score(PredictionSet(name, word_pred), wgold)
                for name, word_pred in word_answers[word].items()
            }


def _write_outputs(result: ExperimentResult, gold: dict[str, str]) -> None:
    out = result.out_dir
    for name, pred in result.predictions.items():
        write_predictions(pred, out / "predictions" / f"{name}.tsv")
    write_predictions(PredictionSet("gold", gold), out / "gold.tsv")
    emit_reports(result.scores, [*result.pairwise, *result.kway], out)
    write_accuracy_by_word(result.per_word, result.systems, out / "accuracy_by_word.tsv")
    write_tsv(
        out / "failures.tsv",
        ("word", "error"),
        [{"word": w, "error": e} for w, e in sorted(result.failures.items())],
    )
    logger.info("Experiment reports written to %s", out)
