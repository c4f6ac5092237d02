"""
Fine-grained scoring and inter-system agreement.

Prediction and gold files share one format: `instance_id<TAB>sense` per
line. Scoring is exact string match over the gold instances; an instance a
system did not answer counts as wrong, an answer for an instance absent
from gold is ignored (both are logged).
"""
import logging
from collections.abc import Iterable, Mapping, Sequence
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

import numpy as np

from lexvote.exceptions import DomainError, ParseError, ValidationError
from lexvote.models import AgreementTable, Classifier, Instance, PredictionSet, ScoreReport
from lexvote.utils.corpus import read_lines

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Prediction files
# ---------------------------------------------------------------------------

def _read_pairs(path: Path) -> list[tuple[str, str]]:
    pairs, seen = [], set()
    for lineno, line in read_lines(path):
        if not line.strip():
            continue
        fields = line.rstrip("\r\n").split("\t")
        if len(fields) != 2 or not fields[0].strip() or not fields[1].strip():
            raise ParseError("expected instance_id<TAB>sense", path, lineno)
        instance_id, sense = fields[0].strip(), fields[1].strip()
        if instance_id in seen:
            raise ValidationError(f"{path}:{lineno}: more than one answer for {instance_id!r}")
        seen.add(instance_id)
        pairs.append((instance_id, sense))
    return pairs


def load_predictions(path: str | Path, system_name: str | None = None) -> PredictionSet:
    """System name defaults to the file stem."""
    path = Path(path)
    return PredictionSet(system_name or path.stem, dict(_read_pairs(path)))


def load_gold(path: str | Path) -> dict[str, str]:
    return dict(_read_pairs(Path(path)))


def write_predictions(pred: PredictionSet, path: str | Path) -> Path:
    """Answers sorted by instance_id."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        for instance_id in sorted(pred.answers):
            handle.write(f"{instance_id}\t{pred.answers[instance_id]}\n")
    return path


def predict(classifier: Classifier, instances: Iterable[Instance], system_name: str | None = None) -> PredictionSet:
    return PredictionSet.from_pairs(
        system_name or classifier.name,
        ((i.instance_id, classifier.classify(i)) for i in instances),
    )


def merge_predictions(system_name: str, parts: Iterable[PredictionSet]) -> PredictionSet:
    """Union of per-word prediction sets of one system."""
    return PredictionSet.from_pairs(system_name, (pair for p in parts for pair in p.answers.items()))


# ---------------------------------------------------------------------------
# Accuracy
# ---------------------------------------------------------------------------

def _require_gold(gold: Mapping[str, str]) -> list[str]:
    if not gold:
        raise DomainError("accuracy is undefined over an empty gold standard")
    return sorted(gold)


def score(pred: PredictionSet, gold: Mapping[str, str]) -> ScoreReport:
    ids = _require_gold(gold)
    unanswered = sum(1 for i in ids if i not in pred.answers)
    unknown = sum(1 for i in pred.answers if i not in gold)
    if unanswered:
        logger.warning("%s: %d gold instances unanswered, counted wrong", pred.system_name, unanswered)
    if unknown:
        logger.warning("%s: %d answers for instances not in gold, ignored", pred.system_name, unknown)

    correct = sum(1 for i in ids if pred.answers.get(i) == gold[i])
    return ScoreReport(
        system_name=pred.system_name,
        total=len(ids),
        correct=correct,
        accuracy=correct / len(ids),
        unanswered=unanswered,
        unknown=unknown,
    )


# ---------------------------------------------------------------------------
# Agreement
# ---------------------------------------------------------------------------

def correctness_matrix(preds: Sequence[PredictionSet], gold: Mapping[str, str]) -> np.ndarray:
    """(k, n) booleans: system j got gold instance i right (instances sorted by id)."""
    ids = _require_gold(gold)
    return np.array(
        [[p.answers.get(i) == gold[i] for i in ids] for p in preds],
        dtype=bool,
    ).reshape(len(preds), len(ids))


def _agreement(preds: Sequence[PredictionSet], gold: Mapping[str, str]) -> AgreementTable:
    correct = correctness_matrix(preds, gold)
    counts = np.bincount(correct.sum(axis=0), minlength=len(preds) + 1)
    return AgreementTable(
        systems=tuple(p.system_name for p in preds),
        n=correct.shape[1],
        counts=tuple(int(c) for c in counts),
    )


def _require_several(preds: Sequence[PredictionSet]) -> None:
    if len(preds) < 2:
        raise ValidationError(f"agreement needs at least 2 prediction sets, got {len(preds)}")


def pairwise_agreement(a: PredictionSet, b: PredictionSet, gold: Mapping[str, str]) -> AgreementTable:
    """Buckets both / one / zero correct."""
    return _agreement((a, b), gold)


def kway_agreement(preds: Sequence[PredictionSet], gold: Mapping[str, str]) -> AgreementTable:
    """Buckets by number of systems correct, from none to all."""
    _require_several(preds)
    return _agreement(preds, gold)


def optimal_combination_bound(preds: Sequence[PredictionSet], gold: Mapping[str, str]) -> float:
    """Accuracy of an oracle picking, per instance, any system that is right."""
    table = kway_agreement(preds, gold)
    return 1.0 - table.none_correct / table.n


def disagreement_rate(a: PredictionSet, b: PredictionSet, gold: Mapping[str, str]) -> float:
    """Share of instances exactly one of the two systems gets right."""
    table = pairwise_agreement(a, b, gold)
    return table.one / table.n


def exclusive_correct(preds: Sequence[PredictionSet], gold: Mapping[str, str]) -> dict[str, int]:
    """Per system, the number of instances no other system gets right."""
    _require_several(preds)
    correct = correctness_matrix(preds, gold)
    alone = correct & (correct.sum(axis=0) == 1)
    return {p.system_name: int(alone[j].sum()) for j, p in enumerate(preds)}


# ---------------------------------------------------------------------------
# Rounding
# ---------------------------------------------------------------------------

def round_percent(count: int, n: int, places: int = 1) -> Decimal:
    """100 * count / n rounded half-up."""
    if n <= 0:
        raise DomainError("percentage of an empty set is undefined")
    quantum = Decimal(1).scaleb(-places)
    return (Decimal(100) * Decimal(count) / Decimal(n)).quantize(quantum, rounding=ROUND_HALF_UP)
