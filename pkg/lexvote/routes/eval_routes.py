"""
Evaluation routes: accuracy and agreement over posted answers.
"""
from itertools import combinations

from fastapi import APIRouter
from pydantic import BaseModel

from lexvote.models import PredictionSet
from lexvote.utils.scoring import (
    exclusive_correct, kway_agreement, optimal_combination_bound, pairwise_agreement, score,
)

router = APIRouter()


class EvalRequest(BaseModel):
    gold: dict[str, str]
    predictions: dict[str, dict[str, str]]


def _prediction_sets(request: EvalRequest) -> list[PredictionSet]:
    return [PredictionSet(name, answers) for name, answers in request.predictions.items()]


def _table(t) -> dict:
    return {"systems": list(t.systems), "n": t.n, "counts": list(t.counts)}


@router.post("/score")
def score_predictions(request: EvalRequest):
    return [
        {"system": r.system_name, "accuracy": r.accuracy, "correct": r.correct, "total": r.total,
         "unanswered": r.unanswered, "unknown": r.unknown}
        for r in (score(p, request.gold) for p in _prediction_sets(request))
    ]


@router.post("/agree")
def agree(request: EvalRequest):
    """Pairwise tables for every pair plus one k-way table over all systems."""
    preds = _prediction_sets(request)
    table = kway_agreement(preds, request.gold)
    return {
        "pairwise": [_table(pairwise_agreement(a, b, request.gold)) for a, b in combinations(preds, 2)],
        "kway": _table(table),
        "optimal_combination_bound": optimal_combination_bound(preds, request.gold),
        "exclusive_correct": exclusive_correct(preds, request.gold),
    }
