"""
Classification routes: list the served models and disambiguate instances.
Models are the bundles found under LEXVOTE_MODEL_DIR, one per target word.
"""
from functools import lru_cache
from pathlib import Path

from fastapi import APIRouter, Depends, HTTPException
from pydantic import BaseModel

from lexvote.config import model_dir
from lexvote.models import Classifier, Instance
from lexvote.utils.bundle import MANIFEST, load_models

router = APIRouter()


class InstanceIn(BaseModel):
    instance_id: str
    target_word: str
    tokens: list[str]
    target_index: int


class ClassifyRequest(BaseModel):
    instances: list[InstanceIn]


class Answer(BaseModel):
    instance_id: str
    sense: str
    system: str


@lru_cache(maxsize=4)
def _load(root: str, stamp: tuple[tuple[str, int], ...]) -> dict[str, Classifier]:
    return load_models(root)


def _bundle_stamp(root: Path) -> tuple[tuple[str, int], ...]:
    """Manifest paths and mtimes; changes whenever a bundle is added, removed or rewritten."""
    return tuple((str(p), p.stat().st_mtime_ns) for p in sorted(root.glob(f"*/{MANIFEST}")))


def get_models() -> dict[str, Classifier]:
    root = model_dir()
    return _load(str(root), _bundle_stamp(root))


@router.get("/models")
def list_models(models: dict[str, Classifier] = Depends(get_models)):
    return [
        {"target_word": word, "system": clf.name, "senses": sorted(clf.sense_priors)}
        for word, clf in sorted(models.items())
    ]


@router.post("/classify", response_model=list[Answer])
def classify(request: ClassifyRequest, models: dict[str, Classifier] = Depends(get_models)):
    """Same lowercasing as the instance file loader."""
    answers = []
    for item in request.instances:
        instance = Instance(
            instance_id=item.instance_id,
            target_word=item.target_word.lower(),
            tokens=tuple(t.lower() for t in item.tokens),
            target_index=item.target_index,
        )
        classifier = models.get(instance.target_word)
        if classifier is None:
            raise HTTPException(status_code=404, detail=f"no model for target word {instance.target_word!r}")
        answers.append(Answer(instance_id=instance.instance_id, sense=classifier.classify(instance), system=classifier.name))
    return answers
