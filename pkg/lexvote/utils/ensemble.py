"""
Bagging, majority-vote ensembles and the two baselines.

Vote rule (within a bag and across ensemble members alike): most votes
wins; ties go to the sense with the higher training frequency, then to the
lexicographically smaller sense id.

Feature selection runs once per view on the full training set; only tree
learning sees the bootstrap resamples. Each view draws its resamples from
its own RNG seeded with (master seed XOR crc32(view)), so a view's trees do
not depend on which other views are trained alongside it.
"""
import logging
import zlib
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence

import numpy as np

from lexvote.exceptions import ValidationError
from lexvote.models import (
    BaggedClassifier, BaggingParams, Classifier, Ensemble, EnsembleSpec, FeatureExtractionConfig,
    Instance, LexicalSample, MajorityClassifier, Stoplist, StumpClassifier, TreeParams, View,
)
from lexvote.utils.features import NO_STOPLIST, build_feature_set, vectorize, vectorize_all
from lexvote.utils.tree import classify_tree, train_stump, train_tree

logger = logging.getLogger(__name__)

SEED_MASK = (1 << 64) - 1


def derive_seed(master: int, view: View | str) -> int:
    """Per-view seed: master XOR a stable tag of the view name."""
    return (master ^ zlib.crc32(View(view).value.encode("utf-8"))) & SEED_MASK


def majority_vote(votes: Iterable[str], priors: Mapping[str, int]) -> str:
    tally = Counter(votes)
    if not tally:
        raise ValidationError("cannot take a vote over zero votes")
    return min(tally, key=lambda s: (-tally[s], -priors.get(s, 0), s))


def _check_target(target_word: str, instance: Instance) -> None:
    if instance.target_word != target_word:
        raise ValidationError(
            f"instance {instance.instance_id!r} targets {instance.target_word!r}, classifier targets {target_word!r}"
        )


def _require_training(sample: LexicalSample) -> None:
    if not sample.train:
        raise ValidationError(f"{sample.target_word!r}: empty training set")


# ---------------------------------------------------------------------------
# Bagged trees
# ---------------------------------------------------------------------------

def train_bagged(
    sample: LexicalSample,
    view: View | str,
    stoplist: Stoplist = NO_STOPLIST,
    config: FeatureExtractionConfig | None = None,
    tree_params: TreeParams | None = None,
    bag_params: BaggingParams | None = None,
) -> BaggedClassifier:
    _require_training(sample)
    view = View(view)
    bag_params = bag_params or BaggingParams()
    tree_params = tree_params or TreeParams()

    fs = build_feature_set(sample.train, view, stoplist, config)
    X = vectorize_all(sample.train, fs)
    labels = np.array([i.gold_sense for i in sample.train], dtype=object)
    priors = sample.sense_priors()
    rng = np.random.default_rng(derive_seed(bag_params.seed, view))
    n = len(sample.train)

    trees = []
    for _ in range(bag_params.num_bags):
        rows = rng.integers(0, n, size=n) if bag_params.resample else np.arange(n)
        trees.append(train_tree(X[rows], list(labels[rows]), tree_params, priors))

    logger.info(
        "%s/%s: trained %d trees over %d features", sample.target_word, view.value, len(trees), fs.width
    )
    return BaggedClassifier(
        target_word=sample.target_word,
        view=view,
        feature_set=fs,
        trees=tuple(trees),
        params=bag_params,
        sense_priors=priors,
    )


def classify_bagged(clf: BaggedClassifier, instance: Instance) -> str:
    _check_target(clf.target_word, instance)
    vector = vectorize(instance, clf.feature_set)
    return majority_vote((classify_tree(tree, vector) for tree in clf.trees), clf.sense_priors)


# ---------------------------------------------------------------------------
# Ensembles
# ---------------------------------------------------------------------------

def assemble_ensemble(
    spec: EnsembleSpec | str,
    members_by_view: Mapping[View, BaggedClassifier],
    sense_priors: Mapping[str, int],
) -> Ensemble:
    """Ensemble over already trained views."""
    spec = EnsembleSpec.parse(spec)
    missing = [v.value for v in spec.members if v not in members_by_view]
    if missing:
        raise ValidationError(f"ensemble {spec.name} is missing trained views {missing}")
    return Ensemble(
        spec=spec,
        members=tuple(members_by_view[v] for v in spec.members),
        sense_priors=dict(sense_priors),
    )


def train_ensemble(
    sample: LexicalSample,
    spec: EnsembleSpec | str,
    stoplist: Stoplist = NO_STOPLIST,
    config: FeatureExtractionConfig | None = None,
    tree_params: TreeParams | None = None,
    bag_params: BaggingParams | None = None,
) -> Ensemble:
    spec = EnsembleSpec.parse(spec)
    members = {
        view: train_bagged(sample, view, stoplist, config, tree_params, bag_params)
        for view in spec.members
    }
    return assemble_ensemble(spec, members, sample.sense_priors())


def classify_ensemble(ensemble: Ensemble, instance: Instance) -> str:
    return majority_vote((classify_bagged(m, instance) for m in ensemble.members), ensemble.sense_priors)


# ---------------------------------------------------------------------------
# Baselines
# ---------------------------------------------------------------------------

def train_stump_classifier(
    sample: LexicalSample,
    config: FeatureExtractionConfig | None = None,
) -> StumpClassifier:
    """Decision stump over the co-occurrence view."""
    _require_training(sample)
    fs = build_feature_set(sample.train, View.C, NO_STOPLIST, config)
    priors = sample.sense_priors()
    tree = train_stump(vectorize_all(sample.train, fs), [i.gold_sense for i in sample.train], priors)
    return StumpClassifier(target_word=sample.target_word, feature_set=fs, tree=tree, sense_priors=priors)


def classify_stump(stump: StumpClassifier, instance: Instance) -> str:
    _check_target(stump.target_word, instance)
    return classify_tree(stump.tree, vectorize(instance, stump.feature_set))


def train_majority(sample: LexicalSample) -> MajorityClassifier:
    _require_training(sample)
    priors = sample.sense_priors()
    sense = min(priors, key=lambda s: (-priors[s], s))
    return MajorityClassifier(target_word=sample.target_word, sense=sense, sense_priors=priors)


def classify_majority(clf: MajorityClassifier, instance: Instance) -> str:
    return clf.sense


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

def train_classifier(
    sample: LexicalSample,
    name: str,
    stoplist: Stoplist = NO_STOPLIST,
    config: FeatureExtractionConfig | None = None,
    tree_params: TreeParams | None = None,
    bag_params: BaggingParams | None = None,
) -> Classifier:
    """Train a classifier by its report label: an ensemble name, 'stump' or 'majority'."""
    label = name.strip().lower()
    if label == "majority":
        return train_majority(sample)
    if label == "stump":
        return train_stump_classifier(sample, config)
    return train_ensemble(sample, name, stoplist, config, tree_params, bag_params)


def classify_all(classifier: Classifier, instances: Sequence[Instance]) -> list[tuple[str, str]]:
    """(instance_id, sense) for every instance, in input order."""
    return [(i.instance_id, classifier.classify(i)) for i in instances]
