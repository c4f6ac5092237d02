import random

import pytest

from lexvote.exceptions import ValidationError
from lexvote.models import (
    BaggingParams, Ensemble, EnsembleSpec, Instance, LexicalSample, MajorityClassifier, StumpClassifier, TreeParams,
    View,
)
from lexvote.seed import generate_lexical_sample
from lexvote.utils.ensemble import (
    assemble_ensemble, classify_bagged, classify_ensemble, derive_seed, majority_vote, train_bagged,
    train_classifier, train_ensemble, train_majority,
)
from lexvote.utils.features import vectorize_all
from lexvote.utils.tree import classify_tree, train_tree

SINGLE_TREE = BaggingParams(num_bags=1, resample=False)


def two_sense_sample(n: int = 30, seed: int = 0) -> LexicalSample:
    """Sense fully determined by the word after the target."""
    rng = random.Random(seed)
    noise = ["the", "a", "old", "city", "went", "saw", "big", "road"]
    instances = []
    for i in range(n):
        sense, collocate = ("money", "loan") if i % 2 else ("river", "mud")
        tokens = [rng.choice(noise) for _ in range(3)] + ["bank", collocate] + [rng.choice(noise) for _ in range(3)]
        instances.append(Instance(f"b.{i}", "bank", tuple(tokens), 3, sense))
    return LexicalSample("bank", instances)


# ---------------------------------------------------------------------------
# Votes
# ---------------------------------------------------------------------------

def test_strict_majority():
    assert majority_vote(["a", "a", "b"], {}) == "a"


def test_prior_breaks_ties():
    assert majority_vote(["a", "b"], {"a": 10, "b": 5}) == "a"
    assert majority_vote(["a", "b", "c"], {"a": 5, "b": 5, "c": 9}) == "c"


def test_sense_id_breaks_remaining_ties():
    assert majority_vote(["b", "a"], {"a": 3, "b": 3}) == "a"


def test_empty_vote():
    with pytest.raises(ValidationError):
        majority_vote([], {})


def test_derive_seed():
    seeds = {derive_seed(0, view) for view in View}
    assert len(seeds) == len(View)
    assert derive_seed(7, "U") == derive_seed(7, View.U)
    assert 0 <= derive_seed(-1, View.C) < 2 ** 64


# ---------------------------------------------------------------------------
# Bagging
# ---------------------------------------------------------------------------

def test_single_unresampled_bag_is_one_tree():
    for seed in range(20):
        sample = generate_lexical_sample("line", n_train=40, n_test=15, seed=seed)
        bagged = train_bagged(sample, View.C, bag_params=SINGLE_TREE)
        vectors = vectorize_all(sample.train, bagged.feature_set)
        tree = train_tree(vectors, [i.gold_sense for i in sample.train], TreeParams(), sample.sense_priors())
        assert bagged.trees == (tree,)
        test_vectors = vectorize_all(sample.test, bagged.feature_set)
        for instance, vector in zip(sample.test, test_vectors):
            assert classify_bagged(bagged, instance) == classify_tree(tree, vector)


def test_bagging_is_deterministic(small_sample):
    params = BaggingParams(num_bags=5, seed=3)
    first = train_bagged(small_sample, View.B, bag_params=params)
    second = train_bagged(small_sample, View.B, bag_params=params)
    assert first.trees == second.trees
    assert len(first.trees) == 5


def test_feature_set_does_not_depend_on_seed(small_sample):
    a = train_bagged(small_sample, View.C, bag_params=BaggingParams(num_bags=2, seed=1))
    b = train_bagged(small_sample, View.C, bag_params=BaggingParams(num_bags=2, seed=99))
    assert a.feature_set == b.feature_set


def test_every_bag_learns_the_collocate():
    sample = two_sense_sample()
    bagged = train_bagged(sample, View.C, bag_params=BaggingParams(num_bags=10, seed=0))
    vectors = vectorize_all(sample.train, bagged.feature_set)
    for tree in bagged.trees:
        assert [classify_tree(tree, v) for v in vectors] == [i.gold_sense for i in sample.train]


def test_empty_training_set():
    with pytest.raises(ValidationError):
        train_bagged(LexicalSample("bank"), View.U)
    with pytest.raises(ValidationError):
        train_majority(LexicalSample("bank"))


def test_wrong_target_word(small_sample):
    bagged = train_bagged(small_sample, View.C, bag_params=SINGLE_TREE)
    with pytest.raises(ValidationError):
        classify_bagged(bagged, Instance("x", "line", ("line", "wire"), 0))


# ---------------------------------------------------------------------------
# Ensembles
# ---------------------------------------------------------------------------

def test_single_member_ensemble_equals_member(small_sample):
    params = BaggingParams(num_bags=3, seed=5)
    for view in View:
        member = train_bagged(small_sample, view, bag_params=params)
        ensemble = assemble_ensemble(EnsembleSpec((view,)), {view: member}, small_sample.sense_priors())
        for instance in small_sample.test:
            assert classify_ensemble(ensemble, instance) == classify_bagged(member, instance)


def test_members_match_standalone_views(small_sample):
    params = BaggingParams(num_bags=2, seed=11)
    ensemble = train_ensemble(small_sample, "UBC", bag_params=params)
    assert [m.view for m in ensemble.members] == [View.U, View.B, View.C]
    assert ensemble.members[0].trees == train_bagged(small_sample, View.U, bag_params=params).trees


def test_unanimous_members_win(small_sample):
    ensemble = train_ensemble(small_sample, "UBC", bag_params=BaggingParams(num_bags=3))
    for instance in small_sample.test:
        votes = {classify_bagged(m, instance) for m in ensemble.members}
        if len(votes) == 1:
            assert ensemble.classify(instance) == votes.pop()


def test_identical_members(small_sample):
    member = train_bagged(small_sample, View.C, bag_params=BaggingParams(num_bags=3))
    ensemble = Ensemble(EnsembleSpec((View.C,)), (member, member, member), small_sample.sense_priors())
    for instance in small_sample.test:
        assert ensemble.classify(instance) == member.classify(instance)


def test_assemble_requires_trained_views(small_sample):
    member = train_bagged(small_sample, View.C, bag_params=SINGLE_TREE)
    with pytest.raises(ValidationError):
        assemble_ensemble("UC", {View.C: member}, {})


@pytest.mark.parametrize("label, members", [
    ("UBC", (View.U, View.B, View.C)),
    ("cu", (View.U, View.C)),
    ("mixed", (View.mixed,)),
])
def test_ensemble_spec(label, members):
    assert EnsembleSpec.parse(label).members == members


@pytest.mark.parametrize("label", ["", "UU", "Umixed", "X"])
def test_bad_ensemble_spec(label):
    with pytest.raises(ValidationError):
        EnsembleSpec.parse(label)


# ---------------------------------------------------------------------------
# Baselines
# ---------------------------------------------------------------------------

def sample_with_senses(senses):
    return LexicalSample(
        "w", [Instance(f"w.{n}", "w", ("w",), 0, s) for n, s in enumerate(senses)],
        [Instance("t.1", "w", ("w", "z"), 0, "b")],
    )


def test_majority_classifier():
    clf = train_majority(sample_with_senses(["a", "a", "a", "b"]))
    assert clf.sense == "a"
    assert clf.classify(Instance("t", "w", ("w",), 0)) == "a"


def test_majority_tie_is_lexicographic():
    assert train_majority(sample_with_senses(["b", "a", "b", "a"])).sense == "a"


def test_train_classifier_dispatch(small_sample):
    params = BaggingParams(num_bags=1)
    assert isinstance(train_classifier(small_sample, "majority"), MajorityClassifier)
    assert isinstance(train_classifier(small_sample, "stump"), StumpClassifier)
    ensemble = train_classifier(small_sample, "bc", bag_params=params)
    assert isinstance(ensemble, Ensemble) and ensemble.name == "BC"


def test_stump_classifier_uses_cooccurrences(small_sample):
    stump = train_classifier(small_sample, "stump")
    assert stump.feature_set.view is View.C
    assert stump.tree.depth() <= 1
    assert all(stump.classify(i) in small_sample.sense_inventory for i in small_sample.test)
