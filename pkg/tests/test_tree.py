import random
from collections import Counter, defaultdict

import numpy as np
import pytest

from lexvote.exceptions import DomainError, ValidationError
from lexvote.models import DecisionTree, Leaf, Split, TreeParams
from lexvote.utils.tree import classify_tree, entropy, estimate_error, gain_ratio, train_stump, train_tree

UNPRUNED = TreeParams(min_leaf_instances=1, prune=False)


def random_dataset(rng: random.Random):
    width = rng.randint(1, 4)
    n = rng.randint(1, 8)
    vectors = np.array([[rng.random() < 0.5 for _ in range(width)] for _ in range(n)], dtype=bool)
    labels = [rng.choice("abc") for _ in range(n)]
    return vectors, labels


def training_accuracy(tree: DecisionTree, vectors, labels) -> int:
    return sum(classify_tree(tree, v) == y for v, y in zip(vectors, labels))


def best_lookup(vectors, labels) -> int:
    """Most instances any function of the vector can get right."""
    groups = defaultdict(Counter)
    for v, y in zip(vectors, labels):
        groups[tuple(v)][y] += 1
    return sum(max(c.values()) for c in groups.values())


def best_depth_one(vectors, labels) -> int:
    """Exhaustive search over the majority leaf and every single-feature split."""
    best = max(Counter(labels).values())
    for f in range(vectors.shape[1]):
        sides = (Counter(), Counter())
        for v, y in zip(vectors, labels):
            sides[int(v[f])][y] += 1
        best = max(best, sum(max(s.values(), default=0) for s in sides))
    return best


# ---------------------------------------------------------------------------
# Criteria
# ---------------------------------------------------------------------------

def test_entropy():
    assert entropy({"a": 5}) == pytest.approx(0.0)
    assert entropy({"a": 1, "b": 1}) == pytest.approx(1.0)
    assert entropy({"a": 3, "b": 1}) == pytest.approx(0.8113, abs=1e-4)
    with pytest.raises(DomainError):
        entropy({})


def test_gain_ratio():
    labels = ["a", "a", "b", "b"]
    assert gain_ratio([[True], [True], [False], [False]], labels, 0) == pytest.approx(1.0)
    assert gain_ratio([[True]] * 4, labels, 0) == 0.0
    assert gain_ratio([[True], [False], [True], [False]], labels, 0) == pytest.approx(0.0, abs=1e-12)


def test_estimate_error():
    assert estimate_error(0, 0) == 0
    assert estimate_error(2, 0) == pytest.approx(1.0)
    assert estimate_error(4, 2) > 0


# ---------------------------------------------------------------------------
# train_tree
# ---------------------------------------------------------------------------

def test_pure_labels_give_a_leaf():
    tree = train_tree([[True, False], [False, True], [True, True]], ["a", "a", "a"])
    assert tree.root == Leaf({"a": 3}, "a")


def test_determining_feature():
    vectors = [[True], [True], [False], [False]]
    labels = ["a", "a", "b", "b"]
    tree = train_tree(vectors, labels)
    assert isinstance(tree.root, Split) and tree.root.feature_index == 0
    assert tree.root.on_true.prediction == "a"
    assert tree.root.on_false.prediction == "b"
    assert training_accuracy(tree, np.array(vectors), labels) == 4


def test_zero_width_vectors():
    tree = train_tree(np.zeros((4, 0), dtype=bool), ["a", "a", "a", "b"])
    assert tree.width == 0
    assert tree.root.prediction == "a"
    assert classify_tree(tree, np.zeros(0, dtype=bool)) == "a"


def test_width_and_length_checks():
    with pytest.raises(ValidationError):
        train_tree([[True], [True, False]], ["a", "b"])
    with pytest.raises(ValidationError):
        train_tree([[True]], ["a", "b"])
    with pytest.raises(ValidationError):
        train_tree([], [])


def test_xor_needs_unpruned_growth():
    vectors = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=bool)
    labels = ["a", "b", "b", "a"]
    unpruned = train_tree(vectors, labels, UNPRUNED)
    assert training_accuracy(unpruned, vectors, labels) == 4
    pruned = train_tree(vectors, labels, TreeParams(min_leaf_instances=1))
    assert isinstance(pruned.root, Leaf)


def test_unpruned_tree_matches_lookup_oracle():
    rng = random.Random(38)
    for _ in range(100):
        vectors, labels = random_dataset(rng)
        tree = train_tree(vectors, labels, UNPRUNED)
        assert training_accuracy(tree, vectors, labels) == best_lookup(vectors, labels)


def test_stump_matches_depth_one_oracle():
    rng = random.Random(2)
    for _ in range(100):
        vectors, labels = random_dataset(rng)
        stump = train_stump(vectors, labels)
        assert stump.depth() <= 1
        assert training_accuracy(stump, vectors, labels) == best_depth_one(vectors, labels)


def test_pruning_never_grows_the_tree():
    rng = np.random.default_rng(5)
    for _ in range(20):
        vectors = rng.random((40, 6)) < 0.5
        labels = ["a" if v[0] ^ (rng.random() < 0.2) else "b" for v in vectors]
        pruned = train_tree(vectors, labels, TreeParams(min_leaf_instances=1))
        unpruned = train_tree(vectors, labels, UNPRUNED)
        assert pruned.node_count() <= unpruned.node_count()


def test_min_leaf_instances_respected():
    rng = np.random.default_rng(3)
    vectors = rng.random((60, 5)) < 0.5
    labels = [rng.choice(["a", "b", "c"]) for _ in range(60)]
    tree = train_tree(vectors, labels, TreeParams(min_leaf_instances=5, prune=False))
    assert all(leaf.total >= 5 for leaf in tree.leaves())


def test_no_split_with_identical_leaf_predictions():
    rng = np.random.default_rng(11)
    vectors = rng.random((80, 6)) < 0.5
    labels = ["a" if v[1] else rng.choice(["a", "b"]) for v in vectors]
    stack = [train_tree(vectors, labels).root]
    while stack:
        node = stack.pop()
        if isinstance(node, Split):
            if isinstance(node.on_true, Leaf) and isinstance(node.on_false, Leaf):
                assert node.on_true.prediction != node.on_false.prediction
            stack.extend((node.on_true, node.on_false))


def test_training_is_order_free():
    rng = np.random.default_rng(8)
    vectors = rng.random((30, 4)) < 0.5
    labels = [rng.choice(["a", "b"]) for _ in range(30)]
    order = rng.permutation(30)
    first = train_tree(vectors, labels)
    assert first == train_tree(vectors, labels)
    assert first == train_tree(vectors[order], [labels[i] for i in order])


def test_leaf_ties_use_priors_then_sense_id():
    assert train_tree([[True], [True]], ["b", "a"], UNPRUNED).root.prediction == "a"
    tree = train_tree([[True], [True]], ["b", "a"], UNPRUNED, priors={"a": 1, "b": 9})
    assert tree.root.prediction == "b"


# ---------------------------------------------------------------------------
# Stumps and classification
# ---------------------------------------------------------------------------

def test_stump_finds_predictive_feature():
    rng = np.random.default_rng(4)
    labels = [rng.choice(["a", "b"]) for _ in range(50)]
    noise = rng.random((50, 4)) < 0.5
    vectors = np.column_stack([noise[:, :2], [y == "a" for y in labels], noise[:, 2:]])
    stump = train_stump(vectors, labels)
    assert stump.root.feature_index == 2


def test_stump_without_information():
    stump = train_stump([[True], [False], [True], [False]], ["a", "a", "b", "b"])
    assert isinstance(stump.root, Leaf)


def test_stump_equals_depth_one_tree():
    vectors = [[True, False], [True, True], [False, False], [False, True]]
    labels = ["a", "a", "b", "b"]
    tree = train_tree(vectors, labels)
    assert tree.depth() == 1
    assert train_stump(vectors, labels) == tree


def test_classify_tree():
    leaf = DecisionTree(Leaf({"a": 1}, "a"), width=2)
    assert classify_tree(leaf, np.array([True, False])) == "a"
    split = DecisionTree(Split(1, Leaf({"b": 1}, "b"), Leaf({"a": 1}, "a"), {"a": 1, "b": 1}), width=2)
    assert classify_tree(split, np.array([False, True])) == "b"
    assert classify_tree(split, np.array([True, False])) == "a"
    with pytest.raises(ValidationError):
        classify_tree(split, np.array([True]))
