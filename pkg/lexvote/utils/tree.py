"""
C4.5-style decision trees over binary feature vectors.

Growth picks the split with the highest gain ratio among features with
positive information gain (ties -> lower feature index). A split is
admissible only if both children receive at least min_leaf_instances
training instances.

Pruning is the pessimistic error-based subtree replacement of C4.5: each
node's error is estimated by the upper confidence limit of the binomial
error rate at confidence CF, and a subtree is replaced by a leaf when the
leaf's estimate does not exceed the sum of its children's estimates.
"""
import logging
import math
from collections.abc import Mapping, Sequence
from typing import NamedTuple

import numpy as np
from scipy.special import xlogy
from scipy.stats import entropy as shannon_entropy
from scipy.stats import norm

from lexvote.exceptions import DomainError, ValidationError
from lexvote.models import BinaryVector, DecisionTree, Leaf, Node, Split, TreeParams

logger = logging.getLogger(__name__)

MIN_GAIN = 1e-12


# ---------------------------------------------------------------------------
# Split criteria
# ---------------------------------------------------------------------------

def entropy(distribution: Mapping[str, int]) -> float:
    """Shannon entropy of a sense -> count distribution, in bits."""
    counts = np.array([c for c in distribution.values()], dtype=float)
    if counts.size == 0 or counts.sum() <= 0:
        raise DomainError("entropy of an empty distribution is undefined")
    return float(shannon_entropy(counts, base=2))


def _row_entropy(counts: np.ndarray) -> np.ndarray:
    """Entropy in bits of every row of a count matrix; empty rows give 0."""
    totals = counts.sum(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = (xlogy(totals, totals) - xlogy(counts, counts).sum(axis=-1)) / (totals * math.log(2))
    return np.where(totals > 0, h, 0.0)


class SplitScores(NamedTuple):
    gain: np.ndarray
    ratio: np.ndarray
    n_true: np.ndarray
    n_false: np.ndarray


def _split_scores(X: np.ndarray, Y: np.ndarray) -> SplitScores:
    """
    Gain and gain ratio of every column of X.

    X: (n, F) bool, Y: (n, S) one-hot sense indicators.
    """
    n = X.shape[0]
    class_totals = Y.sum(axis=0)
    true_counts = X.T.astype(np.int64) @ Y
    false_counts = class_totals[None, :] - true_counts
    n_true = true_counts.sum(axis=1)
    n_false = n - n_true

    parent = _row_entropy(class_totals[None, :])[0]
    gain = parent - (n_true * _row_entropy(true_counts) + n_false * _row_entropy(false_counts)) / n
    split_info = _row_entropy(np.stack([n_true, n_false], axis=1))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(split_info > 0, gain / split_info, 0.0)
    return SplitScores(gain=gain, ratio=ratio, n_true=n_true, n_false=n_false)


def _as_matrix(vectors: Sequence[BinaryVector] | np.ndarray, labels: Sequence[str]) -> np.ndarray:
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        X = vectors.astype(bool, copy=False)
    else:
        widths = {len(v) for v in vectors}
        if len(widths) > 1:
            raise ValidationError(f"vectors have different widths {sorted(widths)}")
        width = widths.pop() if widths else 0
        X = np.array([np.asarray(v, dtype=bool) for v in vectors], dtype=bool).reshape(len(vectors), width)
    if X.shape[0] != len(labels):
        raise ValidationError(f"{X.shape[0]} vectors but {len(labels)} labels")
    if X.shape[0] < 1:
        raise ValidationError("cannot train a tree on zero instances")
    return X


def _one_hot(labels: Sequence[str]) -> tuple[np.ndarray, list[str]]:
    senses = sorted(set(labels))
    position = {s: i for i, s in enumerate(senses)}
    Y = np.zeros((len(labels), len(senses)), dtype=np.int64)
    Y[np.arange(len(labels)), [position[s] for s in labels]] = 1
    return Y, senses


def gain_ratio(vectors: Sequence[BinaryVector] | np.ndarray, labels: Sequence[str], feature_index: int) -> float:
    """Information gain of a binary split divided by its split information; 0 when degenerate."""
    X = _as_matrix(vectors, labels)
    if not 0 <= feature_index < X.shape[1]:
        raise ValidationError(f"feature_index {feature_index} out of range for width {X.shape[1]}")
    Y, _ = _one_hot(labels)
    return float(_split_scores(X[:, [feature_index]], Y).ratio[0])


# ---------------------------------------------------------------------------
# Leaves
# ---------------------------------------------------------------------------

def choose_sense(counts: Mapping[str, int], priors: Mapping[str, int]) -> str:
    """Highest count, then higher training prior, then smaller sense id."""
    return min(counts, key=lambda s: (-counts[s], -priors.get(s, 0), s))


def _leaf(counts: Mapping[str, int], priors: Mapping[str, int]) -> Leaf:
    distribution = {s: int(c) for s, c in sorted(counts.items()) if c > 0}
    return Leaf(distribution=distribution, prediction=choose_sense(distribution, priors))


def _counts(Y: np.ndarray, senses: list[str]) -> dict[str, int]:
    return {s: int(c) for s, c in zip(senses, Y.sum(axis=0)) if c > 0}


# ---------------------------------------------------------------------------
# Growth
# ---------------------------------------------------------------------------

def _grow(X, Y, senses, params: TreeParams, priors) -> Node:
    distribution = _counts(Y, senses)
    leaf = _leaf(distribution, priors)
    if len(distribution) <= 1 or X.shape[1] == 0 or X.shape[0] < 2 * params.min_leaf_instances:
        return leaf

    scores = _split_scores(X, Y)
    admissible = (scores.n_true >= params.min_leaf_instances) & (scores.n_false >= params.min_leaf_instances)
    informative = admissible & (scores.gain > MIN_GAIN)
    if informative.any():
        best = int(np.argmax(np.where(informative, scores.ratio, -np.inf)))
    elif not params.prune and admissible.any():
        # unpruned trees keep splitting impure nodes on zero-gain features
        best = int(np.argmax(admissible))
    else:
        return leaf

    mask = X[:, best]
    on_true = _grow(X[mask], Y[mask], senses, params, priors)
    on_false = _grow(X[~mask], Y[~mask], senses, params, priors)
    return Split(feature_index=best, on_true=on_true, on_false=on_false, distribution=distribution)


# ---------------------------------------------------------------------------
# Pruning
# ---------------------------------------------------------------------------

def _confidence_coefficient(cf: float) -> float:
    """Squared one-sided normal deviate for confidence level cf."""
    return max(float(norm.isf(cf)), 0.0) ** 2


def estimate_error(total: float, errors: float, cf: float = 0.25) -> float:
    """
    Extra errors predicted on unseen cases at a node with `total` training
    cases of which `errors` are misclassified (upper confidence limit of the
    binomial error rate, with the usual small-count corrections).
    """
    coefficient = _confidence_coefficient(cf)
    if total == 0:
        return 0.0
    if errors < 1e-6:
        return total * (1 - math.exp(math.log(cf) / total))
    if errors < 0.9999:
        v = total * (1 - math.exp(math.log(cf) / total))
        return v + errors * (estimate_error(total, 1.0, cf) - v)
    if errors + 0.5 >= total:
        return 0.67 * (total - errors)
    pr = (
        errors + 0.5 + coefficient / 2
        + math.sqrt(coefficient * ((errors + 0.5) * (1 - (errors + 0.5) / total) + coefficient / 4))
    ) / (total + coefficient)
    return total * pr - errors


def _leaf_estimate(leaf: Leaf, cf: float) -> float:
    return leaf.errors + estimate_error(leaf.total, leaf.errors, cf)


def _prune(node: Node, cf: float, priors) -> tuple[Node, float]:
    """Bottom-up subtree replacement; returns the node and its estimated errors."""
    if isinstance(node, Leaf):
        return node, _leaf_estimate(node, cf)
    on_true, true_est = _prune(node.on_true, cf, priors)
    on_false, false_est = _prune(node.on_false, cf, priors)
    leaf = _leaf(node.distribution, priors)
    leaf_est = _leaf_estimate(leaf, cf)
    if leaf_est <= true_est + false_est + 1e-9:
        return leaf, leaf_est
    return Split(node.feature_index, on_true, on_false, node.distribution), true_est + false_est


def _collapse(node: Node, priors) -> Node:
    """Merge splits whose two leaf children predict the same sense."""
    if isinstance(node, Leaf):
        return node
    on_true = _collapse(node.on_true, priors)
    on_false = _collapse(node.on_false, priors)
    if isinstance(on_true, Leaf) and isinstance(on_false, Leaf) and on_true.prediction == on_false.prediction:
        return _leaf(node.distribution, priors)
    return Split(node.feature_index, on_true, on_false, node.distribution)


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

def train_tree(
    vectors: Sequence[BinaryVector] | np.ndarray,
    labels: Sequence[str],
    params: TreeParams | None = None,
    priors: Mapping[str, int] | None = None,
) -> DecisionTree:
    """
    Grow a tree greedily on gain ratio, then prune it when params.prune.

    priors are the sense frequencies used to break leaf ties; they default
    to the label counts of this training set.
    """
    params = params or TreeParams()
    X = _as_matrix(vectors, labels)
    Y, senses = _one_hot(labels)
    priors = dict(priors) if priors is not None else _counts(Y, senses)

    root = _grow(X, Y, senses, params, priors)
    if params.prune:
        root, _ = _prune(root, params.pruning_confidence, priors)
    root = _collapse(root, priors)

    tree = DecisionTree(root=root, width=X.shape[1])
    logger.debug("Trained tree: %d nodes, depth %d, %d instances", tree.node_count(), tree.depth(), X.shape[0])
    return tree


def train_stump(
    vectors: Sequence[BinaryVector] | np.ndarray,
    labels: Sequence[str],
    priors: Mapping[str, int] | None = None,
) -> DecisionTree:
    """
    One-node tree. Among features with positive gain, the one whose
    depth-1 tree classifies the training set best wins (ties -> higher gain
    ratio, then lower index). No informative feature -> a majority leaf.
    """
    X = _as_matrix(vectors, labels)
    Y, senses = _one_hot(labels)
    priors = dict(priors) if priors is not None else _counts(Y, senses)
    distribution = _counts(Y, senses)
    majority = _leaf(distribution, priors)
    if len(distribution) <= 1 or X.shape[1] == 0:
        return DecisionTree(root=majority, width=X.shape[1])

    scores = _split_scores(X, Y)
    best, best_key, best_node = None, None, None
    for index in np.flatnonzero(scores.gain > MIN_GAIN):
        mask = X[:, index]
        on_true = _leaf(_counts(Y[mask], senses), priors)
        on_false = _leaf(_counts(Y[~mask], senses), priors)
        correct = on_true.total - on_true.errors + on_false.total - on_false.errors
        key = (-correct, -scores.ratio[index], index)
        if best_key is None or key < best_key:
            best, best_key = int(index), key
            best_node = Split(best, on_true, on_false, distribution)

    if best_node is None:
        return DecisionTree(root=majority, width=X.shape[1])
    return DecisionTree(root=_collapse(best_node, priors), width=X.shape[1])


def classify_tree(tree: DecisionTree, vector: BinaryVector) -> str:
    """Root-to-leaf descent."""
    if len(vector) != tree.width:
        raise ValidationError(f"vector width {len(vector)} does not match tree width {tree.width}")
    node = tree.root
    while isinstance(node, Split):
        node = node.on_true if vector[node.feature_index] else node.on_false
    return node.prediction
