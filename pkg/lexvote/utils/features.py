"""
Lexical feature extraction.

Provides:
- G² log-likelihood ratio over 2x2 contingency tables
- Candidate extraction for unigrams, bigrams and co-occurrences
- Feature selection per view (U, B, C, mixed): frequency floor first, then G² gate
- Binary vectorization of instances against a FeatureSet

Stoplist policy: unigrams drop stoplisted words, bigrams drop pairs whose
two words are both stoplisted, co-occurrences are never stoplisted.
"""
import logging
from collections import Counter
from collections.abc import Iterable, Iterator, Sequence
from itertools import pairwise

import numpy as np
from scipy.special import xlogy
from scipy.stats.contingency import expected_freq

from lexvote.exceptions import DomainError, ValidationError
from lexvote.models import (
    BinaryVector, Feature, FeatureExtractionConfig, FeatureKind, FeatureSet, Instance, Stoplist, View,
)

logger = logging.getLogger(__name__)

NO_STOPLIST = Stoplist()


# ---------------------------------------------------------------------------
# Log-likelihood ratio
# ---------------------------------------------------------------------------

def g2_statistic(n11: int, n12: int, n21: int, n22: int) -> float:
    """
    G² = 2 * sum(O * ln(O / E)) over the four cells, with E from the row and
    column marginals and 0 * ln(0 / E) taken as 0.
    """
    observed = np.array([[n11, n12], [n21, n22]], dtype=float)
    if (observed < 0).any():
        raise ValidationError(f"contingency counts must be non-negative, got {observed.tolist()}")
    if observed.sum() < 1:
        raise DomainError("G² is undefined for an all-zero table")
    expected = expected_freq(observed)
    g2 = 2.0 * float(np.sum(xlogy(observed, observed) - xlogy(observed, expected)))
    return max(g2, 0.0)


def pair_table(n11: int, first_total: int, second_total: int, total: int) -> tuple[int, int, int, int]:
    """2x2 cells from the pair count, the two marginals and the number of slots."""
    return n11, first_total - n11, second_total - n11, total - first_total - second_total + n11


# ---------------------------------------------------------------------------
# Candidates
# ---------------------------------------------------------------------------

def extract_unigram_candidates(instance: Instance, stoplist: Stoplist = NO_STOPLIST) -> list[Feature]:
    """One candidate per non-stoplisted token, the target token included."""
    return [Feature.unigram(token) for token in instance.tokens if token not in stoplist]


def extract_bigram_candidates(instance: Instance, stoplist: Stoplist = NO_STOPLIST) -> list[Feature]:
    """Every adjacent pair except those made of two stoplisted words."""
    return [
        Feature.bigram(first, second)
        for first, second in pairwise(instance.tokens)
        if not (first in stoplist and second in stoplist)
    ]


def window_slots(instance: Instance, window: int) -> Iterator[tuple[str, str, int]]:
    """
    (left, right, target_side) for every context position within `window`
    of the target, from the farthest left to the farthest right.
    """
    if window < 1:
        raise ValidationError("window must be >= 1")
    tokens, t = instance.tokens, instance.target_index
    target = tokens[t]
    for offset in range(-window, window + 1):
        position = t + offset
        if offset == 0 or not 0 <= position < len(tokens):
            continue
        if offset < 0:
            yield tokens[position], target, 1
        else:
            yield target, tokens[position], 0


def extract_cooc_candidates(instance: Instance, window: int = 2) -> list[Feature]:
    return [Feature.cooccurrence(left, right, side) for left, right, side in window_slots(instance, window)]


# ---------------------------------------------------------------------------
# Selection
# ---------------------------------------------------------------------------

def _gate_pairs(
    candidates: Counter,
    slots: Sequence[tuple[str, str]],
    min_freq: int,
    threshold: float,
) -> list[tuple[Feature, float]]:
    """Keep pair candidates with frequency >= min_freq and G² >= threshold."""
    if not slots:
        return []
    firsts = Counter(first for first, _ in slots)
    seconds = Counter(second for _, second in slots)
    pair_counts = Counter(slots)
    total = len(slots)

    selected = []
    for feature, frequency in candidates.items():
        if frequency < min_freq:
            continue
        first, second = feature.words
        table = pair_table(pair_counts[(first, second)], firsts[first], seconds[second], total)
        score = g2_statistic(*table)
        if score >= threshold:
            selected.append((feature, score))
    return selected


def _select_unigrams(train, stoplist, config) -> list[tuple[Feature, float]]:
    counts = Counter(f for instance in train for f in extract_unigram_candidates(instance, stoplist))
    return [(f, float(c)) for f, c in counts.items() if c >= config.unigram_min_freq]


def _select_bigrams(train, stoplist, config) -> list[tuple[Feature, float]]:
    slots = [pair for instance in train for pair in pairwise(instance.tokens)]
    candidates = Counter(f for instance in train for f in extract_bigram_candidates(instance, stoplist))
    selected = _gate_pairs(candidates, slots, config.bigram_min_freq, config.bigram_g2_threshold)
    if config.bigram_top_n is not None:
        selected = _ranked(selected)[: config.bigram_top_n]
    return selected


def _select_cooccurrences(train, config) -> list[tuple[Feature, float]]:
    slots = [
        (left, right)
        for instance in train
        for left, right, _ in window_slots(instance, config.cooc_window)
    ]
    candidates = Counter(f for instance in train for f in extract_cooc_candidates(instance, config.cooc_window))
    return _gate_pairs(candidates, slots, config.cooc_min_freq, config.cooc_g2_threshold)


def _ranked(scored: Iterable[tuple[Feature, float]]) -> list[tuple[Feature, float]]:
    """Descending score, ties broken lexicographically."""
    return sorted(scored, key=lambda item: (-item[1], item[0].sort_key()))


def build_feature_set(
    train: Sequence[Instance],
    view: View | str,
    stoplist: Stoplist = NO_STOPLIST,
    config: FeatureExtractionConfig | None = None,
) -> FeatureSet:
    """
    Select the features of one view from the training instances.

    U: unigram frequency >= unigram_min_freq.
    B: adjacent pairs, frequency >= bigram_min_freq and G² >= bigram_g2_threshold,
       tables counted over all adjacent-token slots.
    C: target/neighbour pairs, frequency >= cooc_min_freq and G² >= cooc_g2_threshold,
       tables counted over all window slots.
    mixed: union of B and C (a pair passing both gates appears once per kind).
    """
    view = View(view)
    config = config or FeatureExtractionConfig()

    if view is View.U:
        scored = _select_unigrams(train, stoplist, config)
    elif view is View.B:
        scored = _select_bigrams(train, stoplist, config)
    elif view is View.C:
        scored = _select_cooccurrences(train, config)
    else:
        scored = _select_bigrams(train, stoplist, config) + _select_cooccurrences(train, config)

    ranked = _ranked(scored)
    logger.info("Selected %d %s features from %d training instances", len(ranked), view.value, len(train))
    return FeatureSet(
        view=view,
        features=tuple(f for f, _ in ranked),
        scores=tuple(s for _, s in ranked),
        config=config,
    )


# ---------------------------------------------------------------------------
# Vectorization
# ---------------------------------------------------------------------------

def instance_features(instance: Instance, kinds: Iterable[FeatureKind], window: int) -> Iterator[Feature]:
    """Every feature of the given kinds that occurs in the instance."""
    kinds = set(kinds)
    if FeatureKind.unigram in kinds:
        for token in instance.tokens:
            yield Feature.unigram(token)
    if FeatureKind.bigram in kinds:
        for first, second in pairwise(instance.tokens):
            yield Feature.bigram(first, second)
    if FeatureKind.cooccurrence in kinds:
        for left, right, side in window_slots(instance, window):
            yield Feature.cooccurrence(left, right, side)


def vectorize(instance: Instance, fs: FeatureSet) -> BinaryVector:
    """Bit i is set iff feature i occurs at least once in the instance."""
    bits = np.zeros(fs.width, dtype=bool)
    if not fs.width:
        return bits
    for feature in instance_features(instance, fs.kinds, fs.config.cooc_window):
        position = fs.index.get(feature)
        if position is not None:
            bits[position] = True
    return bits


def vectorize_all(instances: Sequence[Instance], fs: FeatureSet) -> np.ndarray:
    """(len(instances), fs.width) boolean matrix."""
    matrix = np.zeros((len(instances), fs.width), dtype=bool)
    for row, instance in enumerate(instances):
        matrix[row] = vectorize(instance, fs)
    return matrix
