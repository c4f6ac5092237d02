"""
Domain types for lexvote.

Domain entities:
- Instance (one occurrence of a target word with its tokenized context)
- LexicalSample (sense-tagged training and held-out test instances of one word)
- Stoplist (high frequency function words excluded from some features)
- Feature / FeatureSet (one lexical view of the training examples)
- Leaf / Split / DecisionTree (C4.5-style tree over binary features)
- BaggedClassifier / Ensemble / StumpClassifier / MajorityClassifier
- PredictionSet / ScoreReport / AgreementTable (evaluation)

All types are immutable once constructed and safe to share between threads.
"""
import enum
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import asdict, dataclass, field
from functools import cached_property

import numpy as np
import numpy.typing as npt

from lexvote.exceptions import ValidationError

# One bit per feature of a FeatureSet, aligned with FeatureSet.features
BinaryVector = npt.NDArray[np.bool_]


# ---------------------------------------------------------------------------
# Enums
# ---------------------------------------------------------------------------

class FeatureKind(str, enum.Enum):
    """Type of lexical feature."""
    unigram = "unigram"
    bigram = "bigram"
    cooccurrence = "cooccurrence"


class View(str, enum.Enum):
    """
    Feature view a bagged classifier is learned from.
    `mixed` is the union of the bigram and co-occurrence views in one feature set.
    """
    U = "U"
    B = "B"
    C = "C"
    mixed = "mixed"


# Canonical member order used for ensemble names (UBC, UC, BC, ...)
VIEW_ORDER = (View.U, View.B, View.C)


# ---------------------------------------------------------------------------
# Corpus
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Instance:
    """One occurrence of the target word: tokens are lowercased, never stemmed."""
    instance_id: str
    target_word: str
    tokens: tuple[str, ...]
    target_index: int
    gold_sense: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if not self.instance_id:
            raise ValidationError("instance_id must be non-empty")
        if not self.tokens:
            raise ValidationError(f"instance {self.instance_id!r} has no tokens")
        if not 0 <= self.target_index < len(self.tokens):
            raise ValidationError(
                f"instance {self.instance_id!r}: target_index {self.target_index} "
                f"out of range for {len(self.tokens)} tokens"
            )

    @property
    def target_token(self) -> str:
        return self.tokens[self.target_index]


@dataclass(frozen=True)
class LexicalSample:
    """
    Training and test instances of a single target word.
    sense_inventory defaults to the senses observed in train.
    """
    target_word: str
    train: tuple[Instance, ...] = ()
    test: tuple[Instance, ...] = ()
    sense_inventory: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "train", tuple(self.train))
        object.__setattr__(self, "test", tuple(self.test))
        observed = frozenset(i.gold_sense for i in self.train if i.gold_sense is not None)
        object.__setattr__(self, "sense_inventory", frozenset(self.sense_inventory) | observed)

        for instance in self.train:
            if instance.gold_sense is None:
                raise ValidationError(f"training instance {instance.instance_id!r} has no gold sense")
        for instance in (*self.train, *self.test):
            if instance.target_word != self.target_word:
                raise ValidationError(
                    f"instance {instance.instance_id!r} targets {instance.target_word!r}, "
                    f"sample targets {self.target_word!r}"
                )

    @property
    def gold(self) -> dict[str, str]:
        """instance_id -> gold sense for the test instances that carry one."""
        return {i.instance_id: i.gold_sense for i in self.test if i.gold_sense is not None}

    def sense_priors(self) -> dict[str, int]:
        """Training frequency of every sense."""
        return dict(Counter(i.gold_sense for i in self.train))


@dataclass(frozen=True)
class Stoplist:
    """Lowercase function words; membership is case-insensitive."""
    words: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "words", frozenset(w.lower() for w in self.words))

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.words

    def __len__(self) -> int:
        return len(self.words)


# ---------------------------------------------------------------------------
# Features
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FeatureExtractionConfig:
    """
    Selection thresholds for the three lexical views.

    6.635 and 2.706 are the 1-df chi-square critical values at p = 0.01 and
    p = 0.10. bigram_top_n optionally keeps only the N highest-scoring bigrams.
    """
    unigram_min_freq: int = 5
    bigram_min_freq: int = 2
    bigram_g2_threshold: float = 6.635
    cooc_min_freq: int = 2
    cooc_g2_threshold: float = 2.706
    cooc_window: int = 2
    bigram_top_n: int | None = None

    def __post_init__(self):
        for name in ("unigram_min_freq", "bigram_min_freq", "cooc_min_freq"):
            if getattr(self, name) < 1:
                raise ValidationError(f"{name} must be >= 1")
        for name in ("bigram_g2_threshold", "cooc_g2_threshold"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be >= 0")
        if self.cooc_window < 1:
            raise ValidationError("cooc_window must be >= 1")
        if self.bigram_top_n is not None and self.bigram_top_n < 1:
            raise ValidationError("bigram_top_n must be >= 1 when set")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping) -> "FeatureExtractionConfig":
        return cls(**dict(data))


@dataclass(frozen=True)
class Feature:
    """
    A binary lexical feature.

    words are in corpus order; for a co-occurrence, target_side is the
    position (0 or 1) of the target word inside words.
    """
    kind: FeatureKind
    words: tuple[str, ...]
    target_side: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", FeatureKind(self.kind))
        object.__setattr__(self, "words", tuple(self.words))
        expected = 1 if self.kind is FeatureKind.unigram else 2
        if len(self.words) != expected:
            raise ValidationError(f"{self.kind.value} feature needs {expected} word(s), got {self.words!r}")
        if self.kind is FeatureKind.cooccurrence:
            if self.target_side not in (0, 1):
                raise ValidationError("co-occurrence feature needs target_side 0 or 1")
        elif self.target_side is not None:
            raise ValidationError(f"{self.kind.value} feature has no target side")

    @classmethod
    def unigram(cls, word: str) -> "Feature":
        return cls(FeatureKind.unigram, (word,))

    @classmethod
    def bigram(cls, first: str, second: str) -> "Feature":
        return cls(FeatureKind.bigram, (first, second))

    @classmethod
    def cooccurrence(cls, left: str, right: str, target_side: int) -> "Feature":
        return cls(FeatureKind.cooccurrence, (left, right), target_side)

    @property
    def label(self) -> str:
        return " ".join(self.words)

    def sort_key(self) -> tuple:
        """Lexicographic order used to break score ties."""
        return (self.words, self.kind.value, -1 if self.target_side is None else self.target_side)


@dataclass(frozen=True)
class FeatureSet:
    """
    Ordered, duplicate-free features of one view with their selection scores
    (frequency for unigrams, G² for pairs) and the config that produced them.
    """
    view: View
    features: tuple[Feature, ...] = ()
    scores: tuple[float, ...] = ()
    config: FeatureExtractionConfig = field(default_factory=FeatureExtractionConfig)

    def __post_init__(self):
        object.__setattr__(self, "view", View(self.view))
        object.__setattr__(self, "features", tuple(self.features))
        object.__setattr__(self, "scores", tuple(float(s) for s in self.scores))
        if len(self.scores) != len(self.features):
            raise ValidationError("a FeatureSet needs exactly one score per feature")
        if len(set(self.features)) != len(self.features):
            raise ValidationError("FeatureSet contains duplicate features")

    def __len__(self) -> int:
        return len(self.features)

    @property
    def width(self) -> int:
        return len(self.features)

    @cached_property
    def index(self) -> dict[Feature, int]:
        """Feature -> bit position."""
        return {feature: i for i, feature in enumerate(self.features)}

    @cached_property
    def kinds(self) -> frozenset[FeatureKind]:
        return frozenset(f.kind for f in self.features)


# ---------------------------------------------------------------------------
# Decision trees
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TreeParams:
    """Learner settings; defaults follow the usual C4.5 configuration."""
    min_leaf_instances: int = 2
    pruning_confidence: float = 0.25
    prune: bool = True

    def __post_init__(self):
        if self.min_leaf_instances < 1:
            raise ValidationError("min_leaf_instances must be >= 1")
        if not 0 < self.pruning_confidence <= 1:
            raise ValidationError("pruning_confidence must lie in (0, 1]")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Leaf:
    """Sense counts of the training instances reaching this leaf."""
    distribution: dict[str, int]
    prediction: str

    @property
    def total(self) -> int:
        return sum(self.distribution.values())

    @property
    def errors(self) -> int:
        return self.total - self.distribution.get(self.prediction, 0)


@dataclass(frozen=True)
class Split:
    """Binary test on one feature of the associated FeatureSet."""
    feature_index: int
    on_true: "Node"
    on_false: "Node"
    distribution: dict[str, int] = field(default_factory=dict)


Node = Leaf | Split


@dataclass(frozen=True)
class DecisionTree:
    root: Node
    width: int

    def depth(self) -> int:
        def _depth(node: Node) -> int:
            if isinstance(node, Leaf):
                return 0
            return 1 + max(_depth(node.on_true), _depth(node.on_false))
        return _depth(self.root)

    def node_count(self) -> int:
        def _count(node: Node) -> int:
            if isinstance(node, Leaf):
                return 1
            return 1 + _count(node.on_true) + _count(node.on_false)
        return _count(self.root)

    def leaves(self) -> list[Leaf]:
        found, stack = [], [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, Leaf):
                found.append(node)
            else:
                stack.extend((node.on_false, node.on_true))
        return found


# ---------------------------------------------------------------------------
# Classifiers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BaggingParams:
    """Bootstrap settings: num_bags resamples of size n drawn with replacement."""
    num_bags: int = 10
    seed: int = 0
    resample: bool = True

    def __post_init__(self):
        if self.num_bags < 1:
            raise ValidationError("num_bags must be >= 1")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class BaggedClassifier:
    """Trees learned from bootstrap resamples of one feature view."""
    target_word: str
    view: View
    feature_set: FeatureSet
    trees: tuple[DecisionTree, ...]
    params: BaggingParams
    sense_priors: dict[str, int]

    def __post_init__(self):
        object.__setattr__(self, "view", View(self.view))
        object.__setattr__(self, "trees", tuple(self.trees))
        for tree in self.trees:
            if tree.width != self.feature_set.width:
                raise ValidationError(
                    f"tree width {tree.width} does not match feature set width {self.feature_set.width}"
                )

    @property
    def name(self) -> str:
        return self.view.value

    def classify(self, instance: Instance) -> str:
        from lexvote.utils.ensemble import classify_bagged
        return classify_bagged(self, instance)


@dataclass(frozen=True)
class EnsembleSpec:
    """Members of an ensemble: a non-empty subset of {U, B, C} or {mixed} alone."""
    members: tuple[View, ...]

    def __post_init__(self):
        members = tuple(View(m) for m in self.members)
        if not members:
            raise ValidationError("an ensemble needs at least one member")
        if len(set(members)) != len(members):
            raise ValidationError(f"duplicate ensemble members in {members!r}")
        if View.mixed in members and len(members) > 1:
            raise ValidationError("the mixed view cannot be combined with other members")
        if View.mixed not in members:
            members = tuple(v for v in VIEW_ORDER if v in members)
        object.__setattr__(self, "members", members)

    @classmethod
    def parse(cls, text: "str | EnsembleSpec") -> "EnsembleSpec":
        """Parse a row label such as 'UBC', 'uc' or 'mixed'."""
        if isinstance(text, EnsembleSpec):
            return text
        label = text.strip()
        if label.lower() == View.mixed.value:
            return cls((View.mixed,))
        try:
            return cls(tuple(View(ch) for ch in label.upper()))
        except ValueError as exc:
            raise ValidationError(f"unknown ensemble {text!r}") from exc

    @property
    def name(self) -> str:
        return "".join(v.value for v in self.members)


@dataclass(frozen=True)
class Ensemble:
    """Bagged classifiers voting by simple majority."""
    spec: EnsembleSpec
    members: tuple[BaggedClassifier, ...]
    sense_priors: dict[str, int]

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def target_word(self) -> str:
        return self.members[0].target_word

    def classify(self, instance: Instance) -> str:
        from lexvote.utils.ensemble import classify_ensemble
        return classify_ensemble(self, instance)


@dataclass(frozen=True)
class StumpClassifier:
    """One-node decision tree over the co-occurrence view."""
    target_word: str
    feature_set: FeatureSet
    tree: DecisionTree
    sense_priors: dict[str, int]

    name = "stump"

    def classify(self, instance: Instance) -> str:
        from lexvote.utils.ensemble import classify_stump
        return classify_stump(self, instance)


@dataclass(frozen=True)
class MajorityClassifier:
    """Assigns the most frequent training sense to every instance."""
    target_word: str
    sense: str
    sense_priors: dict[str, int] = field(default_factory=dict)

    name = "majority"

    def __post_init__(self):
        if self.sense_priors and self.sense not in self.sense_priors:
            raise ValidationError(f"majority sense {self.sense!r} was never seen in training")

    def classify(self, instance: Instance) -> str:
        from lexvote.utils.ensemble import classify_majority
        return classify_majority(self, instance)


Classifier = Ensemble | StumpClassifier | MajorityClassifier


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PredictionSet:
    """Answers of one system: instance_id -> sense."""
    system_name: str
    answers: dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_pairs(cls, system_name: str, pairs: Iterable[tuple[str, str]]) -> "PredictionSet":
        answers: dict[str, str] = {}
        for instance_id, sense in pairs:
            if instance_id in answers:
                raise ValidationError(f"{system_name}: more than one answer for {instance_id!r}")
            answers[instance_id] = sense
        return cls(system_name, answers)


@dataclass(frozen=True)
class ScoreReport:
    """Fine-grained accuracy; unanswered instances count as wrong."""
    system_name: str
    total: int
    correct: int
    accuracy: float
    unanswered: int = 0
    unknown: int = 0

    def __post_init__(self):
        if not 0 <= self.correct <= self.total:
            raise ValidationError("correct must lie between 0 and total")


@dataclass(frozen=True)
class AgreementTable:
    """
    Per-instance correctness buckets for k systems scored on n instances.
    counts[j] is the number of instances exactly j systems got right.
    """
    systems: tuple[str, ...]
    n: int
    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "systems", tuple(self.systems))
        object.__setattr__(self, "counts", tuple(self.counts))
        if len(self.counts) != len(self.systems) + 1:
            raise ValidationError("an agreement table needs one bucket per number of correct systems")
        if sum(self.counts) != self.n:
            raise ValidationError(f"bucket counts sum to {sum(self.counts)}, expected {self.n}")

    @property
    def k(self) -> int:
        return len(self.systems)

    @property
    def all_correct(self) -> int:
        return self.counts[-1]

    @property
    def none_correct(self) -> int:
        return self.counts[0]

    # Pairwise names
    @property
    def both(self) -> int:
        return self.all_correct

    @property
    def one(self) -> int:
        return sum(self.counts[1:-1])

    @property
    def zero(self) -> int:
        return self.none_correct
