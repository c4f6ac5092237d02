"""
Synthetic corpora and agreement fixtures.
Run with:  python -m lexvote.seed [out_dir] [--seed N]

===========================================================================
HOW TO ADD A TARGET WORD:
Add an entry to TARGET_WORDS: sense id -> (collocates, topic words).
The token right after the target is always one of the sense's collocates;
topic words leak into other senses' contexts, the rest of every context
is drawn from NOISE_WORDS.
===========================================================================
"""
import argparse
import random
from collections.abc import Sequence
from pathlib import Path

from lexvote.exceptions import ValidationError
from lexvote.models import Instance, LexicalSample, PredictionSet
from lexvote.utils.corpus import write_instances
from lexvote.utils.scoring import write_predictions

# ---------------------------------------------------------------------------
# Vocabulary
# ---------------------------------------------------------------------------
TARGET_WORDS = {
    "bank": {
        "bank%money": (("account", "loan", "deposit", "teller"), ("interest", "cash", "credit", "savings")),
        "bank%river": (("shore", "erosion", "mud", "slope"), ("water", "fishing", "boat", "flood")),
        "bank%store": (("vault", "reserve", "storage", "donor"), ("blood", "seed", "archive", "supply")),
    },
    "line": {
        "line%queue": (("forms", "waits", "stretched", "moves"), ("crowd", "ticket", "counter", "people")),
        "line%cable": (("voltage", "wire", "outage", "repair"), ("power", "pole", "signal", "phone")),
        "line%text": (("reads", "quoted", "printed", "spoken"), ("poem", "script", "verse", "page")),
    },
    "plant": {
        "plant%factory": (("workers", "closure", "output", "manager"), ("steel", "production", "union", "shift")),
        "plant%flora": (("leaves", "roots", "blooms", "seedlings"), ("garden", "soil", "sunlight", "pot")),
        "plant%spy": (("evidence", "informant", "undercover", "agent"), ("police", "secret", "trial", "case")),
    },
}

# Sense frequencies, most frequent first
SENSE_WEIGHTS = (0.5, 0.3, 0.2)
TOPIC_RATE = 0.35
TOPIC_LEAK = 0.4

NOISE_WORDS = (
    "the", "a", "of", "to", "and", "in", "on", "was", "is", "it", "that", "with", "for", "as", "at",
    "by", "from", "this", "yesterday", "really", "still", "very", "many", "some", "new", "old",
    "big", "small", "good", "long", "city", "year", "week", "morning", "report", "news", "local",
    "said", "told", "went", "came", "made", "took", "saw", "found", "thought", "felt", "left",
    "folks", "man", "woman", "child", "group", "team", "family", "friend", "town", "road",
)

# ---------------------------------------------------------------------------
# Printed agreement counts on the English and Spanish Senseval lexical
# samples: (system_a, system_b, (both, one, zero), (both%, one%, zero%)).
# n for each task is the row sum.
# ---------------------------------------------------------------------------
SENSEVAL_PAIRWISE = {
    "english-senseval1": (
        ("hopkins", "ets-pu", (5045, 1274, 1126), ("67.8", "17.1", "12.1")),
        ("UBC", "hopkins", (4821, 1361, 1263), ("64.8", "18.3", "17.0")),
        ("UBC", "ets-pu", (4795, 1295, 1355), ("64.4", "17.4", "18.2")),
        ("stump", "majority", (3974, 1022, 2448), ("53.4", "13.7", "32.9")),
    ),
    "english-senseval2": (
        ("JHU(R)", "SMUls", (2180, 1183, 965), ("50.4", "27.3", "22.3")),
        ("UBC", "JHU(R)", (2127, 1043, 1158), ("49.2", "24.1", "26.8")),
        ("UBC", "SMUls", (2044, 1192, 1092), ("47.2", "27.5", "25.2")),
        ("stump", "majority", (1955, 511, 1862), ("45.2", "11.8", "43.0")),
    ),
    "spanish-senseval2": (
        ("JHU(R)", "cs224n", (1177, 651, 397), ("52.9", "29.3", "17.8")),
        ("UBC", "cs224n", (1175, 517, 533), ("52.8", "23.2", "24.0")),
        ("UBC", "JHU(R)", (1074, 746, 405), ("48.3", "33.5", "18.2")),
        ("stump", "majority", (1011, 453, 761), ("45.4", "20.4", "34.2")),
    ),
}

# The zero cell of this row disagrees with its own count (1,126 of 7,445 is 15.1%)
MISPRINTED_CELLS = {("english-senseval1", "hopkins", "ets-pu", "zero")}

# task -> (n, three-way all correct, three-way none correct, five-way none correct)
SENSEVAL_KWAY = {
    "english-senseval1": (7445, 4507, 973, 888),
    "english-senseval2": (4328, 1791, 828, 755),
    "spanish-senseval2": (2225, 960, 308, 237),
}


# ---------------------------------------------------------------------------
# Lexical samples
# ---------------------------------------------------------------------------

def _context(rng: random.Random, word: str, sense: str, senses: dict) -> tuple[tuple[str, ...], int]:
    collocates, topics = senses[sense]
    others = [s for s in senses if s != sense]
    length = rng.randint(8, 16)
    target_index = rng.randint(0, length - 2)

    tokens = []
    for _ in range(length):
        if rng.random() < TOPIC_RATE:
            source = rng.choice(others) if rng.random() < TOPIC_LEAK else sense
            tokens.append(rng.choice(senses[source][1]))
        else:
            tokens.append(rng.choice(NOISE_WORDS))
    tokens[target_index] = word
    tokens[target_index + 1] = rng.choice(collocates)
    return tuple(tokens), target_index


def generate_lexical_sample(
    target_word: str,
    n_train: int = 500,
    n_test: int = 200,
    seed: int = 0,
    senses: dict | None = None,
) -> LexicalSample:
    """
    A 3-sense lexical sample where the token right after the target decides
    the sense. Test instances carry their gold sense.
    """
    senses = senses or TARGET_WORDS.get(target_word)
    if not senses:
        raise ValidationError(f"no vocabulary for target word {target_word!r}")
    if n_train < 1 or n_test < 0:
        raise ValidationError("n_train must be >= 1 and n_test >= 0")
    rng = random.Random(f"{seed}:{target_word}")
    sense_ids = list(senses)
    weights = SENSE_WEIGHTS[: len(sense_ids)]

    instances = []
    for i in range(n_train + n_test):
        sense = rng.choices(sense_ids, weights=weights)[0]
        tokens, target_index = _context(rng, target_word, sense, senses)
        instances.append(Instance(f"{target_word}.{i:04d}", target_word, tokens, target_index, sense))
    return LexicalSample(target_word=target_word, train=instances[:n_train], test=instances[n_train:])


def generate_corpus(
    words: Sequence[str] = tuple(TARGET_WORDS),
    n_train: int = 500,
    n_test: int = 200,
    seed: int = 0,
) -> list[LexicalSample]:
    return [generate_lexical_sample(w, n_train, n_test, seed) for w in words]


def write_corpus(samples: Sequence[LexicalSample], out_dir: str | Path) -> tuple[Path, Path]:
    """train.tsv and test.tsv (test with gold senses) covering every sample."""
    out_dir = Path(out_dir)
    train = write_instances((i for s in samples for i in s.train), out_dir / "train.tsv")
    test = write_instances((i for s in samples for i in s.test), out_dir / "test.tsv")
    return train, test


# ---------------------------------------------------------------------------
# Agreement fixtures
# ---------------------------------------------------------------------------

def agreement_fixture(
    counts: Sequence[int],
    systems: Sequence[str],
) -> tuple[dict[str, str], list[PredictionSet]]:
    """
    Gold standard and prediction sets such that counts[j] instances are
    answered correctly by exactly j systems. Which systems are right rotates
    from instance to instance.
    """
    k = len(systems)
    if len(counts) != k + 1:
        raise ValidationError(f"{k} systems need {k + 1} bucket counts, got {len(counts)}")
    if any(c < 0 for c in counts):
        raise ValidationError("bucket counts must be non-negative")

    gold: dict[str, str] = {}
    answers: list[dict[str, str]] = [{} for _ in systems]
    serial = 0
    for correct, count in enumerate(counts):
        for _ in range(count):
            instance_id = f"i{serial:06d}"
            gold[instance_id] = "s1"
            right = {(serial + r) % k for r in range(correct)}
            for j in range(k):
                answers[j][instance_id] = "s1" if j in right else "s2"
            serial += 1
    return gold, [PredictionSet(name, a) for name, a in zip(systems, answers)]


def write_agreement_fixture(
    counts: Sequence[int],
    systems: Sequence[str],
    out_dir: str | Path,
) -> tuple[Path, list[Path]]:
    """gold.tsv plus one <system>.tsv per system."""
    out_dir = Path(out_dir)
    gold, preds = agreement_fixture(counts, systems)
    gold_path = write_predictions(PredictionSet("gold", gold), out_dir / "gold.tsv")
    return gold_path, [write_predictions(p, out_dir / f"{p.system_name}.tsv") for p in preds]


def main(argv=None):
    parser = argparse.ArgumentParser(description="Write the synthetic corpus and the stump/majority fixture.")
    parser.add_argument("out_dir", nargs="?", default="data")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    out = Path(args.out_dir)
    train, test = write_corpus(generate_corpus(seed=args.seed), out)
    print(f"Wrote {train} and {test}")
    both, one, zero = SENSEVAL_PAIRWISE["english-senseval1"][3][2]
    gold, preds = write_agreement_fixture((zero, one, both), ("stump", "majority"), out / "agreement")
    print(f"Wrote {gold} and {len(preds)} prediction files")


if __name__ == "__main__":
    main()
