"""
Lexical-sample corpus and stoplist I/O.

Instance file: UTF-8, one record per line, tab-separated fields
    instance_id <TAB> target_word <TAB> target_index <TAB> sense_or_- <TAB> space-joined tokens
`-` marks an absent gold sense. Tokens are lowercased at load time and
never stemmed.

Stoplist file: one word per line, lines starting with '#' are comments.
"""
import logging
from collections.abc import Iterable, Iterator
from pathlib import Path

from lexvote.exceptions import ParseError, ValidationError
from lexvote.models import Instance, LexicalSample, Stoplist

logger = logging.getLogger(__name__)

NO_SENSE = "-"
FIELD_COUNT = 5
DATA_DIR = Path(__file__).resolve().parent.parent / "data"
STOPLIST_LANGUAGES = ("en", "es")


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------

def read_lines(path: str | Path) -> Iterator[tuple[int, str]]:
    """(line number, text) for every line of a UTF-8 file."""
    path = Path(path)
    with path.open("rb") as handle:
        for lineno, raw in enumerate(handle, start=1):
            try:
                yield lineno, raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise ParseError(f"not valid UTF-8 ({exc.reason} at byte {exc.start})", path, lineno) from None


def parse_instance(line: str, path: str | Path | None = None, lineno: int | None = None) -> Instance:
    """Parse one record of the instance format."""
    fields = line.rstrip("\r\n").split("\t")
    if len(fields) != FIELD_COUNT:
        raise ParseError(f"expected {FIELD_COUNT} tab-separated fields, got {len(fields)}", path, lineno)
    instance_id, target_word, raw_index, sense, raw_tokens = (f.strip() for f in fields)
    if not instance_id:
        raise ParseError("missing instance_id", path, lineno)
    if not target_word:
        raise ParseError("missing target_word", path, lineno)
    try:
        target_index = int(raw_index)
    except ValueError:
        raise ParseError(f"target_index {raw_index!r} is not an integer", path, lineno) from None

    tokens = tuple(token.lower() for token in raw_tokens.split())
    if not tokens:
        raise ParseError("empty context", path, lineno)
    if not 0 <= target_index < len(tokens):
        raise ParseError(
            f"target_index {target_index} out of range for {len(tokens)} tokens", path, lineno
        )
    return Instance(
        instance_id=instance_id,
        target_word=target_word.lower(),
        tokens=tokens,
        target_index=target_index,
        gold_sense=None if sense in ("", NO_SENSE) else sense,
    )


def read_instances(path: str | Path) -> list[Instance]:
    """Read every record of an instance file, in file order."""
    path = Path(path)
    instances: list[Instance] = []
    seen: set[str] = set()
    for lineno, line in read_lines(path):
        if not line.strip():
            continue
        instance = parse_instance(line, path, lineno)
        if instance.instance_id in seen:
            raise ValidationError(f"{path}:{lineno}: duplicate instance_id {instance.instance_id!r}")
        seen.add(instance.instance_id)
        instances.append(instance)
    logger.debug("Read %d instances from %s", len(instances), path)
    return instances


def format_instance(instance: Instance) -> str:
    sense = instance.gold_sense if instance.gold_sense is not None else NO_SENSE
    return "\t".join(
        (instance.instance_id, instance.target_word, str(instance.target_index), sense, " ".join(instance.tokens))
    )


def write_instances(instances: Iterable[Instance], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        for instance in instances:
            handle.write(format_instance(instance) + "\n")
    return path


def _split_records(train_records: list[Instance], test_records: list[Instance] | None):
    """
    With a single file, records carrying a sense train and `-` records test.
    With a separate test file, every training record must carry a sense.
    """
    if test_records is None:
        train = [i for i in train_records if i.gold_sense is not None]
        test = [i for i in train_records if i.gold_sense is None]
        return train, test
    for instance in train_records:
        if instance.gold_sense is None:
            raise ValidationError(f"training instance {instance.instance_id!r} has no gold sense")
    return train_records, test_records


def load_lexical_sample(path: str | Path, test_path: str | Path | None = None) -> LexicalSample:
    """Load the lexical sample of one target word."""
    records = read_instances(path)
    test_records = read_instances(test_path) if test_path is not None else None
    train, test = _split_records(records, test_records)

    words = sorted({i.target_word for i in (*train, *test)})
    if len(words) > 1:
        raise ValidationError(f"{path}: instances target several words {words!r}; use load_lexical_samples")
    return LexicalSample(target_word=words[0] if words else "", train=train, test=test)


def load_lexical_samples(path: str | Path, test_path: str | Path | None = None) -> dict[str, LexicalSample]:
    """Load instance files covering several target words, grouped by word (sorted)."""
    records = read_instances(path)
    test_records = read_instances(test_path) if test_path is not None else None
    train, test = _split_records(records, test_records)

    words = sorted({i.target_word for i in (*train, *test)})
    return {
        word: LexicalSample(
            target_word=word,
            train=[i for i in train if i.target_word == word],
            test=[i for i in test if i.target_word == word],
        )
        for word in words
    }


def write_lexical_sample(sample: LexicalSample, path: str | Path, test_path: str | Path | None = None) -> Path:
    """
    Write a sample in the instance format. Without test_path the test
    instances follow the training ones in the same file, which only works
    for test instances without a gold sense.
    """
    if test_path is None:
        sensed = [i.instance_id for i in sample.test if i.gold_sense is not None]
        if sensed:
            raise ValidationError(
                f"{len(sensed)} test instances carry a gold sense and would load back as training data; "
                "pass a separate test_path"
            )
        return write_instances((*sample.train, *sample.test), path)
    write_instances(sample.test, test_path)
    return write_instances(sample.train, path)


# ---------------------------------------------------------------------------
# Stoplists
# ---------------------------------------------------------------------------

def load_stoplist(path: str | Path) -> Stoplist:
    """One word per line; blank lines and '#' comments are skipped."""
    words = set()
    for _, line in read_lines(path):
        word = line.strip()
        if not word or word.startswith("#"):
            continue
        words.add(word.lower())
    return Stoplist(frozenset(words))


def default_stoplist(language: str = "en") -> Stoplist:
    """Packaged stoplist for English ('en') or Spanish ('es')."""
    if language not in STOPLIST_LANGUAGES:
        raise ValidationError(f"no default stoplist for language {language!r}")
    return load_stoplist(DATA_DIR / f"stoplist_{language}.txt")
