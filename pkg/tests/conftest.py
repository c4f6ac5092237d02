from pathlib import Path

import pytest

from lexvote.models import Instance, LexicalSample
from lexvote.seed import generate_lexical_sample

DATA_DIR = Path(__file__).parent / "data"


def make_instance(text: str, target_index: int, sense: str | None = None, instance_id: str = "x.1") -> Instance:
    tokens = tuple(text.lower().split())
    return Instance(instance_id, tokens[target_index], tokens, target_index, sense)


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def art_instance() -> Instance:
    return make_instance("he and i like art of a certain period", 4, "art%1")


@pytest.fixture(scope="session")
def small_sample() -> LexicalSample:
    return generate_lexical_sample("bank", n_train=150, n_test=60, seed=7)


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for key in ("LEXVOTE_SEED", "LEXVOTE_MODEL_DIR", "LEXVOTE_LOG_LEVEL"):
        monkeypatch.delenv(key, raising=False)
