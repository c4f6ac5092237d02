import pytest

from lexvote.config import DEFAULT_CLASSIFIERS, load_experiment_config
from lexvote.exceptions import ValidationError
from lexvote.models import PredictionSet
from lexvote.seed import generate_corpus, write_corpus
from lexvote.utils.corpus import default_stoplist, load_lexical_samples
from lexvote.utils.ensemble import train_ensemble
from lexvote.utils.experiment import run_experiment
from lexvote.utils.scoring import write_predictions

WORDS = ["bank", "line", "plant"]


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    return write_corpus(generate_corpus(WORDS, n_train=500, n_test=200, seed=5), root)


@pytest.fixture(scope="module")
def config(corpus, tmp_path_factory):
    train, test = corpus
    out = tmp_path_factory.mktemp("run")
    return load_experiment_config(overrides={"TRAIN": train, "TEST": test, "OUT": out, "BAGS": 3, "SEED": 1})


@pytest.fixture(scope="module")
def result(config):
    return run_experiment(config)


def accuracy(result, system):
    return next(r.accuracy for r in result.scores if r.system_name == system)


def test_every_system_is_scored(result):
    assert result.ok
    assert result.systems == DEFAULT_CLASSIFIERS
    assert sorted(r.system_name for r in result.scores) == sorted(DEFAULT_CLASSIFIERS)
    assert all(r.total == 3 * 200 for r in result.scores)
    assert len(result.pairwise) == 45
    assert [t.systems for t in result.kway] == [("U", "B", "C"), ("UBC", "stump", "majority"), DEFAULT_CLASSIFIERS]
    assert sorted(result.per_word) == WORDS


def test_collocate_view_learns_the_corpus(result):
    assert accuracy(result, "C") >= 0.95
    assert accuracy(result, "UBC") >= accuracy(result, "majority")


def test_ubc_follows_unanimous_views(result):
    ubc = result.predictions["UBC"].answers
    views = [result.predictions[v].answers for v in ("U", "B", "C")]
    unanimous = [i for i in ubc if views[0][i] == views[1][i] == views[2][i]]
    assert unanimous
    for instance_id in unanimous:
        assert ubc[instance_id] == views[0][instance_id]


def test_ubc_matches_a_freshly_trained_ensemble(corpus, config, result):
    stoplist = default_stoplist("en")
    for word, sample in load_lexical_samples(*corpus).items():
        ensemble = train_ensemble(sample, "UBC", stoplist, config.features, config.tree, config.bagging)
        for instance in sample.test:
            assert ensemble.classify(instance) == result.predictions["UBC"].answers[instance.instance_id], word


def test_baselines(corpus, result):
    samples = load_lexical_samples(*corpus)
    hits = 0
    for sample in samples.values():
        sense = max(sorted(sample.sense_priors().items()), key=lambda item: item[1])[0]
        hits += sum(1 for i in sample.test if i.gold_sense == sense)
    expected = hits / sum(len(s.test) for s in samples.values())
    assert abs(accuracy(result, "majority") - expected) <= 0.03
    assert 0.4 <= expected <= 0.6
    assert accuracy(result, "stump") >= accuracy(result, "majority")


def test_output_files(result):
    out = result.out_dir
    for name in ("gold.tsv", "accuracy.tsv", "agreement.txt", "kway.tsv", "accuracy_by_word.tsv", "failures.tsv"):
        assert (out / name).exists(), name
    assert len(list((out / "predictions").glob("*.tsv"))) == len(DEFAULT_CLASSIFIERS)
    assert (out / "failures.tsv").read_text(encoding="utf-8") == "word\terror\n"


def test_external_predictions_join_the_comparison(corpus, result, tmp_path):
    train, test = corpus
    gold = result.predictions["majority"].answers
    external = write_predictions(PredictionSet("ext", dict(gold)), tmp_path / "ext.tsv")
    config = load_experiment_config(overrides={
        "TRAIN": train, "TEST": test, "OUT": tmp_path / "out", "CLASSIFIERS": "majority,stump",
        "EXTERNAL": [external],
    })
    run = run_experiment(config)
    assert run.systems == ("majority", "stump", "ext")
    assert accuracy(run, "ext") == accuracy(run, "majority")
    majority_vs_ext = next(t for t in run.pairwise if set(t.systems) == {"majority", "ext"})
    assert majority_vs_ext.one == 0


def test_external_name_collision(corpus, tmp_path):
    train, test = corpus
    external = write_predictions(PredictionSet("stump", {}), tmp_path / "stump.tsv")
    config = load_experiment_config(overrides={
        "TRAIN": train, "TEST": test, "OUT": tmp_path / "out", "CLASSIFIERS": "stump", "EXTERNAL": [external],
    })
    with pytest.raises(ValidationError):
        run_experiment(config)


def test_missing_training_file():
    with pytest.raises(ValidationError):
        run_experiment(load_experiment_config())


def test_config_file_and_overrides(tmp_path, monkeypatch):
    path = tmp_path / "run.env"
    path.write_text("TRAIN=train.tsv\nBAGS=4\nPRUNE=false\nCLASSIFIERS=ubc,stump\nBIGRAM_TOP_N=none\n", encoding="utf-8")
    monkeypatch.setenv("LEXVOTE_SEED", "9")
    config = load_experiment_config(path, {"BAGS": 6, "SEED": None})
    assert config.bagging.num_bags == 6
    assert config.seed == 9
    assert config.tree.prune is False
    assert config.classifiers == ("UBC", "stump")
    assert config.features.bigram_top_n is None
