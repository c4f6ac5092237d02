import pytest
from fastapi.testclient import TestClient

from lexvote.main import app
from lexvote.models import BaggingParams, MajorityClassifier
from lexvote.routes.classify_routes import get_models
from lexvote.utils.bundle import save_models
from lexvote.utils.ensemble import train_classifier


@pytest.fixture
def client(small_sample):
    models = {"bank": train_classifier(small_sample, "C", bag_params=BaggingParams(num_bags=2))}
    app.dependency_overrides[get_models] = lambda: models
    yield TestClient(app)
    app.dependency_overrides.clear()


def test_served_models_follow_the_bundle_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("LEXVOTE_MODEL_DIR", str(tmp_path))
    app.dependency_overrides.clear()
    client = TestClient(app)
    assert client.get("/models").json() == []

    save_models({"bank": MajorityClassifier("bank", "bank%1", {"bank%1": 3})}, tmp_path)
    assert [m["target_word"] for m in client.get("/models").json()] == ["bank"]


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "ok"


def test_models(client):
    body = client.get("/models").json()
    assert body == [{"target_word": "bank", "system": "C", "senses": ["bank%money", "bank%river", "bank%store"]}]


def test_classify(client, small_sample):
    instance = small_sample.test[0]
    payload = {"instances": [{
        "instance_id": instance.instance_id,
        "target_word": "Bank",
        "tokens": [t.upper() for t in instance.tokens],
        "target_index": instance.target_index,
    }]}
    response = client.post("/classify", json=payload)
    assert response.status_code == 200
    answer, = response.json()
    assert answer["instance_id"] == instance.instance_id
    assert answer["system"] == "C"
    assert answer["sense"] in small_sample.sense_inventory


def test_classify_unknown_word(client):
    payload = {"instances": [{"instance_id": "x", "target_word": "zebra", "tokens": ["zebra"], "target_index": 0}]}
    assert client.post("/classify", json=payload).status_code == 404


def test_classify_bad_instance(client):
    payload = {"instances": [{"instance_id": "x", "target_word": "bank", "tokens": ["bank"], "target_index": 3}]}
    response = client.post("/classify", json=payload)
    assert response.status_code == 422
    assert "detail" in response.json()


def test_score(client):
    payload = {"gold": {"a": "x", "b": "y"}, "predictions": {"p": {"a": "x"}, "q": {"a": "x", "b": "y"}}}
    body = client.post("/score", json=payload).json()
    assert [(r["system"], r["correct"], r["unanswered"]) for r in body] == [("p", 1, 1), ("q", 2, 0)]


def test_score_empty_gold(client):
    assert client.post("/score", json={"gold": {}, "predictions": {"p": {}}}).status_code == 422


def test_agree(client):
    payload = {
        "gold": {"a": "x", "b": "y", "c": "z"},
        "predictions": {"p": {"a": "x", "b": "y"}, "q": {"a": "x", "c": "z"}, "r": {}},
    }
    body = client.post("/agree", json=payload).json()
    assert len(body["pairwise"]) == 3
    assert body["pairwise"][0] == {"systems": ["p", "q"], "n": 3, "counts": [0, 2, 1]}
    assert body["kway"]["counts"] == [0, 2, 1, 0]
    assert body["optimal_combination_bound"] == pytest.approx(1.0)
    assert body["exclusive_correct"] == {"p": 1, "q": 1, "r": 0}


def test_agree_needs_two_systems(client):
    payload = {"gold": {"a": "x"}, "predictions": {"p": {"a": "x"}}}
    assert client.post("/agree", json=payload).status_code == 422
