import numpy as np
import pytest
from fastapi.testclient import TestClient

from labelenhance.metrics import report
from labelenhance.pipeline import synth_dataset
from labelenhance.service.app import app
from labelenhance.service.schemas import DatasetPayload

client = TestClient(app, raise_server_exceptions=False)


def synth_payload(n=30, d=4, q=3, noise=0.5, seed=0):
    return DatasetPayload.from_dataset(synth_dataset(n, d, q, noise, seed)).model_dump()


FAST_OPTIONS = {"k": 3, "d_prime": 2, "max_epochs": 40, "seed": 1}


def test_health():
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_synth_endpoint_deterministic():
    req = {"n": 25, "d": 3, "q": 3, "noise": 0.2, "seed": 9}
    a = client.post("/synth", json=req)
    b = client.post("/synth", json=req)
    assert a.status_code == 200
    assert a.json() == b.json()
    labels = np.asarray(a.json()["labels"])
    assert labels.shape == (25, 3)
    np.testing.assert_allclose(labels.sum(axis=1), 1.0, atol=1e-9)


def test_synth_endpoint_rejects_small_n():
    resp = client.post("/synth", json={"n": 5, "d": 3, "q": 3})
    assert resp.status_code == 400
    assert "n must be" in resp.json()["detail"]


def test_degrade_endpoint_rule():
    resp = client.post(
        "/degrade",
        json={"labels": [[0.6, 0.3, 0.1], [0.25, 0.25, 0.5]], "threshold": 0.2},
    )
    assert resp.status_code == 200
    assert resp.json()["labels"] == [[1.0, 1.0, 0.0], [1.0, 1.0, 1.0]]


def test_degrade_endpoint_bad_threshold():
    resp = client.post("/degrade", json={"labels": [[0.5, 0.5]], "threshold": 1.5})
    assert resp.status_code == 400


def test_enhance_endpoint_distribution_input():
    resp = client.post(
        "/enhance", json={"dataset": synth_payload(), "options": FAST_OPTIONS}
    )
    assert resp.status_code == 200
    body = resp.json()
    recovered = np.asarray(body["recovered"])
    assert recovered.shape == (30, 3)
    np.testing.assert_allclose(recovered.sum(axis=1), 1.0, atol=1e-9)
    assert body["metrics"] is not None
    assert body["metrics"]["n_instances"] == 30
    assert body["diagnostics"]["reduced_dim"] == 2
    assert body["diagnostics"]["confidence_converged"] is True


def test_enhance_endpoint_logical_input_no_metrics():
    payload = synth_payload()
    labels = np.asarray(payload["labels"])
    logical = (labels > 1.0 / 3.0).astype(float)
    logical[np.arange(len(labels)), labels.argmax(axis=1)] = 1.0
    payload["labels"] = logical.tolist()
    payload["label_kind"] = "logical"
    resp = client.post("/enhance", json={"dataset": payload, "options": FAST_OPTIONS})
    assert resp.status_code == 200
    assert resp.json()["metrics"] is None


def test_enhance_endpoint_variant_flags():
    opts = dict(FAST_OPTIONS)
    opts.update({"features_variant": "raw", "targets_variant": "logical"})
    resp = client.post("/enhance", json={"dataset": synth_payload(), "options": opts})
    assert resp.status_code == 200
    body = resp.json()
    assert body["diagnostics"]["confidence_converged"] is None
    assert body["diagnostics"]["reduced_dim"] == 4  # raw feature count


def test_enhance_endpoint_deterministic():
    req = {"dataset": synth_payload(), "options": FAST_OPTIONS}
    a = client.post("/enhance", json=req)
    b = client.post("/enhance", json=req)
    assert a.json() == b.json()


def test_enhance_endpoint_invalid_dataset():
    payload = synth_payload()
    payload["labels"][0] = [0.0, 0.0, 0.0]  # invalid either way
    payload["label_kind"] = "logical"
    resp = client.post("/enhance", json={"dataset": payload, "options": FAST_OPTIONS})
    assert resp.status_code == 400


def test_enhance_endpoint_missing_field_422():
    resp = client.post("/enhance", json={"options": FAST_OPTIONS})
    assert resp.status_code == 422


def test_evaluate_endpoint_matches_library():
    rng = np.random.default_rng(3)
    truth = rng.dirichlet(np.ones(3), size=12)
    pred = rng.dirichlet(np.ones(3), size=12)
    resp = client.post(
        "/evaluate", json={"d_true": truth.tolist(), "d_pred": pred.tolist()}
    )
    assert resp.status_code == 200
    body = resp.json()
    expected = report(truth, pred)
    assert body["chebyshev"] == pytest.approx(expected.chebyshev)
    assert body["cosine"] == pytest.approx(expected.cosine)


def test_evaluate_endpoint_shape_mismatch():
    resp = client.post(
        "/evaluate", json={"d_true": [[0.5, 0.5]], "d_pred": [[0.5, 0.5], [0.5, 0.5]]}
    )
    assert resp.status_code == 400
