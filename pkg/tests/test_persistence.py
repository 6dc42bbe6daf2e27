import json

import numpy as np
import pytest

from churnkit.baselines import (
    DecisionTreeClassifier,
    LogisticRegressionClassifier,
    RandomForestClassifier,
    SGDLinearClassifier,
)
from churnkit.errors import PersistenceError
from churnkit.nn import MlpClassifier
from churnkit.persistence import load_model, save_model, write_json_atomic
from churnkit.pipeline import fit_pipeline
from test_pipeline import toy_records


@pytest.fixture(scope="module")
def fitted_pipeline():
    return fit_pipeline(toy_records())


def blob_data(seed=0):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(120, 19))
    y = (X[:, 0] + 0.5 * X[:, 1] > 0).astype(int)
    return X, y


@pytest.mark.parametrize("model", [
    LogisticRegressionClassifier(n_iterations=50),
    SGDLinearClassifier(random_state=0),
    DecisionTreeClassifier(max_depth=3, min_leaf=5),
    RandomForestClassifier(n_trees=5, max_depth=3, random_state=0),
    MlpClassifier(max_epochs=5, random_state=0),
])
def test_round_trip_preserves_predictions(model, fitted_pipeline, tmp_path):
    X, y = blob_data()
    model.fit(X, y)
    path = tmp_path / "model.json"
    save_model(model, fitted_pipeline, path)
    restored, meta = load_model(path)
    assert meta["model_kind"] == model.name
    assert meta["pipeline_fingerprint"] == fitted_pipeline.fingerprint()
    probe = np.random.default_rng(1).normal(size=(80, 19))
    assert np.array_equal(restored.predict(probe), model.predict(probe))


def test_tampered_mlp_shape_rejected(fitted_pipeline, tmp_path):
    X, y = blob_data()
    model = MlpClassifier(max_epochs=3, random_state=0).fit(X, y)
    path = tmp_path / "model.json"
    save_model(model, fitted_pipeline, path)
    doc = json.loads(path.read_text())
    doc["payload"]["weights"][0] = doc["payload"]["weights"][0][:-2]  # drop rows
    path.write_text(json.dumps(doc))
    with pytest.raises(PersistenceError):
        load_model(path)


def test_unknown_kind_rejected(fitted_pipeline, tmp_path):
    X, y = blob_data()
    model = LogisticRegressionClassifier(n_iterations=5).fit(X, y)
    path = tmp_path / "model.json"
    save_model(model, fitted_pipeline, path)
    doc = json.loads(path.read_text())
    doc["model_kind"] = "boosted"
    path.write_text(json.dumps(doc))
    with pytest.raises(PersistenceError):
        load_model(path)


def test_garbage_file_rejected(tmp_path):
    path = tmp_path / "model.json"
    path.write_text("not json at all{")
    with pytest.raises(PersistenceError):
        load_model(path)
    with pytest.raises(PersistenceError):
        load_model(tmp_path / "missing.json")


def test_tree_payload_validation(fitted_pipeline, tmp_path):
    X, y = blob_data()
    model = DecisionTreeClassifier(max_depth=2, min_leaf=10).fit(X, y)
    path = tmp_path / "tree.json"
    save_model(model, fitted_pipeline, path)
    doc = json.loads(path.read_text())

    def first_leaf(node):
        return node if "prediction" in node and "feature" not in node else first_leaf(node["left"])

    first_leaf(doc["payload"]["root"])["prediction"] = 7
    path.write_text(json.dumps(doc))
    with pytest.raises(PersistenceError):
        load_model(path)


def test_write_json_atomic_replaces_whole_file(tmp_path):
    path = tmp_path / "doc.json"
    write_json_atomic(path, {"a": 1})
    write_json_atomic(path, {"b": 2})
    assert json.loads(path.read_text()) == {"b": 2}
    assert list(tmp_path.iterdir()) == [path]  # no temp files left behind
