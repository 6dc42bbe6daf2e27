"""Versioned JSON persistence for models, plus atomic file helpers.

Every model file carries the same envelope: schema version, a model_kind
discriminator, the feature list and the fingerprint of the preprocessing
parameters it was trained against. Loading validates shapes, so a tampered
or truncated file fails loudly instead of predicting garbage.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .baselines import (
    DecisionTreeClassifier,
    LogisticRegressionClassifier,
    RandomForestClassifier,
    SGDLinearClassifier,
    TreeNode,
)
from .errors import PersistenceError
from .nn import MlpClassifier, MlpParams
from .pipeline import PipelineParams
from .validation import check_is_fitted

MODEL_SCHEMA_VERSION = 1


def write_text_atomic(path, text: str) -> None:
    """Write via a temp file + rename so readers never see partial output."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json_atomic(path, doc) -> None:
    write_text_atomic(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _tree_to_doc(node: TreeNode) -> dict:
    if node.is_leaf:
        return {"prediction": node.prediction, "counts": list(node.counts)}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "counts": list(node.counts),
        "left": _tree_to_doc(node.left),
        "right": _tree_to_doc(node.right),
    }


def _tree_from_doc(doc: dict, n_features: int) -> TreeNode:
    try:
        counts = tuple(int(c) for c in doc["counts"])
        if "feature" not in doc:
            prediction = int(doc["prediction"])
            if prediction not in (0, 1):
                raise PersistenceError(f"invalid leaf prediction {prediction}")
            return TreeNode(prediction=prediction, counts=counts)
        feature = int(doc["feature"])
        if not 0 <= feature < n_features:
            raise PersistenceError(f"split feature {feature} out of range")
        node = TreeNode(
            prediction=int(doc["prediction"]) if "prediction" in doc else None,
            counts=counts,
            feature=feature,
            threshold=float(doc["threshold"]),
            left=_tree_from_doc(doc["left"], n_features),
            right=_tree_from_doc(doc["right"], n_features),
        )
        return node
    except (KeyError, TypeError, ValueError) as exc:
        raise PersistenceError(f"malformed tree node: {exc}") from exc


def _payload(model) -> dict:
    if isinstance(model, MlpClassifier):
        p = model.params_
        return {
            "layer_sizes": list(p.layer_sizes),
            "weights": [w.tolist() for w in p.weights],
            "biases": [b.tolist() for b in p.biases],
        }
    if isinstance(model, (LogisticRegressionClassifier, SGDLinearClassifier)):
        return {"weights": model.weights_.tolist(), "bias": model.bias_}
    if isinstance(model, DecisionTreeClassifier):
        return {
            "max_depth": model.max_depth,
            "min_leaf": model.min_leaf,
            "n_features": model.n_features_in_,
            "root": _tree_to_doc(model.root_),
        }
    if isinstance(model, RandomForestClassifier):
        return {
            "n_trees": model.n_trees,
            "max_depth": model.max_depth,
            "min_leaf": model.min_leaf,
            "n_features": model.n_features_in_,
            "trees": [_tree_to_doc(t) for t in model.trees_],
        }
    raise PersistenceError(f"cannot persist model type {type(model).__name__}")


def save_model(model, pipeline_params: PipelineParams, path) -> None:
    """Persist a fitted model tied to its preprocessing fingerprint."""
    check_is_fitted(model, "n_features_in_")
    doc = {
        "schema_version": MODEL_SCHEMA_VERSION,
        "model_kind": model.name,
        "feature_names": list(pipeline_params.feature_names),
        "pipeline_fingerprint": pipeline_params.fingerprint(),
        "payload": _payload(model),
    }
    write_json_atomic(path, doc)


def _restore_mlp(payload: dict) -> MlpClassifier:
    sizes = [int(s) for s in payload["layer_sizes"]]
    weights, biases = [], []
    for i, (fan_in, fan_out) in enumerate(zip(sizes[:-1], sizes[1:])):
        w = np.asarray(payload["weights"][i], dtype=np.float64)
        b = np.asarray(payload["biases"][i], dtype=np.float64)
        if w.shape != (fan_in, fan_out) or b.shape != (fan_out,):
            raise PersistenceError(
                f"layer {i} arrays do not match declared sizes {sizes}"
            )
        weights.append(w)
        biases.append(b)
    model = MlpClassifier(hidden_layer_sizes=tuple(sizes[1:-1]))
    model.params_ = MlpParams(weights=tuple(weights), biases=tuple(biases))
    model.history_ = None
    model.n_features_in_ = sizes[0]
    return model


def _restore_linear(cls, payload: dict):
    model = cls()
    model.weights_ = np.asarray(payload["weights"], dtype=np.float64)
    if model.weights_.ndim != 1:
        raise PersistenceError("linear weights must be a flat vector")
    model.bias_ = float(payload["bias"])
    model.n_features_in_ = model.weights_.shape[0]
    return model


def load_model(path):
    """Load a model envelope; returns (estimator, metadata dict)."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise PersistenceError(f"cannot read model file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise PersistenceError(f"model file {path} is not valid JSON") from exc

    try:
        if doc["schema_version"] != MODEL_SCHEMA_VERSION:
            raise PersistenceError(
                f"unsupported model schema_version {doc['schema_version']}"
            )
        kind = doc["model_kind"]
        payload = doc["payload"]
    except (KeyError, TypeError) as exc:
        raise PersistenceError(f"malformed model envelope: {exc}") from exc

    try:
        if kind == "mlp":
            model = _restore_mlp(payload)
        elif kind == "logreg":
            model = _restore_linear(LogisticRegressionClassifier, payload)
        elif kind == "sgd":
            model = _restore_linear(SGDLinearClassifier, payload)
        elif kind == "tree":
            n_features = int(payload["n_features"])
            model = DecisionTreeClassifier(
                max_depth=payload["max_depth"], min_leaf=payload["min_leaf"]
            )
            model.root_ = _tree_from_doc(payload["root"], n_features)
            model.n_features_in_ = n_features
        elif kind == "forest":
            n_features = int(payload["n_features"])
            model = RandomForestClassifier(
                n_trees=payload["n_trees"],
                max_depth=payload["max_depth"],
                min_leaf=payload["min_leaf"],
            )
            model.trees_ = [_tree_from_doc(t, n_features) for t in payload["trees"]]
            model.n_features_in_ = n_features
        else:
            raise PersistenceError(f"unknown model_kind {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        raise PersistenceError(f"malformed {kind} payload: {exc}") from exc

    meta = {
        "model_kind": kind,
        "feature_names": doc.get("feature_names"),
        "pipeline_fingerprint": doc.get("pipeline_fingerprint"),
    }
    return model, meta
