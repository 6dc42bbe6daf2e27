"""From-scratch baseline classifiers behind a common sklearn-style surface.

Four methods: full-batch gradient-descent logistic regression, a per-sample
SGD linear classifier, a CART decision tree (Gini impurity, midpoint
thresholds) and a bagged random forest with per-split feature subsampling.
All fits are deterministic functions of (data, config, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .errors import DegenerateTrainingSetError
from .validation import as_float_matrix, as_label_vector, check_is_fitted


def _sigmoid(z):
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _check_two_classes(y):
    if np.unique(y).size < 2:
        raise DegenerateTrainingSetError("training set must contain both classes")


class LogisticRegressionClassifier(BaseEstimator, ClassifierMixin):
    """Log-loss minimized by full-batch gradient descent with L2 on weights.

    The bias starts at the prior log-odds, so a zero-iteration fit predicts
    the majority class everywhere. loss_curve_ records the regularized
    objective before training and after every iteration; with the default
    step size it is non-increasing.
    """

    name = "logreg"

    def __init__(self, learning_rate=0.1, n_iterations=500, weight_decay=1e-3,
                 random_state=0):
        self.learning_rate = learning_rate
        self.n_iterations = n_iterations
        self.weight_decay = weight_decay
        self.random_state = random_state  # unused: the fit is deterministic

    def _objective(self, X, y, w, b):
        p = _sigmoid(X @ w + b)
        nll = -np.mean(y * np.log(np.maximum(p, 1e-12))
                       + (1 - y) * np.log(np.maximum(1 - p, 1e-12)))
        return float(nll + 0.5 * self.weight_decay * np.dot(w, w))

    def fit(self, X, y):
        X = as_float_matrix(X)
        y = as_label_vector(y, n_rows=X.shape[0])
        _check_two_classes(y)
        n = X.shape[0]
        w = np.zeros(X.shape[1])
        pos = y.mean()
        b = math.log(pos / (1.0 - pos))
        curve = [self._objective(X, y, w, b)]
        for _ in range(self.n_iterations):
            residual = _sigmoid(X @ w + b) - y
            w -= self.learning_rate * (X.T @ residual / n + self.weight_decay * w)
            b -= self.learning_rate * residual.mean()
            curve.append(self._objective(X, y, w, b))
        self.weights_ = w
        self.bias_ = b
        self.loss_curve_ = curve
        self.n_features_in_ = X.shape[1]
        return self

    def predict_proba(self, X):
        check_is_fitted(self, "weights_")
        p1 = _sigmoid(as_float_matrix(X, self.n_features_in_) @ self.weights_ + self.bias_)
        return np.column_stack([1.0 - p1, p1])

    def predict(self, X):
        return (self.predict_proba(X)[:, 1] > 0.5).astype(np.int64)


class SGDLinearClassifier(BaseEstimator, ClassifierMixin):
    """Per-sample SGD on log-loss with a harmonic 1/t learning-rate decay.

    Five seed-shuffled passes by default; no regularization term.
    """

    name = "sgd"

    def __init__(self, learning_rate=0.5, n_epochs=5, random_state=0):
        self.learning_rate = learning_rate
        self.n_epochs = n_epochs
        self.random_state = random_state

    def fit(self, X, y):
        X = as_float_matrix(X)
        y = as_label_vector(y, n_rows=X.shape[0])
        _check_two_classes(y)
        rng = np.random.default_rng(self.random_state)
        w = np.zeros(X.shape[1])
        b = 0.0
        t = 0
        for _ in range(self.n_epochs):
            for i in rng.permutation(X.shape[0]):
                t += 1
                eta = self.learning_rate / t
                residual = float(_sigmoid(X[i] @ w + b)) - y[i]
                w -= eta * residual * X[i]
                b -= eta * residual
        self.weights_ = w
        self.bias_ = b
        self.n_features_in_ = X.shape[1]
        return self

    def predict_proba(self, X):
        check_is_fitted(self, "weights_")
        p1 = _sigmoid(as_float_matrix(X, self.n_features_in_) @ self.weights_ + self.bias_)
        return np.column_stack([1.0 - p1, p1])

    def predict(self, X):
        return (self.predict_proba(X)[:, 1] > 0.5).astype(np.int64)


@dataclass
class TreeNode:
    """Leaf (prediction + class counts) or internal split node."""

    prediction: int | None = None
    counts: tuple[int, int] | None = None
    feature: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


def _leaf(y) -> TreeNode:
    c1 = int(y.sum())
    c0 = int(y.size - c1)
    # majority, ties to class 0
    return TreeNode(prediction=1 if c1 > c0 else 0, counts=(c0, c1))


def _split_score(c0l, c1l, nl, c0r, c1r, nr):
    """Sum of per-child squared-count purities; maximizing this over splits
    of a fixed node minimizes the weighted Gini impurity. Written so the
    float arithmetic is a single division and addition per side, making the
    value bit-reproducible against a scalar re-computation."""
    return (c0l * c0l + c1l * c1l) / nl + (c0r * c0r + c1r * c1r) / nr


def _best_split(X, y, feature_indices, min_leaf):
    """Best (feature, threshold) by Gini gain, or None.

    Candidate thresholds are midpoints between consecutive distinct sorted
    values. Both children must keep at least min_leaf rows. Ties break
    toward the lowest feature index, then the lowest threshold; a split must
    strictly beat the unsplit node to be chosen.
    """
    n = y.size
    c1_total = int(y.sum())
    c0_total = n - c1_total
    parent_score = (c0_total * c0_total + c1_total * c1_total) / n
    best = None  # (score, feature, threshold)
    for f in feature_indices:
        order = np.argsort(X[:, f], kind="stable")
        xs = X[order, f]
        ys = y[order]
        cum1 = np.cumsum(ys)
        nl = np.arange(1, n)  # rows in the left child per boundary
        boundary = xs[:-1] != xs[1:]
        valid = boundary & (nl >= min_leaf) & (n - nl >= min_leaf)
        if not valid.any():
            continue
        idx = np.flatnonzero(valid)
        c1l = cum1[idx]
        nl_v = idx + 1
        c0l = nl_v - c1l
        nr_v = n - nl_v
        c1r = c1_total - c1l
        c0r = c0_total - c0l
        scores = _split_score(c0l, c1l, nl_v, c0r, c1r, nr_v)
        k = int(np.argmax(scores))  # first max = lowest threshold
        if scores[k] > parent_score and (best is None or scores[k] > best[0]):
            threshold = (xs[idx[k]] + xs[idx[k] + 1]) / 2.0
            best = (float(scores[k]), int(f), float(threshold))
    if best is None:
        return None
    return best[1], best[2]


def _grow(X, y, depth, max_depth, min_leaf, rng, n_sub_features):
    if y.size < min_leaf or depth >= max_depth or np.all(y == y[0]):
        return _leaf(y)
    d = X.shape[1]
    if n_sub_features is not None and n_sub_features < d:
        feats = np.sort(rng.choice(d, size=n_sub_features, replace=False))
    else:
        feats = np.arange(d)
    found = _best_split(X, y, feats, min_leaf)
    if found is None:
        return _leaf(y)
    feature, threshold = found
    go_left = X[:, feature] <= threshold
    node = _leaf(y)  # keep counts on internal nodes too
    node.feature = feature
    node.threshold = threshold
    node.left = _grow(X[go_left], y[go_left], depth + 1, max_depth, min_leaf,
                      rng, n_sub_features)
    node.right = _grow(X[~go_left], y[~go_left], depth + 1, max_depth, min_leaf,
                       rng, n_sub_features)
    return node


def _predict_tree(node: TreeNode, X) -> np.ndarray:
    out = np.empty(X.shape[0], dtype=np.int64)
    for i, row in enumerate(X):
        cur = node
        while not cur.is_leaf:
            cur = cur.left if row[cur.feature] <= cur.threshold else cur.right
        out[i] = cur.prediction
    return out


class DecisionTreeClassifier(BaseEstimator, ClassifierMixin):
    """CART-style binary tree on Gini impurity."""

    name = "tree"

    def __init__(self, max_depth=5, min_leaf=20, random_state=0):
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.random_state = random_state  # unused: full-feature fits are deterministic

    def fit(self, X, y):
        X = as_float_matrix(X)
        y = as_label_vector(y, n_rows=X.shape[0])
        if y.size == 0:
            raise DegenerateTrainingSetError("empty training set")
        self.root_ = _grow(X, y, 0, self.max_depth, self.min_leaf, None, None)
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "root_")
        return _predict_tree(self.root_, as_float_matrix(X, self.n_features_in_))


class RandomForestClassifier(BaseEstimator, ClassifierMixin):
    """Bagging over CART trees with sqrt(d) features sampled per split.

    Per-tree seeds are spawned deterministically from random_state, so the
    assembled forest is independent of any training schedule; prediction is
    a majority vote with ties going to class 0.
    """

    name = "forest"

    def __init__(self, n_trees=100, max_depth=5, min_leaf=1,
                 feature_subsample="sqrt", bootstrap=True, random_state=0):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.feature_subsample = feature_subsample
        self.bootstrap = bootstrap
        self.random_state = random_state

    def _n_sub_features(self, d):
        if self.feature_subsample is None:
            return None
        if self.feature_subsample == "sqrt":
            return max(1, int(math.sqrt(d)))
        return int(self.feature_subsample)

    def fit(self, X, y):
        X = as_float_matrix(X)
        y = as_label_vector(y, n_rows=X.shape[0])
        if y.size == 0:
            raise DegenerateTrainingSetError("empty training set")
        n_sub = self._n_sub_features(X.shape[1])
        self.trees_ = []
        for child_seq in np.random.SeedSequence(self.random_state).spawn(self.n_trees):
            rng = np.random.default_rng(child_seq)
            if self.bootstrap:
                rows = rng.integers(0, X.shape[0], size=X.shape[0])
                Xb, yb = X[rows], y[rows]
            else:
                Xb, yb = X, y
            self.trees_.append(
                _grow(Xb, yb, 0, self.max_depth, self.min_leaf, rng, n_sub)
            )
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "trees_")
        X = as_float_matrix(X, self.n_features_in_)
        votes = np.zeros(X.shape[0], dtype=np.int64)
        for tree in self.trees_:
            votes += _predict_tree(tree, X)
        return (votes > len(self.trees_) - votes).astype(np.int64)
