"""From-scratch feedforward network: ReLU hidden layers, softmax head,
cross-entropy loss, Adam with coupled L2 weight decay, mini-batch training
with early stopping on a held-out validation slice.

Everything is plain numpy in float64. All randomness flows from one seed,
expanded into independent streams for initialization, the validation split
and the per-epoch shuffles, so a (seed, data, config) triple reproduces the
run exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .errors import (
    DegenerateTrainingSetError,
    NonFiniteActivationError,
    ShapeMismatchError,
)
from .pipeline import SplitSpec, stratified_split_indices
from .validation import as_float_matrix, as_label_vector, check_is_fitted

# The churn model: 19 inputs, three 32-unit hidden layers, 2-way softmax.
LAYER_SIZES = (19, 32, 32, 32, 2)


@dataclass(frozen=True)
class MlpParams:
    """Weights and biases, one entry per layer transition."""

    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]

    @property
    def layer_sizes(self) -> tuple[int, ...]:
        return (self.weights[0].shape[0],) + tuple(w.shape[1] for w in self.weights)

    def copy(self) -> "MlpParams":
        return MlpParams(
            weights=tuple(w.copy() for w in self.weights),
            biases=tuple(b.copy() for b in self.biases),
        )


def init_params(seed: int, layer_sizes=LAYER_SIZES) -> MlpParams:
    """Fan-in-scaled uniform weights, U(-1/sqrt(fan_in), 1/sqrt(fan_in)); zero biases."""
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        bound = 1.0 / np.sqrt(fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MlpParams(weights=tuple(weights), biases=tuple(biases))


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max subtraction so saturated logits cannot overflow."""
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def _forward_cached(params: MlpParams, X: np.ndarray):
    """Forward pass keeping post-ReLU activations for backprop."""
    activations = [X]
    a = X
    for w, b in zip(params.weights[:-1], params.biases[:-1]):
        a = np.maximum(a @ w + b, 0.0)
        activations.append(a)
    logits = a @ params.weights[-1] + params.biases[-1]
    return activations, softmax(logits)


def forward(params: MlpParams, X: np.ndarray) -> np.ndarray:
    """Class probabilities, one row per input row; rows sum to 1."""
    X = as_float_matrix(X, n_features=params.weights[0].shape[0])
    _, probs = _forward_cached(params, X)
    if not np.isfinite(probs).all():
        raise NonFiniteActivationError("forward pass produced non-finite values")
    return probs


def cross_entropy(probs: np.ndarray, labels: np.ndarray) -> float:
    """Mean negative log-probability of the true class, floored at 1e-12."""
    labels = np.asarray(labels)
    if probs.shape[0] != labels.shape[0]:
        raise ShapeMismatchError(
            f"{probs.shape[0]} probability rows vs {labels.shape[0]} labels"
        )
    p_true = probs[np.arange(labels.shape[0]), labels]
    return float(-np.mean(np.log(np.maximum(p_true, 1e-12))))


def backward(params: MlpParams, X: np.ndarray, labels: np.ndarray) -> MlpParams:
    """Analytic gradients of cross_entropy(forward(params, X), labels).

    Returned object is shaped exactly like params.
    """
    X = as_float_matrix(X, n_features=params.weights[0].shape[0])
    labels = as_label_vector(labels, n_rows=X.shape[0])
    n = X.shape[0]
    activations, probs = _forward_cached(params, X)

    # Softmax + cross-entropy head: dL/dlogits = (p - onehot) / n.
    delta = probs.copy()
    delta[np.arange(n), labels] -= 1.0
    delta /= n

    grad_w = [None] * len(params.weights)
    grad_b = [None] * len(params.biases)
    for layer in range(len(params.weights) - 1, -1, -1):
        grad_w[layer] = activations[layer].T @ delta
        grad_b[layer] = delta.sum(axis=0)
        if layer > 0:
            delta = (delta @ params.weights[layer].T) * (activations[layer] > 0.0)
    return MlpParams(weights=tuple(grad_w), biases=tuple(grad_b))


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    weight_decay: float = 1e-3
    batch_size: int = 32
    max_epochs: int = 100
    patience: int = 10
    validation_fraction: float = 0.1
    seed: int = 42

    def __post_init__(self):
        if self.patience < 1:
            raise ValueError("patience must be >= 1")
        if min(self.learning_rate, self.beta1, self.beta2, self.epsilon) <= 0:
            raise ValueError("rates must be positive")


@dataclass(frozen=True)
class AdamState:
    """First/second moment accumulators shaped like the parameters."""

    m: MlpParams
    v: MlpParams
    t: int = 0


def adam_init(params: MlpParams) -> AdamState:
    zeros = MlpParams(
        weights=tuple(np.zeros_like(w) for w in params.weights),
        biases=tuple(np.zeros_like(b) for b in params.biases),
    )
    return AdamState(m=zeros, v=zeros.copy(), t=0)


def adam_step(
    params: MlpParams, grads: MlpParams, state: AdamState, cfg: TrainConfig
) -> tuple[MlpParams, AdamState]:
    """One bias-corrected Adam update.

    Weight decay is coupled L2: lambda * w is added to the gradient of every
    parameter tensor before the moment updates, matching an optimizer-level
    L2 penalty.
    """
    t = state.t + 1
    new_p, new_m, new_v = [], [], []
    for group in ("weights", "biases"):
        for p, g, m, v in zip(
            getattr(params, group),
            getattr(grads, group),
            getattr(state.m, group),
            getattr(state.v, group),
        ):
            g = g + cfg.weight_decay * p
            m = cfg.beta1 * m + (1.0 - cfg.beta1) * g
            v = cfg.beta2 * v + (1.0 - cfg.beta2) * g * g
            m_hat = m / (1.0 - cfg.beta1**t)
            v_hat = v / (1.0 - cfg.beta2**t)
            p = p - cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.epsilon)
            new_p.append(p)
            new_m.append(m)
            new_v.append(v)
    k = len(params.weights)
    pack = lambda arrs: MlpParams(weights=tuple(arrs[:k]), biases=tuple(arrs[k:]))
    return pack(new_p), AdamState(m=pack(new_m), v=pack(new_v), t=t)


@dataclass
class TrainHistory:
    train_loss: list[float] = field(default_factory=list)
    val_loss: list[float] = field(default_factory=list)
    val_accuracy: list[float] = field(default_factory=list)
    best_epoch: int = 0
    stopped_epoch: int = 0


def train(
    X, y, cfg: TrainConfig = TrainConfig(), layer_sizes=None
) -> tuple[MlpParams, TrainHistory]:
    """Mini-batch Adam training with early stopping.

    A stratified validation_fraction slice of the data is held out; training
    stops once validation loss has not improved for `patience` consecutive
    epochs, and the parameters from the best-validation epoch are returned.
    """
    X = as_float_matrix(X)
    y = as_label_vector(y, n_rows=X.shape[0])
    if np.unique(y).size < 2:
        raise DegenerateTrainingSetError("training set must contain both classes")
    if layer_sizes is None:
        layer_sizes = (X.shape[1],) + LAYER_SIZES[1:]
    if layer_sizes[0] != X.shape[1]:
        raise ShapeMismatchError(
            f"network expects {layer_sizes[0]} inputs, data has {X.shape[1]}"
        )

    # Independent deterministic streams per consumer of randomness.
    seed_init, seed_split, seed_shuffle = (
        int(s) for s in np.random.SeedSequence(cfg.seed).generate_state(3)
    )
    fit_idx, val_idx = stratified_split_indices(
        y, SplitSpec(test_fraction=cfg.validation_fraction, seed=seed_split)
    )
    X_fit, y_fit = X[fit_idx], y[fit_idx]
    X_val, y_val = X[val_idx], y[val_idx]

    params = init_params(seed_init, layer_sizes)
    state = adam_init(params)
    shuffle_rng = np.random.default_rng(seed_shuffle)
    history = TrainHistory()
    best_val = np.inf
    best_params = params.copy()
    epochs_without_improvement = 0

    for epoch in range(1, cfg.max_epochs + 1):
        order = shuffle_rng.permutation(X_fit.shape[0])
        for start in range(0, order.size, cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            grads = backward(params, X_fit[batch], y_fit[batch])
            params, state = adam_step(params, grads, state, cfg)

        history.train_loss.append(cross_entropy(forward(params, X_fit), y_fit))
        val_probs = forward(params, X_val)
        val_loss = cross_entropy(val_probs, y_val)
        history.val_loss.append(val_loss)
        history.val_accuracy.append(
            float(np.mean(np.argmax(val_probs, axis=1) == y_val))
        )

        if val_loss < best_val:
            best_val = val_loss
            best_params = params.copy()
            history.best_epoch = epoch
            epochs_without_improvement = 0
        else:
            epochs_without_improvement += 1
        history.stopped_epoch = epoch
        if epochs_without_improvement >= cfg.patience:
            break

    return best_params, history


def predict_proba(params: MlpParams, X) -> np.ndarray:
    return forward(params, X)


def predict(params: MlpParams, X) -> np.ndarray:
    """Argmax labels; an exact tie goes to class 0."""
    return np.argmax(forward(params, X), axis=1)


class MlpClassifier(BaseEstimator, ClassifierMixin):
    """Estimator facade over the functional training loop."""

    name = "mlp"

    def __init__(
        self,
        hidden_layer_sizes=(32, 32, 32),
        learning_rate=1e-3,
        beta1=0.9,
        beta2=0.999,
        epsilon=1e-8,
        weight_decay=1e-3,
        batch_size=32,
        max_epochs=100,
        patience=10,
        validation_fraction=0.1,
        random_state=42,
    ):
        self.hidden_layer_sizes = hidden_layer_sizes
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.weight_decay = weight_decay
        self.batch_size = batch_size
        self.max_epochs = max_epochs
        self.patience = patience
        self.validation_fraction = validation_fraction
        self.random_state = random_state

    def _config(self) -> TrainConfig:
        return TrainConfig(
            learning_rate=self.learning_rate,
            beta1=self.beta1,
            beta2=self.beta2,
            epsilon=self.epsilon,
            weight_decay=self.weight_decay,
            batch_size=self.batch_size,
            max_epochs=self.max_epochs,
            patience=self.patience,
            validation_fraction=self.validation_fraction,
            seed=self.random_state,
        )

    def fit(self, X, y):
        X = as_float_matrix(X)
        layer_sizes = (X.shape[1], *self.hidden_layer_sizes, 2)
        self.params_, self.history_ = train(X, y, self._config(), layer_sizes)
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "params_")
        return predict(self.params_, X)

    def predict_proba(self, X):
        check_is_fitted(self, "params_")
        return predict_proba(self.params_, X)
