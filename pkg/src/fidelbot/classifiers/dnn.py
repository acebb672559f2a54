"""Dense feedforward intent classifier trained with hand-written
backpropagation and Adam.

Architecture: input (vocabulary size) -> two hidden layers (128 and 64
units by default) -> softmax output over classes. Hidden layers use a
configurable activation and inverted dropout during training, so inference
needs no rescaling. The loss is categorical cross-entropy.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..features import LabeledExample
from .common import ActivationKind, DimensionMismatchError, activation_derivative, activation_value, softmax


class BadDimensionsError(ValueError):
    pass


class ShapeMismatchError(ValueError):
    pass


class StaleCacheError(ValueError):
    """Backward pass got a cache produced for a different model."""


class EmptyTrainingSetError(ValueError):
    pass


@dataclass
class TrainConfig:
    epochs: int = 150
    batch_size: int = 8
    dropout_rate: float = 0.2
    seed: int = 42
    activation: ActivationKind = ActivationKind.RELU
    hidden_dims: tuple[int, int] = (128, 64)
    learning_rate: float = 1e-4

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be >= 1")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError("dropout_rate must be in [0, 1)")


@dataclass
class EpochReport:
    epoch: int
    loss: float
    accuracy: float
    mse: float
    val_loss: float | None = None
    val_accuracy: float | None = None


@dataclass
class DnnModel:
    weights: list[np.ndarray]   # (V,H1), (H1,H2), (H2,C)
    biases: list[np.ndarray]    # (H1,), (H2,), (C,)
    hidden_activation: ActivationKind
    dropout_rate: float
    seed: int

    @property
    def layer_dims(self) -> tuple[int, ...]:
        return (self.weights[0].shape[0],) + tuple(w.shape[1] for w in self.weights)

    def parameters(self) -> list[np.ndarray]:
        return [self.weights[0], self.biases[0], self.weights[1], self.biases[1],
                self.weights[2], self.biases[2]]

    def predict_proba(self, v: np.ndarray) -> np.ndarray:
        probs, _ = dnn_forward(self, v, training=False)
        return probs


@dataclass
class ForwardCache:
    x: np.ndarray
    pre_activations: list[np.ndarray]   # Z1, Z2
    dropped: list[np.ndarray]           # A1 after dropout, A2 after dropout
    masks: list[np.ndarray | None]
    probs: np.ndarray
    model: DnnModel


def init_dnn(num_features: int, num_classes: int, config: TrainConfig) -> DnnModel:
    """He-initialize for relu, Glorot-uniform otherwise; zero biases."""
    if num_features < 1 or num_classes < 2:
        raise BadDimensionsError(f"need V >= 1 and C >= 2, got V={num_features}, C={num_classes}")
    dims = (num_features, *config.hidden_dims, num_classes)
    rng = np.random.default_rng(config.seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        if config.activation == ActivationKind.RELU:
            w = rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(fan_in, fan_out))
        else:
            limit = np.sqrt(6.0 / (fan_in + fan_out))
            w = rng.uniform(-limit, limit, size=(fan_in, fan_out))
        weights.append(w)
        biases.append(np.zeros(fan_out))
    return DnnModel(weights, biases, config.activation, config.dropout_rate, config.seed)


def dnn_forward(
    model: DnnModel,
    x: np.ndarray,
    training: bool = False,
    rng: np.random.Generator | None = None,
) -> tuple[np.ndarray, ForwardCache]:
    """Forward pass for one vector or a batch of rows.

    With training=True, inverted dropout (scale 1/(1-rate)) is applied to
    both hidden layers using the supplied rng.
    """
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    batch = x[None, :] if single else x
    if batch.shape[1] != model.weights[0].shape[0]:
        raise DimensionMismatchError(
            f"expected input of width {model.weights[0].shape[0]}, got {batch.shape[1]}"
        )
    use_dropout = training and model.dropout_rate > 0.0
    if use_dropout and rng is None:
        raise ValueError("training forward with dropout needs an rng")

    pre, dropped, masks = [], [], []
    a = batch
    for w, b in zip(model.weights[:-1], model.biases[:-1]):
        z = a @ w + b
        h = activation_value(model.hidden_activation, z)
        if use_dropout:
            keep = 1.0 - model.dropout_rate
            mask = (rng.random(h.shape) < keep) / keep
            h = h * mask
        else:
            mask = None
        pre.append(z)
        dropped.append(h)
        masks.append(mask)
        a = h
    logits = a @ model.weights[-1] + model.biases[-1]
    probs = softmax(logits)
    cache = ForwardCache(batch, pre, dropped, masks, probs, model)
    return (probs[0] if single else probs), cache


def dnn_backward(model: DnnModel, cache: ForwardCache, targets: int | np.ndarray) -> list[np.ndarray]:
    """Gradients of mean cross-entropy -log p_target w.r.t. parameters.

    Returns a flat list matching model.parameters(). For the output layer
    the error term is (p - onehot) / batch_size.
    """
    if cache.model is not model:
        raise StaleCacheError("cache was produced by a different model")
    targets = np.atleast_1d(np.asarray(targets, dtype=np.int64))
    n, c = cache.probs.shape
    if targets.shape != (n,):
        raise ShapeMismatchError(f"expected {n} targets, got {targets.shape}")

    delta = cache.probs.copy()
    delta[np.arange(n), targets] -= 1.0
    delta /= n

    grads: list[np.ndarray] = []
    # output layer
    g_w3 = cache.dropped[1].T @ delta
    g_b3 = delta.sum(axis=0)
    # second hidden layer
    d_h2 = delta @ model.weights[2].T
    if cache.masks[1] is not None:
        d_h2 = d_h2 * cache.masks[1]
    d_z2 = d_h2 * activation_derivative(model.hidden_activation, cache.pre_activations[1])
    g_w2 = cache.dropped[0].T @ d_z2
    g_b2 = d_z2.sum(axis=0)
    # first hidden layer
    d_h1 = d_z2 @ model.weights[1].T
    if cache.masks[0] is not None:
        d_h1 = d_h1 * cache.masks[0]
    d_z1 = d_h1 * activation_derivative(model.hidden_activation, cache.pre_activations[0])
    g_w1 = cache.x.T @ d_z1
    g_b1 = d_z1.sum(axis=0)
    grads.extend([g_w1, g_b1, g_w2, g_b2, g_w3, g_b3])
    return grads


@dataclass
class AdamHyper:
    learning_rate: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8


@dataclass
class AdamState:
    t: int
    m: list[np.ndarray]
    v: list[np.ndarray]
    hyper: AdamHyper = field(default_factory=AdamHyper)


def adam_init(params: list[np.ndarray], learning_rate: float = 1e-4) -> AdamState:
    return AdamState(
        t=0,
        m=[np.zeros_like(p) for p in params],
        v=[np.zeros_like(p) for p in params],
        hyper=AdamHyper(learning_rate=learning_rate),
    )


def adam_step(state: AdamState, params: list[np.ndarray], grads: list[np.ndarray]) -> tuple[list[np.ndarray], AdamState]:
    """One Adam update, in place on params: biased moment estimates, bias
    correction, then theta -= lr * m_hat / (sqrt(v_hat) + eps)."""
    if len(params) != len(state.m) or len(grads) != len(params):
        raise ShapeMismatchError("parameter/gradient count does not match optimizer state")
    h = state.hyper
    state.t += 1
    t = state.t
    for i, (p, g) in enumerate(zip(params, grads)):
        if p.shape != g.shape or p.shape != state.m[i].shape:
            raise ShapeMismatchError(f"shape mismatch at parameter {i}: {p.shape} vs {g.shape}")
        state.m[i] = h.beta1 * state.m[i] + (1.0 - h.beta1) * g
        state.v[i] = h.beta2 * state.v[i] + (1.0 - h.beta2) * g * g
        m_hat = state.m[i] / (1.0 - h.beta1 ** t)
        v_hat = state.v[i] / (1.0 - h.beta2 ** t)
        p -= h.learning_rate * m_hat / (np.sqrt(v_hat) + h.epsilon)
    return params, state


def evaluate_dnn(model: DnnModel, examples: list[LabeledExample]) -> tuple[float, float, float]:
    """Inference-mode (loss, accuracy, mse) over a dataset.

    mse is the mean over examples of the summed squared difference between
    the predicted distribution and the one-hot target, so it lies in [0, 2].
    """
    X = np.stack([ex.vector for ex in examples])
    y = np.array([ex.class_index for ex in examples])
    probs, _ = dnn_forward(model, X, training=False)
    p_target = np.maximum(probs[np.arange(len(y)), y], 1e-300)
    loss = float(-np.log(p_target).mean())
    accuracy = float((probs.argmax(axis=1) == y).mean())
    onehot = np.zeros_like(probs)
    onehot[np.arange(len(y)), y] = 1.0
    mse = float(((probs - onehot) ** 2).sum(axis=1).mean())
    return loss, accuracy, mse


def train_dnn(
    train: list[LabeledExample],
    config: TrainConfig,
    validation: list[LabeledExample] | None = None,
    progress=None,
) -> tuple[DnnModel, list[EpochReport]]:
    """Mini-batch training: seeded shuffle per epoch, mean-over-batch
    gradients, one Adam step per batch, one EpochReport per epoch."""
    if not train:
        raise EmptyTrainingSetError("empty training set")
    num_features = len(train[0].vector)
    num_classes = max(ex.class_index for ex in train) + 1
    if validation:
        num_classes = max(num_classes, max(ex.class_index for ex in validation) + 1)
    model = init_dnn(num_features, max(num_classes, 2), config)
    params = model.parameters()
    state = adam_init(params, learning_rate=config.learning_rate)
    rng = np.random.default_rng([config.seed, 1])

    X = np.stack([ex.vector for ex in train])
    y = np.array([ex.class_index for ex in train])
    reports: list[EpochReport] = []
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(len(train))
        for start in range(0, len(train), config.batch_size):
            idx = order[start:start + config.batch_size]
            _, cache = dnn_forward(model, X[idx], training=True, rng=rng)
            grads = dnn_backward(model, cache, y[idx])
            adam_step(state, params, grads)
        loss, accuracy, mse = evaluate_dnn(model, train)
        report = EpochReport(epoch, loss, accuracy, mse)
        if validation:
            val_loss, val_acc, _ = evaluate_dnn(model, validation)
            report.val_loss, report.val_accuracy = val_loss, val_acc
        reports.append(report)
        if progress is not None:
            progress(report)
    return model, reports
