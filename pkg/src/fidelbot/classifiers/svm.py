"""One-vs-rest linear SVM trained by stochastic subgradient descent.

Per class c the objective is lambda*||w||^2 + mean hinge loss over the
training set with y = +1 for class c and -1 otherwise. The step size decays
as eta0 / (1 + lambda*t) with t counting update steps. Margins of all
classes are turned into a distribution with softmax, which preserves the
max-margin argmax.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..features import LabeledExample
from .common import DimensionMismatchError, softmax


class SingleClassError(ValueError):
    pass


@dataclass
class SvmHyper:
    l2_lambda: float = 1e-4
    epochs: int = 100
    eta0: float = 1.0
    seed: int = 42


@dataclass
class SvmModel:
    weights: np.ndarray   # (C, V)
    biases: np.ndarray    # (C,)
    hyper: SvmHyper = field(default_factory=SvmHyper)

    def predict_proba(self, v: np.ndarray) -> np.ndarray:
        return predict_svm(self, v)


def train_svm(train: list[LabeledExample], num_classes: int, hyper: SvmHyper | None = None) -> SvmModel:
    hyper = hyper or SvmHyper()
    if num_classes < 2:
        raise SingleClassError("one-vs-rest needs at least 2 classes")
    if not train:
        raise ValueError("empty training set")
    num_features = len(train[0].vector)
    w = np.zeros((num_classes, num_features), dtype=np.float64)
    b = np.zeros(num_classes, dtype=np.float64)
    X = np.stack([ex.vector for ex in train])
    y = np.array([ex.class_index for ex in train])
    signs = np.where(y[:, None] == np.arange(num_classes)[None, :], 1.0, -1.0)  # (N, C)

    rng = np.random.default_rng(hyper.seed)
    lam = hyper.l2_lambda
    t = 0
    for _ in range(hyper.epochs):
        for i in rng.permutation(len(train)):
            t += 1
            eta = hyper.eta0 / (1.0 + lam * t)
            x = X[i]
            s = signs[i]                      # (C,) +1/-1 per one-vs-rest problem
            margins = s * (w @ x + b)
            violated = margins < 1.0
            # subgradient of lambda*||w||^2 + hinge at this sample
            w *= 1.0 - 2.0 * eta * lam
            if violated.any():
                sv = np.where(violated, s, 0.0)
                w += eta * sv[:, None] * x[None, :]
                b += eta * sv
    return SvmModel(w, b, hyper)


def predict_svm(model: SvmModel, v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (model.weights.shape[1],):
        raise DimensionMismatchError(f"expected vector of length {model.weights.shape[1]}, got {v.shape}")
    return softmax(model.weights @ v + model.biases)
