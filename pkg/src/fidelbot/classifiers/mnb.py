"""Multinomial Naive Bayes with Laplace smoothing, computed in log space."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..features import LabeledExample
from .common import DimensionMismatchError, softmax


class MissingClassError(ValueError):
    """A class in the label map has no training example."""


@dataclass
class MnbModel:
    log_priors: np.ndarray        # (C,)
    log_likelihoods: np.ndarray   # (C, V)
    num_classes: int
    num_features: int

    def predict_proba(self, v: np.ndarray) -> np.ndarray:
        return predict_mnb(self, v)


def train_mnb(train: list[LabeledExample], num_classes: int, alpha: float = 1.0) -> MnbModel:
    """Estimate class priors from frequencies and per-feature likelihoods
    from Laplace-smoothed counts: (count(f,c) + alpha) / (sum_f + alpha*V)."""
    if not train:
        raise MissingClassError("empty training set")
    num_features = len(train[0].vector)
    counts = np.zeros((num_classes, num_features), dtype=np.float64)
    class_sizes = np.zeros(num_classes, dtype=np.float64)
    for ex in train:
        counts[ex.class_index] += ex.vector
        class_sizes[ex.class_index] += 1
    missing = np.nonzero(class_sizes == 0)[0]
    if missing.size:
        raise MissingClassError(f"classes without training examples: {missing.tolist()}")
    log_priors = np.log(class_sizes / class_sizes.sum())
    totals = counts.sum(axis=1, keepdims=True)
    log_likelihoods = np.log((counts + alpha) / (totals + alpha * num_features))
    return MnbModel(log_priors, log_likelihoods, num_classes, num_features)


def predict_mnb(model: MnbModel, v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (model.num_features,):
        raise DimensionMismatchError(f"expected vector of length {model.num_features}, got {v.shape}")
    log_posterior = model.log_priors + model.log_likelihoods @ v
    return softmax(log_posterior)
