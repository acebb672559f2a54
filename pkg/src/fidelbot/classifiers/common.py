"""Shared classifier pieces: softmax, activations, the ranking interface."""

from __future__ import annotations

from enum import Enum

import numpy as np


class DimensionMismatchError(ValueError):
    pass


class ActivationKind(str, Enum):
    RELU = "relu"
    SIGMOID = "sigmoid"
    TANH = "tanh"
    LINEAR = "linear"


def softmax(scores: np.ndarray) -> np.ndarray:
    """Max-shifted softmax along the last axis; safe for large scores."""
    scores = np.asarray(scores, dtype=np.float64)
    shifted = scores - scores.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def activation_value(kind: ActivationKind, x: np.ndarray) -> np.ndarray:
    if kind == ActivationKind.RELU:
        return np.maximum(0.0, x)
    if kind == ActivationKind.SIGMOID:
        return 1.0 / (1.0 + np.exp(-x))
    if kind == ActivationKind.TANH:
        return np.tanh(x)
    return np.asarray(x, dtype=np.float64)


def activation_derivative(kind: ActivationKind, x: np.ndarray) -> np.ndarray:
    """Derivative at pre-activation x; relu' at 0 is defined as 0."""
    if kind == ActivationKind.RELU:
        return np.where(x > 0.0, 1.0, 0.0)
    if kind == ActivationKind.SIGMOID:
        s = 1.0 / (1.0 + np.exp(-x))
        return s * (1.0 - s)
    if kind == ActivationKind.TANH:
        return 1.0 - np.tanh(x) ** 2
    return np.ones_like(np.asarray(x, dtype=np.float64))


def rank_distribution(probs: np.ndarray) -> list[tuple[int, float]]:
    """Full descending ranking; ties break toward the lower class index."""
    probs = np.asarray(probs, dtype=np.float64)
    order = np.argsort(-probs, kind="stable")
    return [(int(i), float(probs[i])) for i in order]


def predict(model, v: np.ndarray) -> list[tuple[int, float]]:
    """Rank classes for any model exposing predict_proba."""
    return rank_distribution(model.predict_proba(v))
