"""Model artifact serialization.

One UTF-8 JSON document carries everything needed to serve a trained
classifier: vocabulary, label map, numeric parameters as double arrays, the
fingerprint of the preprocessing rules it was trained under, and a config
echo. Loading re-checks shapes and, when given the active rules, the
fingerprint, so a model can never silently meet different preprocessing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .classifiers import ActivationKind, DnnModel, MnbModel, SvmHyper, SvmModel
from .features import LabelMap, VectorMode, Vocabulary
from .textproc import PreprocessConfig

FORMAT_VERSION = 1


class ArtifactError(ValueError):
    pass


class ArtifactMismatchError(ArtifactError):
    """Version, fingerprint or shape disagreement."""


@dataclass
class ModelArtifact:
    kind: str                      # "mnb" | "svm" | "dnn"
    preprocess_fingerprint: str
    vocabulary: Vocabulary
    labels: LabelMap
    vector_mode: VectorMode
    model: MnbModel | SvmModel | DnnModel
    train_config: dict
    metadata: dict
    format_version: int = FORMAT_VERSION


def _params_to_json(kind: str, model) -> dict:
    if kind == "mnb":
        return {
            "log_priors": model.log_priors.tolist(),
            "log_likelihoods": model.log_likelihoods.tolist(),
        }
    if kind == "svm":
        return {
            "weights": model.weights.tolist(),
            "biases": model.biases.tolist(),
            "hyper": {
                "l2_lambda": model.hyper.l2_lambda,
                "epochs": model.hyper.epochs,
                "eta0": model.hyper.eta0,
                "seed": model.hyper.seed,
            },
        }
    if kind == "dnn":
        return {
            "weights": [w.tolist() for w in model.weights],
            "biases": [b.tolist() for b in model.biases],
            "hidden_activation": model.hidden_activation.value,
            "dropout_rate": model.dropout_rate,
            "seed": model.seed,
        }
    raise ArtifactError(f"unknown classifier kind {kind!r}")


def save_artifact(artifact: ModelArtifact, path: str | Path):
    doc = {
        "format_version": artifact.format_version,
        "kind": artifact.kind,
        "preprocess_fingerprint": artifact.preprocess_fingerprint,
        "vocabulary": list(artifact.vocabulary.stems),
        "labels": list(artifact.labels.tags),
        "vector_mode": artifact.vector_mode,
        "params": _params_to_json(artifact.kind, artifact.model),
        "train_config": artifact.train_config,
        "metadata": artifact.metadata,
    }
    Path(path).write_text(
        json.dumps(doc, ensure_ascii=False, sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )


def _require(condition: bool, message: str):
    if not condition:
        raise ArtifactMismatchError(message)


def _model_from_json(kind: str, params: dict, num_features: int, num_classes: int):
    if kind == "mnb":
        log_priors = np.asarray(params["log_priors"], dtype=np.float64)
        log_likelihoods = np.asarray(params["log_likelihoods"], dtype=np.float64)
        _require(log_priors.shape == (num_classes,), "mnb prior shape mismatch")
        _require(
            log_likelihoods.shape == (num_classes, num_features),
            "mnb likelihood shape mismatch",
        )
        return MnbModel(log_priors, log_likelihoods, num_classes, num_features)
    if kind == "svm":
        weights = np.asarray(params["weights"], dtype=np.float64)
        biases = np.asarray(params["biases"], dtype=np.float64)
        _require(weights.shape == (num_classes, num_features), "svm weight shape mismatch")
        _require(biases.shape == (num_classes,), "svm bias shape mismatch")
        h = params.get("hyper", {})
        hyper = SvmHyper(
            l2_lambda=float(h.get("l2_lambda", 1e-4)),
            epochs=int(h.get("epochs", 100)),
            eta0=float(h.get("eta0", 1.0)),
            seed=int(h.get("seed", 42)),
        )
        return SvmModel(weights, biases, hyper)
    if kind == "dnn":
        weights = [np.asarray(w, dtype=np.float64) for w in params["weights"]]
        biases = [np.asarray(b, dtype=np.float64) for b in params["biases"]]
        _require(len(weights) == 3 and len(biases) == 3, "dnn expects 3 layers")
        _require(weights[0].shape[0] == num_features, "dnn input dim mismatch")
        _require(weights[-1].shape[1] == num_classes, "dnn output dim mismatch")
        for i in range(3):
            _require(
                biases[i].shape == (weights[i].shape[1],),
                f"dnn layer {i} bias shape mismatch",
            )
            if i > 0:
                _require(
                    weights[i].shape[0] == weights[i - 1].shape[1],
                    f"dnn layer {i} chain mismatch",
                )
        return DnnModel(
            weights=weights,
            biases=biases,
            hidden_activation=ActivationKind(params["hidden_activation"]),
            dropout_rate=float(params["dropout_rate"]),
            seed=int(params.get("seed", 0)),
        )
    raise ArtifactError(f"unknown classifier kind {kind!r}")


def load_artifact(
    path: str | Path,
    expected_config: PreprocessConfig | None = None,
) -> ModelArtifact:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ArtifactError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise ArtifactError(f"{path}: artifact must be a JSON object")

    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ArtifactMismatchError(
            f"{path}: format_version {version!r}, this build reads {FORMAT_VERSION}"
        )
    kind = doc.get("kind")
    if kind not in ("mnb", "svm", "dnn"):
        raise ArtifactError(f"{path}: unknown classifier kind {kind!r}")

    try:
        vocabulary = Vocabulary(tuple(doc["vocabulary"]))
        labels = LabelMap(tuple(doc["labels"]))
        fingerprint = doc["preprocess_fingerprint"]
        vector_mode = doc.get("vector_mode", "binary")
        model = _model_from_json(kind, doc["params"], len(vocabulary), len(labels.tags))
    except (KeyError, TypeError) as exc:
        raise ArtifactError(f"{path}: missing or malformed field ({exc})") from exc

    if vector_mode not in ("binary", "count"):
        raise ArtifactError(f"{path}: unknown vector_mode {vector_mode!r}")
    if expected_config is not None and fingerprint != expected_config.fingerprint:
        raise ArtifactMismatchError(
            f"{path}: model was trained under preprocessing {fingerprint[:12]}..., "
            f"active rules hash to {expected_config.fingerprint[:12]}..."
        )
    return ModelArtifact(
        kind=kind,
        preprocess_fingerprint=fingerprint,
        vocabulary=vocabulary,
        labels=labels,
        vector_mode=vector_mode,
        model=model,
        train_config=doc.get("train_config", {}),
        metadata=doc.get("metadata", {}),
    )
