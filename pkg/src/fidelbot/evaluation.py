"""Classification metrics, classifier comparison and activation sweep."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .classifiers import (
    ActivationKind,
    SvmHyper,
    TrainConfig,
    train_dnn,
    train_mnb,
    train_svm,
)
from .features import LabeledExample, make_dataset, split_dataset
from .intents import IntentCatalog


class EmptyMatrixError(ValueError):
    pass


@dataclass
class ConfusionMatrix:
    counts: np.ndarray  # (C, C), rows = true class, columns = predicted

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def num_classes(self) -> int:
        return self.counts.shape[0]


@dataclass
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int
    precision_defined: bool
    recall_defined: bool


@dataclass
class MetricsReport:
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    per_class: list[ClassMetrics]
    micro_precision: float
    micro_recall: float
    micro_f1: float
    cross_entropy: float | None = None


def confusion(model, test: list[LabeledExample]) -> ConfusionMatrix:
    """Top-1 confusion counts; matrix size covers every class seen."""
    if not test:
        raise EmptyMatrixError("empty test set")
    num_classes = max(ex.class_index for ex in test) + 1
    probs0 = model.predict_proba(test[0].vector)
    num_classes = max(num_classes, len(probs0))
    counts = np.zeros((num_classes, num_classes), dtype=np.int64)
    for ex in test:
        predicted = int(np.argmax(model.predict_proba(ex.vector)))
        counts[ex.class_index, predicted] += 1
    return ConfusionMatrix(counts)


def metrics_from_confusion(cm: ConfusionMatrix, cross_entropy: float | None = None) -> MetricsReport:
    """Accuracy, per-class and macro precision/recall/f1.

    Zero-denominator precision/recall are reported as 0 with a defined=False
    flag. Macro averages run over classes present in the test set (nonzero
    row); micro values are included for the other reading of averaging.
    """
    counts = cm.counts
    total = counts.sum()
    if total == 0:
        raise EmptyMatrixError("confusion matrix has no observations")
    tp = np.diag(counts).astype(np.float64)
    row = counts.sum(axis=1).astype(np.float64)   # true-class totals
    col = counts.sum(axis=0).astype(np.float64)   # predicted-class totals

    per_class = []
    for c in range(cm.num_classes):
        p_defined = col[c] > 0
        r_defined = row[c] > 0
        p = tp[c] / col[c] if p_defined else 0.0
        r = tp[c] / row[c] if r_defined else 0.0
        f1 = 2 * p * r / (p + r) if (p + r) > 0 else 0.0
        per_class.append(ClassMetrics(p, r, f1, int(row[c]), bool(p_defined), bool(r_defined)))

    present = [c for c in range(cm.num_classes) if row[c] > 0]
    macro_p = sum(per_class[c].precision for c in present) / len(present)
    macro_r = sum(per_class[c].recall for c in present) / len(present)
    macro_f1 = sum(per_class[c].f1 for c in present) / len(present)
    micro = float(tp.sum() / total)  # == accuracy for single-label top-1
    return MetricsReport(
        accuracy=float(tp.sum() / total),
        macro_precision=macro_p,
        macro_recall=macro_r,
        macro_f1=macro_f1,
        per_class=per_class,
        micro_precision=micro,
        micro_recall=micro,
        micro_f1=micro,
        cross_entropy=cross_entropy,
    )


def mean_cross_entropy(model, examples: list[LabeledExample]) -> float:
    losses = []
    for ex in examples:
        p = np.maximum(model.predict_proba(ex.vector)[ex.class_index], 1e-300)
        losses.append(-np.log(p))
    return float(np.mean(losses))


def evaluate_model(model, test: list[LabeledExample]) -> tuple[ConfusionMatrix, MetricsReport]:
    cm = confusion(model, test)
    return cm, metrics_from_confusion(cm, cross_entropy=mean_cross_entropy(model, test))


@dataclass
class TableRow:
    name: str
    accuracy: float
    precision: float
    recall: float
    f1: float


@dataclass
class ExperimentReport:
    kind: str                       # "compare" or "sweep"
    seed: int
    preprocess_fingerprint: str
    rows: list[TableRow]
    confusions: dict[str, list[list[int]]]
    details: dict = field(default_factory=dict)
    created_at: str = ""

    def to_json(self) -> str:
        return json.dumps(asdict(self), ensure_ascii=False, sort_keys=True, indent=2)

    def table(self) -> str:
        header = f"{'model':<24}{'accuracy':>10}{'precision':>11}{'recall':>9}{'f1':>9}"
        lines = [header, "-" * len(header)]
        for r in self.rows:
            lines.append(
                f"{r.name:<24}{r.accuracy:>10.2%}{r.precision:>11.2%}{r.recall:>9.2%}{r.f1:>9.2%}"
            )
        return "\n".join(lines)


def _split_for_experiment(catalog: IntentCatalog, config, seed: int):
    vocab, labels, examples = make_dataset(catalog, config)
    train, test = split_dataset(examples, test_fraction=0.2, seed=seed)
    return vocab, labels, train, test


def compare_classifiers(
    catalog: IntentCatalog,
    config,
    seed: int = 42,
    train_config: TrainConfig | None = None,
) -> ExperimentReport:
    """Train MNB, SVM and the DNN on one stratified split and evaluate all
    three on the identical held-out set."""
    vocab, labels, train, test = _split_for_experiment(catalog, config, seed)
    train_config = train_config or TrainConfig(seed=seed)
    num_classes = len(labels)

    dnn_model, dnn_reports = train_dnn(train, train_config, validation=test)
    svm_model = train_svm(train, num_classes, SvmHyper(seed=seed))
    mnb_model = train_mnb(train, num_classes)

    rows, confusions = [], {}
    for name, model in [("dnn", dnn_model), ("svm", svm_model), ("mnb", mnb_model)]:
        cm, metrics = evaluate_model(model, test)
        rows.append(TableRow(name, metrics.accuracy, metrics.macro_precision,
                             metrics.macro_recall, metrics.macro_f1))
        confusions[name] = cm.counts.tolist()
    details = {
        "train_size": len(train),
        "test_size": len(test),
        "vocabulary_size": len(vocab),
        "num_classes": num_classes,
        "dnn_epoch_curve": [
            {"epoch": r.epoch, "loss": r.loss, "accuracy": r.accuracy, "mse": r.mse,
             "val_loss": r.val_loss, "val_accuracy": r.val_accuracy}
            for r in dnn_reports
        ],
    }
    return ExperimentReport("compare", seed, config.fingerprint, rows, confusions, details)


def activation_sweep(
    catalog: IntentCatalog,
    config,
    seed: int = 42,
    train_config: TrainConfig | None = None,
) -> ExperimentReport:
    """Train the DNN once per activation kind on the identical split."""
    vocab, labels, train, test = _split_for_experiment(catalog, config, seed)
    base = train_config or TrainConfig(seed=seed)
    num_classes = len(labels)

    rows, confusions, curves = [], {}, {}
    for kind in (ActivationKind.RELU, ActivationKind.SIGMOID, ActivationKind.TANH, ActivationKind.LINEAR):
        cfg = TrainConfig(
            epochs=base.epochs, batch_size=base.batch_size, dropout_rate=base.dropout_rate,
            seed=base.seed, activation=kind, hidden_dims=base.hidden_dims,
            learning_rate=base.learning_rate,
        )
        model, reports = train_dnn(train, cfg, validation=test)
        cm, metrics = evaluate_model(model, test)
        rows.append(TableRow(kind.value, metrics.accuracy, metrics.macro_precision,
                             metrics.macro_recall, metrics.macro_f1))
        confusions[kind.value] = cm.counts.tolist()
        curves[kind.value] = [
            {"epoch": r.epoch, "loss": r.loss, "accuracy": r.accuracy, "mse": r.mse}
            for r in reports
        ]
    details = {
        "train_size": len(train),
        "test_size": len(test),
        "vocabulary_size": len(vocab),
        "num_classes": num_classes,
        "epoch_curves": curves,
    }
    return ExperimentReport("sweep", seed, config.fingerprint, rows, confusions, details)


def write_report(report: ExperimentReport, path: str | Path):
    Path(path).write_text(report.to_json() + "\n", encoding="utf-8")
