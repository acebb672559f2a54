import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fidelbot.classifiers import TrainConfig
from fidelbot.evaluation import (
    ConfusionMatrix,
    EmptyMatrixError,
    ExperimentReport,
    TableRow,
    activation_sweep,
    compare_classifiers,
    confusion,
    evaluate_model,
    mean_cross_entropy,
    metrics_from_confusion,
    write_report,
)
from fidelbot.features import LabeledExample


class FixedModel:
    """Maps each input vector to a canned probability row."""

    def __init__(self, table, width):
        self.table = {tuple(k): np.asarray(v, dtype=np.float64) for k, v in table}
        self.width = width

    def predict_proba(self, v):
        return self.table[tuple(v)]


def ex(vector, cls):
    return LabeledExample(np.asarray(vector, dtype=np.float64), cls, "p")


def test_confusion_rows_are_true_classes():
    model = FixedModel(
        [((1.0, 0.0), [0.1, 0.9]), ((0.0, 1.0), [0.8, 0.2])], width=2
    )
    cm = confusion(model, [ex([1, 0], 0), ex([1, 0], 0), ex([0, 1], 1)])
    # class 0 was always predicted as 1; class 1 always as 0
    assert cm.counts.tolist() == [[0, 2], [1, 0]]
    assert cm.total == 3


def test_confusion_covers_model_width():
    model = FixedModel([((1.0,), [0.2, 0.3, 0.5])], width=1)
    cm = confusion(model, [ex([1.0], 0)])
    assert cm.num_classes == 3
    assert cm.counts[0, 2] == 1


def test_confusion_empty():
    with pytest.raises(EmptyMatrixError):
        confusion(None, [])


def test_metrics_hand_worked():
    report = metrics_from_confusion(ConfusionMatrix(np.array([[3, 1], [2, 4]])))
    assert math.isclose(report.accuracy, 0.7)
    c0, c1 = report.per_class
    assert math.isclose(c0.precision, 3 / 5)
    assert math.isclose(c0.recall, 3 / 4)
    assert math.isclose(c0.f1, 2 / 3)
    assert c0.support == 4
    assert math.isclose(c1.precision, 4 / 5)
    assert math.isclose(c1.recall, 4 / 6)
    assert math.isclose(c1.f1, 8 / 11)
    assert math.isclose(report.macro_precision, 0.7)
    assert math.isclose(report.macro_recall, (3 / 4 + 2 / 3) / 2)
    assert math.isclose(report.macro_f1, (2 / 3 + 8 / 11) / 2)
    assert report.micro_precision == report.accuracy
    assert report.micro_f1 == report.accuracy


def test_metrics_zero_denominators_flagged():
    # nothing was ever predicted as class 0, class 1 absent from truth
    report = metrics_from_confusion(ConfusionMatrix(np.array([[0, 2], [0, 0]])))
    c0, c1 = report.per_class
    assert c0.precision == 0.0 and not c0.precision_defined
    assert c0.recall == 0.0 and c0.recall_defined
    assert not c1.recall_defined
    # macro runs over classes present in the truth, here class 0 only
    assert report.macro_recall == 0.0
    assert report.macro_precision == 0.0
    assert report.accuracy == 0.0


def test_metrics_absent_class_excluded_from_macro():
    counts = np.array([[5, 0, 0], [0, 5, 0], [0, 0, 0]])
    report = metrics_from_confusion(ConfusionMatrix(counts))
    assert report.accuracy == 1.0
    assert report.macro_precision == 1.0
    assert report.macro_recall == 1.0
    assert report.macro_f1 == 1.0


def test_metrics_empty_matrix():
    with pytest.raises(EmptyMatrixError):
        metrics_from_confusion(ConfusionMatrix(np.zeros((2, 2), dtype=np.int64)))


@given(
    counts=st.lists(
        st.lists(st.integers(min_value=0, max_value=30), min_size=3, max_size=3),
        min_size=3,
        max_size=3,
    ).filter(lambda rows: sum(sum(r) for r in rows) > 0)
)
@settings(max_examples=150)
def test_metrics_recount_property(counts):
    m = np.array(counts, dtype=np.int64)
    report = metrics_from_confusion(ConfusionMatrix(m))
    total = m.sum()
    assert report.accuracy == np.trace(m) / total
    for c, cm in enumerate(report.per_class):
        col = m[:, c].sum()
        row = m[c, :].sum()
        assert cm.support == row
        expected_p = m[c, c] / col if col else 0.0
        expected_r = m[c, c] / row if row else 0.0
        assert math.isclose(cm.precision, expected_p, abs_tol=1e-12)
        assert math.isclose(cm.recall, expected_r, abs_tol=1e-12)
        if expected_p + expected_r > 0:
            assert math.isclose(
                cm.f1, 2 * expected_p * expected_r / (expected_p + expected_r), abs_tol=1e-12
            )
        else:
            assert cm.f1 == 0.0
    present = [c for c in range(3) if m[c, :].sum() > 0]
    assert math.isclose(
        report.macro_f1, sum(report.per_class[c].f1 for c in present) / len(present), abs_tol=1e-12
    )


def test_mean_cross_entropy_hand_value():
    model = FixedModel(
        [((1.0,), [0.5, 0.5]), ((2.0,), [0.25, 0.75])], width=1
    )
    value = mean_cross_entropy(model, [ex([1.0], 0), ex([2.0], 1)])
    assert math.isclose(value, (math.log(2) + math.log(4 / 3)) / 2, abs_tol=1e-12)


def test_evaluate_model_bundles_cross_entropy():
    model = FixedModel([((1.0,), [0.9, 0.1])], width=1)
    cm, report = evaluate_model(model, [ex([1.0], 0)])
    assert cm.counts.tolist() == [[1, 0], [0, 0]]
    assert math.isclose(report.cross_entropy, -math.log(0.9), abs_tol=1e-12)


# ----------------------------------------------------------- report text

def sample_report():
    return ExperimentReport(
        kind="compare",
        seed=42,
        preprocess_fingerprint="aa" * 32,
        rows=[
            TableRow("dnn", 0.9167, 0.9201, 0.9167, 0.9155),
            TableRow("svm", 0.6722, 0.65, 0.6722, 0.6549),
            TableRow("mnb", 0.6778, 0.6601, 0.6778, 0.6647),
        ],
        confusions={"dnn": [[1, 0], [0, 1]]},
        details={"train_size": 4},
        created_at="2026-01-01T00:00:00Z",
    )


def test_table_layout_is_fixed_width():
    table = sample_report().table()
    lines = table.split("\n")
    header = f"{'model':<24}{'accuracy':>10}{'precision':>11}{'recall':>9}{'f1':>9}"
    assert lines[0] == header
    assert lines[1] == "-" * len(header)
    assert len(lines) == 5
    assert all(len(line) == len(header) for line in lines if line[0] != "-")
    assert lines[2].startswith("dnn")
    assert "91.67%" in lines[2]
    # columns align: every percent sign in one row sits at a fixed offset
    offsets = [i for i, ch in enumerate(lines[2]) if ch == "%"]
    assert offsets == [i for i, ch in enumerate(lines[3]) if ch == "%"]


def test_report_json_round_trip():
    report = sample_report()
    doc = json.loads(report.to_json())
    assert doc["kind"] == "compare"
    assert doc["seed"] == 42
    assert [r["name"] for r in doc["rows"]] == ["dnn", "svm", "mnb"]
    assert doc["confusions"]["dnn"] == [[1, 0], [0, 1]]
    # keys are emitted sorted, so serialization is order-independent
    assert report.to_json() == ExperimentReport(**doc).to_json()


def test_write_report(tmp_path):
    out = tmp_path / "report.json"
    write_report(sample_report(), out)
    text = out.read_text(encoding="utf-8")
    assert text.endswith("\n")
    assert json.loads(text)["seed"] == 42


# ------------------------------------------------------ experiment runs

FAST = TrainConfig(epochs=8, hidden_dims=(16, 8), learning_rate=1e-3)


def test_compare_classifiers_schema(sample_catalog, config):
    report = compare_classifiers(sample_catalog, config, seed=7, train_config=FAST)
    assert report.kind == "compare"
    assert [r.name for r in report.rows] == ["dnn", "svm", "mnb"]
    assert set(report.confusions) == {"dnn", "svm", "mnb"}
    assert report.preprocess_fingerprint == config.fingerprint
    assert report.details["train_size"] + report.details["test_size"] == 60
    assert len(report.details["dnn_epoch_curve"]) == 8
    for row in report.rows:
        assert 0.0 <= row.accuracy <= 1.0


def test_compare_classifiers_repeatable(sample_catalog, config):
    a = compare_classifiers(sample_catalog, config, seed=7, train_config=FAST)
    b = compare_classifiers(sample_catalog, config, seed=7, train_config=FAST)
    assert a.to_json() == b.to_json()


def test_activation_sweep_schema(sample_catalog, config):
    report = activation_sweep(sample_catalog, config, seed=7, train_config=FAST)
    assert report.kind == "sweep"
    assert [r.name for r in report.rows] == ["relu", "sigmoid", "tanh", "linear"]
    assert set(report.details["epoch_curves"]) == {"relu", "sigmoid", "tanh", "linear"}
    table = report.table()
    assert len(table.split("\n")) == 6
