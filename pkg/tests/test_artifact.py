import json

import numpy as np
import pytest

from fidelbot.artifact import (
    ArtifactError,
    ArtifactMismatchError,
    ModelArtifact,
    load_artifact,
    save_artifact,
)
from fidelbot.classifiers import (
    SvmHyper,
    TrainConfig,
    train_dnn,
    train_mnb,
    train_svm,
)
from fidelbot.features import make_dataset, split_dataset


def build(kind, config, sample_catalog):
    vocab, labels, examples = make_dataset(sample_catalog, config)
    train, test = split_dataset(examples, 0.2, seed=3)
    if kind == "mnb":
        model = train_mnb(train, len(labels.tags))
    elif kind == "svm":
        model = train_svm(train, len(labels.tags), SvmHyper(epochs=10))
    else:
        model, _ = train_dnn(train, TrainConfig(epochs=3, hidden_dims=(16, 8)))
    artifact = ModelArtifact(
        kind=kind,
        preprocess_fingerprint=config.fingerprint,
        vocabulary=vocab,
        labels=labels,
        vector_mode="binary",
        model=model,
        train_config={"note": "test"},
        metadata={"seed": 3},
    )
    return artifact, test


@pytest.mark.parametrize("kind", ["mnb", "svm", "dnn"])
def test_round_trip_predictions_bit_identical(kind, config, sample_catalog, tmp_path):
    artifact, test = build(kind, config, sample_catalog)
    path = tmp_path / f"{kind}.json"
    save_artifact(artifact, path)
    loaded = load_artifact(path, expected_config=config)

    assert loaded.kind == kind
    assert loaded.vocabulary.stems == artifact.vocabulary.stems
    assert loaded.labels.tags == artifact.labels.tags
    assert loaded.vector_mode == "binary"
    assert loaded.metadata == {"seed": 3}
    for ex in test:
        before = artifact.model.predict_proba(ex.vector)
        after = loaded.model.predict_proba(ex.vector)
        np.testing.assert_array_equal(before, after)


def test_save_then_save_again_is_stable(config, sample_catalog, tmp_path):
    artifact, _ = build("mnb", config, sample_catalog)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    save_artifact(artifact, a)
    save_artifact(load_artifact(a), b)
    assert a.read_bytes() == b.read_bytes()


def test_artifact_is_readable_utf8(config, sample_catalog, tmp_path):
    artifact, _ = build("mnb", config, sample_catalog)
    path = tmp_path / "m.json"
    save_artifact(artifact, path)
    text = path.read_text(encoding="utf-8")
    assert "\\u" not in text
    doc = json.loads(text)
    assert doc["format_version"] == 1
    assert doc["kind"] == "mnb"


def mutate(path, out, fn):
    doc = json.loads(path.read_text(encoding="utf-8"))
    fn(doc)
    out.write_text(json.dumps(doc, ensure_ascii=False), encoding="utf-8")
    return out


@pytest.fixture
def saved_mnb(config, sample_catalog, tmp_path):
    artifact, _ = build("mnb", config, sample_catalog)
    path = tmp_path / "m.json"
    save_artifact(artifact, path)
    return path


def test_version_mismatch(saved_mnb, tmp_path):
    bad = mutate(saved_mnb, tmp_path / "bad.json", lambda d: d.update(format_version=99))
    with pytest.raises(ArtifactMismatchError, match="format_version"):
        load_artifact(bad)


def test_unknown_kind(saved_mnb, tmp_path):
    bad = mutate(saved_mnb, tmp_path / "bad.json", lambda d: d.update(kind="forest"))
    with pytest.raises(ArtifactError, match="kind"):
        load_artifact(bad)


def test_fingerprint_mismatch(saved_mnb, tmp_path, config):
    bad = mutate(
        saved_mnb,
        tmp_path / "bad.json",
        lambda d: d.update(preprocess_fingerprint="0" * 64),
    )
    with pytest.raises(ArtifactMismatchError, match="preprocessing"):
        load_artifact(bad, expected_config=config)
    # without the active config the stale fingerprint passes through
    assert load_artifact(bad).preprocess_fingerprint == "0" * 64


def test_shape_mismatch(saved_mnb, tmp_path):
    def chop(d):
        d["params"]["log_priors"] = d["params"]["log_priors"][:-1]

    bad = mutate(saved_mnb, tmp_path / "bad.json", chop)
    with pytest.raises(ArtifactMismatchError, match="shape"):
        load_artifact(bad)


def test_dnn_layer_chain_checked(config, sample_catalog, tmp_path):
    artifact, _ = build("dnn", config, sample_catalog)
    path = tmp_path / "d.json"
    save_artifact(artifact, path)

    def corrupt(d):
        d["params"]["weights"][1] = [[0.0] * 8] * 3  # wrong fan-in

    bad = mutate(path, tmp_path / "bad.json", corrupt)
    with pytest.raises(ArtifactMismatchError):
        load_artifact(bad)


def test_bad_vector_mode(saved_mnb, tmp_path):
    bad = mutate(saved_mnb, tmp_path / "bad.json", lambda d: d.update(vector_mode="tfidf"))
    with pytest.raises(ArtifactError, match="vector_mode"):
        load_artifact(bad)


def test_missing_field(saved_mnb, tmp_path):
    bad = mutate(saved_mnb, tmp_path / "bad.json", lambda d: d.pop("vocabulary"))
    with pytest.raises(ArtifactError, match="malformed"):
        load_artifact(bad)


def test_not_json(tmp_path):
    path = tmp_path / "junk.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ArtifactError, match="JSON"):
        load_artifact(path)


def test_non_object_document(tmp_path):
    path = tmp_path / "arr.json"
    path.write_text("[1, 2, 3]", encoding="utf-8")
    with pytest.raises(ArtifactError, match="object"):
        load_artifact(path)
