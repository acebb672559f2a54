import pytest

from fidelbot.artifact import ModelArtifact
from fidelbot.classifiers import train_mnb
from fidelbot.features import make_dataset
from fidelbot.intents import Intent, IntentCatalog, load_catalog, sample_catalog_path
from fidelbot.textproc import default_config


@pytest.fixture(scope="session")
def config():
    return default_config()


@pytest.fixture(scope="session")
def sample_catalog():
    return load_catalog(sample_catalog_path())


@pytest.fixture(scope="session")
def sample_dataset(sample_catalog, config):
    return make_dataset(sample_catalog, config)


def toy_catalog() -> IntentCatalog:
    """Three intents with one context hop; small enough that every
    classifier is confident about its own patterns."""
    return IntentCatalog(
        intents=[
            Intent(
                tag="greet",
                patterns=["ሰላም", "ጤና ይስጥልኝ", "እንደምን አደርክ"],
                responses=["ሰላም! እንዴት ልርዳዎት?"],
            ),
            Intent(
                tag="register",
                patterns=["ምዝገባ እፈልጋለሁ", "መመዝገብ እችላለሁ", "ምዝገባ የት ነው"],
                responses=["ቅጹን ይሙሉ።", "ወደ ሬጅስትራር ይሂዱ።"],
                context_set="reg",
            ),
            Intent(
                tag="deadline",
                patterns=["ቀነ ገደብ መቼ ነው", "የመጨረሻ ቀን መቼ ነው", "እስከ መቼ ነው"],
                responses=["እስከ መስከረም ሠላሳ ድረስ ነው።"],
                context_filter="reg",
            ),
        ],
    )


def trained_toy_artifact(config) -> tuple[ModelArtifact, IntentCatalog]:
    catalog = toy_catalog()
    vocab, labels, examples = make_dataset(catalog, config)
    model = train_mnb(examples, len(labels.tags))
    artifact = ModelArtifact(
        kind="mnb",
        preprocess_fingerprint=config.fingerprint,
        vocabulary=vocab,
        labels=labels,
        vector_mode="binary",
        model=model,
        train_config={"alpha": 1.0},
        metadata={},
    )
    return artifact, catalog


@pytest.fixture(scope="session")
def toy_engine_parts(config):
    return trained_toy_artifact(config)
