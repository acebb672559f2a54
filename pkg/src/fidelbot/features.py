"""Bag-of-words featurization: vocabulary, vectors, labeled datasets, splits."""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .intents import IntentCatalog
from .textproc import PreprocessConfig, preprocess

VectorMode = Literal["binary", "count"]


class EmptyVocabularyError(ValueError):
    """No pattern in the catalog produced a single stem."""


class TooFewExamplesError(ValueError):
    pass


class SkippedPatternWarning(UserWarning):
    """A pattern stemmed to nothing and cannot be vectorized."""


@dataclass(frozen=True)
class Vocabulary:
    """Stems sorted by code point; position is the feature index."""

    stems: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "index", {s: i for i, s in enumerate(self.stems)})

    def __len__(self) -> int:
        return len(self.stems)


@dataclass(frozen=True)
class LabelMap:
    """Tags sorted ascending; position is the class index."""

    tags: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "class_of", {t: i for i, t in enumerate(self.tags)})

    def __len__(self) -> int:
        return len(self.tags)


@dataclass
class LabeledExample:
    vector: np.ndarray
    class_index: int
    source_pattern: str


def build_vocabulary(catalog: IntentCatalog, config: PreprocessConfig) -> Vocabulary:
    stems = {s for intent in catalog.intents for p in intent.patterns for s in preprocess(p, config)}
    if not stems:
        raise EmptyVocabularyError("no pattern in the catalog yields any stem")
    return Vocabulary(tuple(sorted(stems)))


def vectorize(stems: list[str], vocab: Vocabulary, mode: VectorMode = "binary") -> np.ndarray:
    v = np.zeros(len(vocab), dtype=np.float64)
    index = vocab.index
    for s in stems:
        i = index.get(s)
        if i is None:
            continue
        if mode == "binary":
            v[i] = 1.0
        else:
            v[i] += 1.0
    return v


def make_dataset(
    catalog: IntentCatalog, config: PreprocessConfig, mode: VectorMode = "binary"
) -> tuple[Vocabulary, LabelMap, list[LabeledExample]]:
    """One labeled example per pattern; patterns with no stems are skipped
    with a warning."""
    vocab = build_vocabulary(catalog, config)
    labels = LabelMap(tuple(sorted(i.tag for i in catalog.intents)))
    examples = []
    for intent in catalog.intents:
        cls = labels.class_of[intent.tag]
        for pattern in intent.patterns:
            stems = preprocess(pattern, config)
            if not stems:
                warnings.warn(
                    f"pattern {pattern!r} of intent {intent.tag!r} has no stems; skipped",
                    SkippedPatternWarning,
                    stacklevel=2,
                )
                continue
            examples.append(LabeledExample(vectorize(stems, vocab, mode), cls, pattern))
    return vocab, labels, examples


def split_dataset(
    examples: list[LabeledExample], test_fraction: float, seed: int
) -> tuple[list[LabeledExample], list[LabeledExample]]:
    """Stratified train/test split.

    Every class with at least two examples contributes
    ceil(test_fraction * n_c) test examples, capped at n_c - 1 so no class
    vanishes from training. Singleton classes stay in training entirely.
    """
    if len(examples) < 2:
        raise TooFewExamplesError("need at least 2 examples to split")
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must be in (0, 1)")
    by_class: dict[int, list[int]] = {}
    for i, ex in enumerate(examples):
        by_class.setdefault(ex.class_index, []).append(i)
    rng = random.Random(seed)
    test_idx: set[int] = set()
    for cls in sorted(by_class):
        members = list(by_class[cls])
        if len(members) < 2:
            continue
        n_test = min(math.ceil(test_fraction * len(members)), len(members) - 1)
        rng.shuffle(members)
        test_idx.update(members[:n_test])
    train = [ex for i, ex in enumerate(examples) if i not in test_idx]
    test = [ex for i, ex in enumerate(examples) if i in test_idx]
    return train, test
