"""Deterministic synthetic catalog generator for scale experiments.

Builds an Ethiopic-script catalog of pseudo-word FAQ intents. Tags live in
groups that share topic words and each tag adds its own keywords, so most
patterns are learnable by any classifier. Two kinds of harder patterns are
mixed in. A per-tag ambiguous pattern carries only shared words. And pairs
of tags split a four-word set u v w z into "trap" patterns: one tag owns the
co-occurrences {u,v} and {w,z}, its partner owns {u,z} and {w,v}. Each word
then appears equally often in both tags, so any model scoring words
independently (or linearly: the four margin constraints sum to a
contradiction) sits at chance on traps, while a nonlinear model can key on
which words arrived together.
"""

from __future__ import annotations

import random

from .intents import Intent, IntentCatalog, validate_catalog
from .textproc import PreprocessConfig, default_config, preprocess

# consonant rows used for pseudo-words; orders 1..7 of each exist in Unicode
_ROW_BASES = [
    0x1208, 0x1218, 0x1228, 0x1230, 0x1238, 0x1240, 0x1260, 0x1270, 0x1278,
    0x1290, 0x1298, 0x12A8, 0x12C8, 0x12D8, 0x12E0, 0x12F0, 0x1300, 0x1308,
    0x1320, 0x1328, 0x1348, 0x1350,
]
_SYLLABLES = [chr(base + order) for base in _ROW_BASES for order in range(7)]


def _make_word(rng: random.Random, config: PreprocessConfig, used: set[str]) -> str:
    """Draw a pseudo-word that is its own stem.

    Rejection-sampled: a candidate survives only if preprocessing returns
    exactly itself, which rules out stopword collisions, foldable characters
    and anything the stemmer would shorten.
    """
    while True:
        word = "".join(rng.choice(_SYLLABLES) for _ in range(rng.randint(2, 4)))
        if word in used:
            continue
        if preprocess(word, config) == [word]:
            used.add(word)
            return word


def generate_catalog(
    num_groups: int = 12,
    tags_per_group: int = 5,
    total_patterns: int = 850,
    seed: int = 42,
    config: PreprocessConfig | None = None,
) -> IntentCatalog:
    """Emit a catalog with num_groups*tags_per_group tags and exactly
    total_patterns patterns, deterministic given the seed."""
    config = config or default_config()
    rng = random.Random(seed)
    used: set[str] = set()

    filler = [_make_word(rng, config, used) for _ in range(20)]
    num_tags = num_groups * tags_per_group
    base, extra = divmod(total_patterns, num_tags)

    intents = []
    tag_counter = 0
    for g in range(num_groups):
        topic = [_make_word(rng, config, used) for _ in range(3)]
        # one four-word set per two consecutive tags; odd tag out gets none
        quads = [
            tuple(_make_word(rng, config, used) for _ in range(4))
            for _ in range(tags_per_group // 2)
        ]
        for t in range(tags_per_group):
            keywords = [_make_word(rng, config, used) for _ in range(3)]
            count = base + 1 if tag_counter < extra else base
            quad = quads[t // 2] if t // 2 < len(quads) else None
            num_traps = 6 if quad is not None else 0
            num_ambig = 0 if quad is not None else 1
            patterns = []
            for p in range(count):
                if p < num_ambig:
                    # ambiguous: group words only, same for every tag in the group
                    words = rng.sample(topic, 2) + rng.sample(filler, rng.randint(1, 2))
                elif p < num_ambig + num_traps:
                    u, v, w, z = quad
                    i = p - num_ambig
                    if t % 2 == 0:
                        words = [u, v] if i % 2 else [w, z]
                    else:
                        words = [u, z] if i % 2 else [w, v]
                else:
                    words = (
                        rng.sample(keywords, rng.randint(1, 2))
                        + [rng.choice(topic)]
                        + rng.sample(filler, rng.randint(0, 2))
                    )
                rng.shuffle(words)
                patterns.append(" ".join(words))
            responses = [
                " ".join([keywords[0], topic[0], _make_word(rng, config, used)]) + "።",
                " ".join([keywords[1], rng.choice(filler)]) + "።",
            ]
            intents.append(Intent(tag=f"g{g:02d}_t{t}", patterns=patterns, responses=responses))
            tag_counter += 1

    catalog = IntentCatalog(intents=intents, source_path="<synthetic>")
    validate_catalog(catalog)
    return catalog
