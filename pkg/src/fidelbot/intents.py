"""Intent catalog: the JSON authoring surface of the bot.

Schema: ``{"intents": [{"tag", "patterns", "responses",
"context_set"?, "context_filter"?}]}``. A missing context field means
"none". An empty-string ``context_filter`` also means "no filter"; an
empty-string ``context_set`` is kept as-is because the dialogue layer
reads it as "clear the active context".
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from statistics import mean


class CatalogError(Exception):
    pass


class ParseError(CatalogError):
    """The file is not a well-formed JSON document."""


class SchemaError(CatalogError):
    """The document does not satisfy the intent schema."""


class CatalogWarning(UserWarning):
    pass


@dataclass
class Intent:
    tag: str
    patterns: list[str]
    responses: list[str]
    context_set: str | None = None
    context_filter: str | None = None


@dataclass
class IntentCatalog:
    intents: list[Intent]
    source_path: str = "<memory>"

    def by_tag(self, tag: str) -> Intent:
        for intent in self.intents:
            if intent.tag == tag:
                return intent
        raise KeyError(tag)


@dataclass
class CatalogStats:
    tag_count: int
    pattern_count: int
    response_count: int
    patterns_per_tag_min: int
    patterns_per_tag_mean: float
    patterns_per_tag_max: int


def _require(condition: bool, message: str):
    if not condition:
        raise SchemaError(message)


def _parse_intent(obj, position: int) -> Intent:
    where = f"intents[{position}]"
    _require(isinstance(obj, dict), f"{where}: intent must be an object")
    tag = obj.get("tag")
    _require(isinstance(tag, str) and tag != "", f"{where}: missing or empty 'tag'")
    where = f"intent {tag!r}"
    patterns = obj.get("patterns")
    _require(isinstance(patterns, list) and len(patterns) > 0, f"{where}: 'patterns' must be a nonempty list")
    _require(all(isinstance(p, str) for p in patterns), f"{where}: every pattern must be a string")
    responses = obj.get("responses")
    _require(isinstance(responses, list) and len(responses) > 0, f"{where}: 'responses' must be a nonempty list")
    _require(all(isinstance(r, str) for r in responses), f"{where}: every response must be a string")
    context_set = obj.get("context_set")
    context_filter = obj.get("context_filter")
    _require(context_set is None or isinstance(context_set, str), f"{where}: 'context_set' must be a string")
    _require(context_filter is None or isinstance(context_filter, str), f"{where}: 'context_filter' must be a string")
    return Intent(tag, list(patterns), list(responses), context_set, context_filter)


def validate_catalog(catalog: IntentCatalog):
    """Check catalog invariants; SchemaError on violation, warnings for
    context_filter values that no intent ever sets."""
    seen = set()
    for intent in catalog.intents:
        _require(intent.tag not in seen, f"duplicate tag {intent.tag!r}")
        seen.add(intent.tag)
    set_values = {i.context_set for i in catalog.intents if i.context_set}
    for intent in catalog.intents:
        if intent.context_filter and intent.context_filter not in set_values:
            warnings.warn(
                f"intent {intent.tag!r}: context_filter {intent.context_filter!r} "
                "is never produced by any context_set",
                CatalogWarning,
                stacklevel=3,
            )


def load_catalog(path: str | Path) -> IntentCatalog:
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    _require(isinstance(document, dict) and isinstance(document.get("intents"), list),
             f"{path}: top level must be an object with an 'intents' list")
    intents = [_parse_intent(obj, i) for i, obj in enumerate(document["intents"])]
    catalog = IntentCatalog(intents, source_path=str(path))
    validate_catalog(catalog)
    return catalog


def save_catalog(catalog: IntentCatalog, path: str | Path):
    path = Path(path)
    out = []
    for intent in catalog.intents:
        obj: dict = {"tag": intent.tag, "patterns": intent.patterns, "responses": intent.responses}
        if intent.context_set is not None:
            obj["context_set"] = intent.context_set
        if intent.context_filter is not None:
            obj["context_filter"] = intent.context_filter
        out.append(obj)
    path.write_text(json.dumps({"intents": out}, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")


def catalog_stats(catalog: IntentCatalog) -> CatalogStats:
    per_tag = [len(i.patterns) for i in catalog.intents]
    return CatalogStats(
        tag_count=len(catalog.intents),
        pattern_count=sum(per_tag),
        response_count=sum(len(i.responses) for i in catalog.intents),
        patterns_per_tag_min=min(per_tag, default=0),
        patterns_per_tag_mean=mean(per_tag) if per_tag else 0.0,
        patterns_per_tag_max=max(per_tag, default=0),
    )


def sample_catalog_path() -> Path:
    from importlib import resources

    return Path(resources.files("fidelbot") / "data" / "sample_catalog.json")
