"""Deterministic preprocessing for Ethiopic-script text.

Four data-driven stages: character folding (normalize), tokenization,
stopword removal and light affix stripping (stem). All rule data lives in
plain-text files so it can be amended without touching code; the bundled
defaults are under ``fidelbot/rules/``.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

ETHIOPIC_FIRST = 0x1200
ETHIOPIC_LAST = 0x137F

# Separators: whitespace, Ethiopic wordspace and sentence punctuation, plus
# their ASCII counterparts. Everything else (Latin letters, digits, course
# codes) passes through as token material.
_SEPARATOR_CHARS = "፡።፣፤፥፧.,;:?!"
_TOKEN_SPLIT = re.compile(r"[\s" + re.escape(_SEPARATOR_CHARS) + r"]+")

FOLDING_FILE = "folding.tsv"
STOPWORDS_FILE = "stopwords.txt"
STEMMER_FILE = "stemmer.rules"


class RuleFileError(ValueError):
    """A rule data file is malformed; carries file name and line number."""

    def __init__(self, source: str, line_no: int, message: str):
        super().__init__(f"{source}, line {line_no}: {message}")
        self.source = source
        self.line_no = line_no


def _is_ethiopic(ch: str) -> bool:
    return ETHIOPIC_FIRST <= ord(ch) <= ETHIOPIC_LAST


@dataclass(frozen=True)
class FoldingTable:
    """Single-pass character folding map (source -> canonical)."""

    entries: dict[str, str]

    def __post_init__(self):
        for src, dst in self.entries.items():
            if dst in self.entries:
                raise ValueError(f"folding not closed: {src!r} -> {dst!r} is itself folded")

    @classmethod
    def parse(cls, text: str, source: str = "<string>") -> "FoldingTable":
        entries: dict[str, str] = {}
        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise RuleFileError(source, line_no, "expected <source>TAB<canonical>")
            src, dst = parts
            if len(src) != 1 or len(dst) != 1:
                raise RuleFileError(source, line_no, "each side must be a single code point")
            if not (_is_ethiopic(src) and _is_ethiopic(dst)):
                raise RuleFileError(source, line_no, "both code points must be in the Ethiopic block")
            if src in entries:
                raise RuleFileError(source, line_no, f"duplicate source {src!r}")
            entries[src] = dst
        for src, dst in entries.items():
            if dst in entries:
                raise RuleFileError(source, 0, f"folding not closed at {src!r} -> {dst!r}")
        return cls(entries)


@dataclass(frozen=True)
class StopList:
    """Set of function words to drop, stored post-folding."""

    words: frozenset[str]

    @classmethod
    def parse(cls, text: str, folding: FoldingTable, source: str = "<string>") -> "StopList":
        words = set()
        for line_no, raw in enumerate(text.splitlines(), start=1):
            word = raw.strip()
            if not word or word.startswith("#"):
                continue
            if normalize(word, folding) != word:
                raise RuleFileError(source, line_no, f"stopword {word!r} is not in canonical form")
            words.add(word)
        return cls(frozenset(words))


@dataclass(frozen=True)
class StemmerRules:
    """Affix lists for the light stemmer, longest-first."""

    prefixes: tuple[str, ...]
    suffixes: tuple[str, ...]
    min_stem_chars: int = 2

    def __post_init__(self):
        if self.min_stem_chars < 2:
            raise ValueError("min_stem_chars must be >= 2")
        # keep file order among equal lengths, longest first overall
        object.__setattr__(self, "prefixes", tuple(sorted(self.prefixes, key=len, reverse=True)))
        object.__setattr__(self, "suffixes", tuple(sorted(self.suffixes, key=len, reverse=True)))

    @classmethod
    def parse(cls, text: str, source: str = "<string>") -> "StemmerRules":
        sections: dict[str, list[str]] = {"prefixes": [], "suffixes": []}
        current: list[str] | None = None
        min_stem = None
        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("[") and line.endswith("]"):
                name = line[1:-1]
                if name not in sections:
                    raise RuleFileError(source, line_no, f"unknown section [{name}]")
                current = sections[name]
                continue
            if line.startswith("min_stem_chars="):
                try:
                    min_stem = int(line.split("=", 1)[1])
                except ValueError:
                    raise RuleFileError(source, line_no, "min_stem_chars must be an integer") from None
                continue
            if current is None:
                raise RuleFileError(source, line_no, f"entry {line!r} outside any section")
            current.append(line)
        if min_stem is None:
            raise RuleFileError(source, 0, "missing min_stem_chars=<n>")
        try:
            return cls(tuple(sections["prefixes"]), tuple(sections["suffixes"]), min_stem)
        except ValueError as exc:
            raise RuleFileError(source, 0, str(exc)) from None


@dataclass(frozen=True)
class PreprocessConfig:
    """Bundle of all rule data plus a content fingerprint.

    The fingerprint changes iff any rule data changes; it is stored inside
    model artifacts to guard against train/serve preprocessing skew.
    """

    folding: FoldingTable
    stoplist: StopList
    stemmer: StemmerRules
    fingerprint: str

    @classmethod
    def from_rules(cls, folding: FoldingTable, stoplist: StopList, stemmer: StemmerRules) -> "PreprocessConfig":
        h = hashlib.sha256()
        for src in sorted(folding.entries):
            h.update(f"f:{src}>{folding.entries[src]}\n".encode())
        for word in sorted(stoplist.words):
            h.update(f"s:{word}\n".encode())
        for p in stemmer.prefixes:
            h.update(f"p:{p}\n".encode())
        for s in stemmer.suffixes:
            h.update(f"x:{s}\n".encode())
        h.update(f"m:{stemmer.min_stem_chars}\n".encode())
        return cls(folding, stoplist, stemmer, h.hexdigest())


def load_config(rules_dir: str | Path) -> PreprocessConfig:
    """Load folding.tsv, stopwords.txt and stemmer.rules from a directory."""
    rules_dir = Path(rules_dir)
    folding = FoldingTable.parse(
        (rules_dir / FOLDING_FILE).read_text(encoding="utf-8"), source=str(rules_dir / FOLDING_FILE)
    )
    stoplist = StopList.parse(
        (rules_dir / STOPWORDS_FILE).read_text(encoding="utf-8"), folding,
        source=str(rules_dir / STOPWORDS_FILE),
    )
    stemmer = StemmerRules.parse(
        (rules_dir / STEMMER_FILE).read_text(encoding="utf-8"), source=str(rules_dir / STEMMER_FILE)
    )
    return PreprocessConfig.from_rules(folding, stoplist, stemmer)


def default_rules_dir() -> Path:
    return Path(resources.files("fidelbot") / "rules")


def default_config() -> PreprocessConfig:
    return load_config(default_rules_dir())


def normalize(text: str, folding: FoldingTable) -> str:
    """Replace each code point by its canonical form; length-preserving, idempotent."""
    entries = folding.entries
    return "".join(entries.get(ch, ch) for ch in text)


def tokenize(text: str) -> list[str]:
    """Split on whitespace, Ethiopic wordspace and sentence punctuation."""
    return [t for t in _TOKEN_SPLIT.split(text) if t]


def remove_stopwords(tokens: list[str], stoplist: StopList) -> list[str]:
    return [t for t in tokens if t not in stoplist.words]


def stem(word: str, rules: StemmerRules) -> str:
    """Strip at most one prefix then one suffix, longest match first.

    A strip only applies when the remainder keeps at least min_stem_chars
    code points, so short function-like words survive unchanged.
    """
    out = word
    for prefix in rules.prefixes:
        if out.startswith(prefix) and len(out) - len(prefix) >= rules.min_stem_chars:
            out = out[len(prefix):]
            break
    for suffix in rules.suffixes:
        if out.endswith(suffix) and len(out) - len(suffix) >= rules.min_stem_chars:
            out = out[: -len(suffix)]
            break
    return out


def preprocess(text: str, config: PreprocessConfig) -> list[str]:
    """normalize -> tokenize -> remove_stopwords -> stem; may return []."""
    tokens = tokenize(normalize(text, config.folding))
    kept = remove_stopwords(tokens, config.stoplist)
    return [stem(t, config.stemmer) for t in kept]
