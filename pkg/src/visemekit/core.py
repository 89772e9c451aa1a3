"""Domain types shared across the toolkit.

Phoneme inventories, confusion matrices, and phoneme-to-viseme (P2V)
maps are immutable value objects, and the operations on them are pure
functions, so everything here is safe to use concurrently.

Confusion matrices are oriented rows = reference phonemes, columns =
hypothesised phonemes; every codec and builder in the package follows
that convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    EmptyInputError,
    InvalidPairError,
    InventoryConflictError,
    LabelNotFoundError,
    UnmappedPhonemeError,
)

VOWEL = "vowel"
CONSONANT = "consonant"
SILENCE = "silence"
SHORT_PAUSE = "short-pause"
PHONEME_CLASSES = (VOWEL, CONSONANT, SILENCE, SHORT_PAUSE)

SIL_CLASS = "sil"
SP_CLASS = "sp"
GAR_CLASS = "gar"
RESERVED_CLASS_IDS = (SIL_CLASS, SP_CLASS, GAR_CLASS)

# Empirically useful band for the number of non-reserved viseme classes.
# Outside it validate_map emits a warning, never an error.
VISEME_COUNT_RANGE = (11, 35)


@dataclass(frozen=True)
class PhonemeLabel:
    """A phoneme symbol with its articulatory class tag."""

    symbol: str
    category: str

    def __post_init__(self) -> None:
        if not self.symbol or any(ch.isspace() for ch in self.symbol):
            raise ValueError(f"phoneme symbol must be a non-empty token, got {self.symbol!r}")
        if self.category not in PHONEME_CLASSES:
            raise ValueError(
                f"unknown phoneme class {self.category!r} for {self.symbol!r}; "
                f"expected one of {PHONEME_CLASSES}"
            )


class PhonemeInventory:
    """Ordered set of :class:`PhonemeLabel` with unique symbols.

    At most one silence and one short-pause label may be declared.
    """

    def __init__(self, labels: Iterable[PhonemeLabel]):
        entries: list[PhonemeLabel] = []
        by_symbol: dict[str, PhonemeLabel] = {}
        for label in labels:
            if label.symbol in by_symbol:
                raise ValueError(f"duplicate phoneme symbol {label.symbol!r} in inventory")
            by_symbol[label.symbol] = label
            entries.append(label)
        for special in (SILENCE, SHORT_PAUSE):
            tagged = [lab.symbol for lab in entries if lab.category == special]
            if len(tagged) > 1:
                raise ValueError(f"inventory declares more than one {special} label: {tagged}")
        self._entries = tuple(entries)
        self._by_symbol = by_symbol

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "PhonemeInventory":
        return cls(PhonemeLabel(symbol, category) for symbol, category in pairs)

    @property
    def labels(self) -> tuple[PhonemeLabel, ...]:
        return self._entries

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(label.symbol for label in self._entries)

    def category(self, symbol: str) -> str:
        try:
            return self._by_symbol[symbol].category
        except KeyError:
            raise LabelNotFoundError(f"phoneme {symbol!r} is not in the inventory") from None

    def _single(self, category: str) -> str | None:
        for label in self._entries:
            if label.category == category:
                return label.symbol
        return None

    @property
    def silence_symbol(self) -> str | None:
        return self._single(SILENCE)

    @property
    def short_pause_symbol(self) -> str | None:
        return self._single(SHORT_PAUSE)

    def __contains__(self, symbol: object) -> bool:
        return symbol in self._by_symbol

    def __iter__(self) -> Iterator[PhonemeLabel]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PhonemeInventory):
            return NotImplemented
        return self._entries == other._entries

    def __repr__(self) -> str:
        return f"PhonemeInventory({len(self._entries)} phonemes)"


class ConfusionMatrix:
    """Square grid of non-negative integer counts, rows = reference.

    ``categories`` optionally records the vowel/consonant tag of each
    label so that merges can detect conflicting inventories.
    """

    def __init__(
        self,
        labels: Sequence[str],
        counts,
        categories: Mapping[str, str] | None = None,
    ):
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise ValueError("confusion matrix labels must be unique")
        arr = np.asarray(counts)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] != len(labels):
            raise ValueError(
                f"counts must be a {len(labels)}x{len(labels)} grid, got shape {arr.shape}"
            )
        if not np.issubdtype(arr.dtype, np.integer):
            rounded = np.rint(arr)
            if not np.all(np.isfinite(arr)) or np.any(arr != rounded):
                raise ValueError("confusion counts must be integers")
            arr = rounded
        arr = arr.astype(np.int64)
        if np.any(arr < 0):
            raise ValueError("confusion counts must be non-negative")
        arr.flags.writeable = False
        self._labels = labels
        self._counts = arr
        self._index = {symbol: i for i, symbol in enumerate(labels)}
        if categories is not None:
            kept = {}
            for symbol in labels:
                if symbol in categories:
                    cat = categories[symbol]
                    if cat not in PHONEME_CLASSES:
                        raise ValueError(f"unknown phoneme class {cat!r} for {symbol!r}")
                    kept[symbol] = cat
            categories = kept
        self._categories = categories

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def counts(self) -> np.ndarray:
        return self._counts

    @property
    def categories(self) -> Mapping[str, str] | None:
        return self._categories

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise LabelNotFoundError(f"phoneme {symbol!r} is not in the confusion matrix") from None

    def count(self, reference: str, hypothesis: str) -> int:
        return int(self._counts[self.index(reference), self.index(hypothesis)])

    def row_mass(self, symbol: str) -> int:
        return int(self._counts[self.index(symbol), :].sum())

    def column_mass(self, symbol: str) -> int:
        return int(self._counts[:, self.index(symbol)].sum())

    def true_positives(self, symbol: str) -> int:
        i = self.index(symbol)
        return int(self._counts[i, i])

    def with_categories(self, inventory: PhonemeInventory) -> "ConfusionMatrix":
        cats = {s: inventory.category(s) for s in self._labels if s in inventory}
        return ConfusionMatrix(self._labels, self._counts, categories=cats)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConfusionMatrix):
            return NotImplemented
        return self._labels == other._labels and np.array_equal(self._counts, other._counts)

    def __repr__(self) -> str:
        return f"ConfusionMatrix({len(self._labels)} labels, total={int(self._counts.sum())})"


@dataclass(frozen=True)
class MapSource:
    """Where a P2V map's confusions came from.

    ``kind`` is one of ``"speaker"`` (a single speaker), ``"all"``
    (every speaker pooled), or ``"all-but"`` (every speaker except
    ``speaker``).
    """

    kind: str
    speaker: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("speaker", "all", "all-but"):
            raise ValueError(f"unknown map source kind {self.kind!r}")
        if self.kind in ("speaker", "all-but") and not self.speaker:
            raise ValueError(f"map source kind {self.kind!r} needs a speaker id")
        if self.kind == "all" and self.speaker is not None:
            raise ValueError("map source 'all' does not take a speaker id")

    def render(self) -> str:
        if self.kind == "speaker":
            return f"M[{self.speaker}]"
        if self.kind == "all":
            return "M[all]"
        return f"M[!{self.speaker}]"

    @classmethod
    def parse(cls, text: str) -> "MapSource":
        text = text.strip()
        if not (text.startswith("M[") and text.endswith("]")):
            raise ValueError(f"cannot parse map source {text!r}")
        inner = text[2:-1]
        if inner == "all":
            return cls("all")
        if inner.startswith("!"):
            return cls("all-but", inner[1:])
        return cls("speaker", inner)


@dataclass(frozen=True)
class ExperimentTag:
    """One crossing of a map with training and test speakers."""

    source: MapSource
    train_speaker: str
    test_speaker: str

    def render(self) -> str:
        return f"{self.source.render()}({self.train_speaker},{self.test_speaker})"


class P2VMap:
    """Partition of phonemes into viseme classes plus reserved classes.

    Non-reserved classes are keyed by viseme id (``v01``, ``v02``, ...).
    The reserved ids ``sil``, ``sp``, and ``gar`` hold the silence label,
    the short-pause label, and phonemes that never showed up in
    recognition output.

    Construction is permissive: a map that breaks the membership rules
    can be built and then inspected with :func:`validate_map`, which is
    how rule violations are reported.
    """

    def __init__(
        self,
        classes: Mapping[str, Iterable[str]],
        *,
        garbage: Iterable[str] = (),
        silence: Iterable[str] = (),
        short_pause: Iterable[str] = (),
        designation: MapSource | None = None,
    ):
        cleaned: dict[str, frozenset[str]] = {}
        for viseme_id, members in classes.items():
            if viseme_id in RESERVED_CLASS_IDS:
                raise ValueError(
                    f"class id {viseme_id!r} is reserved; pass it via the keyword argument"
                )
            if not viseme_id or any(ch.isspace() for ch in viseme_id):
                raise ValueError(f"viseme id must be a non-empty token, got {viseme_id!r}")
            cleaned[viseme_id] = frozenset(members)
        self._classes = cleaned
        self.garbage = frozenset(garbage)
        self.silence = frozenset(silence)
        self.short_pause = frozenset(short_pause)
        self.designation = designation
        lookup: dict[str, str] = {}
        for viseme_id, members in self.items():
            for symbol in sorted(members):
                lookup.setdefault(symbol, viseme_id)
        self._lookup = lookup

    @property
    def classes(self) -> dict[str, frozenset[str]]:
        """Non-reserved classes, in insertion order."""
        return dict(self._classes)

    def items(self) -> list[tuple[str, frozenset[str]]]:
        """All classes, visemes first, then sil, sp, gar."""
        out = list(self._classes.items())
        out.append((SIL_CLASS, self.silence))
        out.append((SP_CLASS, self.short_pause))
        out.append((GAR_CLASS, self.garbage))
        return out

    @property
    def num_visemes(self) -> int:
        return len(self._classes)

    def partition(self) -> frozenset[frozenset[str]]:
        """The non-reserved classes as an unordered family of sets."""
        return frozenset(self._classes.values())

    def mapped_symbols(self) -> frozenset[str]:
        return frozenset(self._lookup)

    def viseme_of(self, symbol: str) -> str:
        try:
            return self._lookup[symbol]
        except KeyError:
            raise UnmappedPhonemeError(f"phoneme {symbol!r} has no class in this map") from None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, P2VMap):
            return NotImplemented
        return (
            self._classes == other._classes
            and self.garbage == other.garbage
            and self.silence == other.silence
            and self.short_pause == other.short_pause
            and self.designation == other.designation
        )

    def __repr__(self) -> str:
        tag = self.designation.render() if self.designation else "unlabelled"
        return f"P2VMap({tag}, {self.num_visemes} visemes, gar={len(self.garbage)})"


def confusion(cm: ConfusionMatrix, a: str, b: str) -> int:
    """Symmetric confusion between two distinct phonemes.

    Counts both directions: how often ``a`` was recognised as ``b``
    plus how often ``b`` was recognised as ``a``.  Symmetric in its
    arguments by construction.
    """
    if a == b:
        raise InvalidPairError(f"confusion is defined for distinct phonemes, got {a!r} twice")
    i, j = cm.index(a), cm.index(b)
    return int(cm.counts[i, j] + cm.counts[j, i])


def merge_matrices(cms: Sequence[ConfusionMatrix]) -> ConfusionMatrix:
    """Element-wise sum of confusion matrices over the union label set.

    Labels missing from one matrix contribute zero counts.  The result
    keeps first-seen label order, so merging is commutative and
    associative up to label reordering.
    """
    cms = list(cms)
    if not cms:
        raise EmptyInputError("no confusion matrices to merge")
    categories: dict[str, str] = {}
    for cm in cms:
        for symbol, cat in (cm.categories or {}).items():
            if categories.setdefault(symbol, cat) != cat:
                raise InventoryConflictError(
                    f"symbol {symbol!r} is tagged {categories[symbol]!r} in one matrix "
                    f"and {cat!r} in another"
                )
    order: list[str] = []
    index: dict[str, int] = {}
    for cm in cms:
        for symbol in cm.labels:
            if symbol not in index:
                index[symbol] = len(order)
                order.append(symbol)
    total = np.zeros((len(order), len(order)), dtype=np.int64)
    for cm in cms:
        idx = np.array([index[s] for s in cm.labels])
        total[np.ix_(idx, idx)] += cm.counts
    return ConfusionMatrix(order, total, categories=categories or None)


@dataclass
class ValidationReport:
    """Findings from checking a P2V map against an inventory."""

    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def __str__(self) -> str:
        lines = [f"error: {msg}" for msg in self.errors]
        lines += [f"warning: {msg}" for msg in self.warnings]
        return "\n".join(lines) if lines else "ok"


def validate_map(p2v: P2VMap, inventory: PhonemeInventory) -> ValidationReport:
    """Check the membership rules of a P2V map.

    Errors: a phoneme in more than one class, a vowel and a consonant
    sharing a non-reserved class, symbols missing from the inventory,
    empty non-reserved classes, and misuse of the reserved classes.
    The garbage class may mix categories freely.

    Warnings: a non-reserved class count outside the usable band of
    11 to 35.
    """
    report = ValidationReport()
    seen: dict[str, str] = {}
    for class_id, members in p2v.items():
        for symbol in sorted(members):
            if symbol in seen:
                report.errors.append(
                    f"phoneme {symbol!r} appears in both {seen[symbol]!r} and {class_id!r}; "
                    "phonemes may be grouped only once"
                )
            else:
                seen[symbol] = class_id
            if symbol not in inventory:
                report.errors.append(
                    f"class {class_id!r} contains {symbol!r}, which is not in the inventory"
                )
    for viseme_id, members in p2v.classes.items():
        if not members:
            report.errors.append(f"viseme class {viseme_id!r} is empty")
            continue
        cats = {inventory.category(s) for s in members if s in inventory}
        if VOWEL in cats and CONSONANT in cats:
            report.errors.append(
                f"viseme class {viseme_id!r} mixes vowel and consonant phonemes"
            )
        for special in (SILENCE, SHORT_PAUSE):
            if special in cats:
                report.errors.append(
                    f"viseme class {viseme_id!r} contains a {special} phoneme; "
                    "it belongs in a reserved class"
                )
    for class_id, members, wanted in (
        (SIL_CLASS, p2v.silence, SILENCE),
        (SP_CLASS, p2v.short_pause, SHORT_PAUSE),
    ):
        for symbol in sorted(members):
            if symbol in inventory and inventory.category(symbol) != wanted:
                report.errors.append(
                    f"reserved class {class_id!r} contains {symbol!r}, "
                    f"which is not tagged {wanted}"
                )
    low, high = VISEME_COUNT_RANGE
    if p2v.num_visemes and not low <= p2v.num_visemes <= high:
        report.warnings.append(
            f"map has {p2v.num_visemes} viseme classes, outside the usable band "
            f"of {low} to {high}"
        )
    return report
