"""Word-to-viseme translation and homophene statistics.

Coarsening a word through a P2V map can merge previously distinct
words into the same visual token (homophenes).  The homophene effect
is summarised as ``H = 1 - T/W`` where ``W`` counts the supplied words
and ``T`` the visually distinct tokens among them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Literal, Sequence

from .core import SILENCE, SHORT_PAUSE, SIL_CLASS, SP_CLASS, P2VMap
from .dictionary import PronunciationDictionary, phonemize
from .errors import OutOfVocabularyError

Level = Literal["word", "phoneme", "viseme"]
LEVELS: tuple[Level, ...] = ("word", "phoneme", "viseme")


@dataclass(frozen=True)
class HomopheneStats:
    """Vocabulary size W, distinct-token count T, and effect H = 1 - T/W."""

    W: int
    T: int
    H: float

    def __post_init__(self) -> None:
        if not 1 <= self.T <= self.W:
            raise ValueError(f"token count must satisfy 1 <= T <= W, got T={self.T}, W={self.W}")
        if self.H != 1.0 - self.T / self.W:
            raise ValueError("H must equal 1 - T/W exactly")

    @classmethod
    def from_counts(cls, W: int, T: int) -> "HomopheneStats":
        return cls(W=W, T=T, H=1.0 - T / W)


class _UnionFind:
    """Minimal union-find over hashable items with path compression."""

    def __init__(self) -> None:
        self._parent: dict[Hashable, Hashable] = {}

    def add(self, item: Hashable) -> None:
        self._parent.setdefault(item, item)

    def find(self, item: Hashable) -> Hashable:
        root = item
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[item] != root:
            self._parent[item], item = root, self._parent[item]
        return root

    def union(self, a: Hashable, b: Hashable) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self._parent[rb] = ra

    def groups(self) -> dict[Hashable, set[Hashable]]:
        out: dict[Hashable, set[Hashable]] = {}
        for item in self._parent:
            out.setdefault(self.find(item), set()).add(item)
        return out


def word_to_viseme_strings(
    word: str, p2v: P2VMap, dictionary: PronunciationDictionary
) -> list[tuple[str, ...]]:
    """Translate a word into one viseme-id sequence per pronunciation.

    Phonemes in the garbage class emit ``gar``; silence and short-pause
    phonemes emit their reserved ids.  A phoneme absent from the map
    raises, naming the phoneme.
    """
    sequences = []
    for variant in phonemize(dictionary, word):
        sequences.append(tuple(p2v.viseme_of(phone) for phone in variant))
    return sequences


def _strip_pauses_phonemes(
    variant: Sequence[str], dictionary: PronunciationDictionary
) -> tuple[str, ...]:
    inventory = dictionary.inventory
    if inventory is None:
        return tuple(variant)
    return tuple(
        p
        for p in variant
        if p not in inventory or inventory.category(p) not in (SILENCE, SHORT_PAUSE)
    )


def _strip_pauses_visemes(sequence: Sequence[str]) -> tuple[str, ...]:
    return tuple(v for v in sequence if v not in (SIL_CLASS, SP_CLASS))


def _transcription_keys(
    word: str,
    dictionary: PronunciationDictionary,
    level: Level,
    p2v: P2VMap | None,
) -> list[tuple]:
    if level == "word":
        return [("word", word.upper())]
    if level == "phoneme":
        return [
            ("phoneme", _strip_pauses_phonemes(v, dictionary))
            for v in phonemize(dictionary, word)
        ]
    assert p2v is not None
    return [
        ("viseme", _strip_pauses_visemes(seq))
        for seq in word_to_viseme_strings(word, p2v, dictionary)
    ]


def homophene_stats(
    words: Sequence[str],
    dictionary: PronunciationDictionary,
    *,
    level: Level = "viseme",
    p2v: P2VMap | None = None,
) -> HomopheneStats:
    """Count visually distinct tokens in a vocabulary.

    Two words are the same token when any of their transcriptions at
    the chosen level coincide; the merge is closed transitively across
    pronunciation variants.  ``level="word"`` treats each distinct word
    as its own token, ``"phoneme"`` compares pronunciations, and
    ``"viseme"`` (the default) compares viseme strings under ``p2v``.
    Silence and short-pause entries carry no lexical identity and are
    stripped before comparison.
    """
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}; expected one of {LEVELS}")
    if level == "viseme" and p2v is None:
        raise ValueError("viseme-level statistics need a P2V map")
    if not words:
        raise ValueError("homophene statistics need at least one word")
    missing = sorted({w.upper() for w in words if w not in dictionary})
    if missing:
        raise OutOfVocabularyError(
            "words missing from the dictionary: " + ", ".join(missing)
        )

    uf = _UnionFind()
    key_owner: dict[tuple, str] = {}
    for word in words:
        norm = word.upper()
        uf.add(norm)
        for key in _transcription_keys(word, dictionary, level, p2v):
            owner = key_owner.setdefault(key, norm)
            if owner != norm:
                uf.union(owner, norm)
    T = len(uf.groups())
    return HomopheneStats.from_counts(W=len(words), T=T)


def homophene_profile(
    words: Sequence[str],
    dictionary: PronunciationDictionary,
    p2v: P2VMap,
) -> dict[Level, HomopheneStats]:
    """Homophene statistics at all three levels, coarsest last."""
    return {
        level: homophene_stats(words, dictionary, level=level, p2v=p2v)
        for level in LEVELS
    }
