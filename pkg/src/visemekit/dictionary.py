"""Pronunciation dictionaries and word-to-phoneme lookup.

The accepted file format is one entry per line::

    WORD ph1 ph2 ph3

Repeated lines for the same word accumulate pronunciation variants in
file order.  Lines starting with ``#`` are comments.  A bracketed
output-symbol field after the word (``WORD [WORD] ph1 ...``), as found
in some published lexicons, is ignored.  Words are normalised to upper
case and phones to lower case.
"""

from __future__ import annotations

from typing import Iterator, Sequence

from .core import PhonemeInventory
from .errors import DictionaryParseError, OutOfVocabularyError, UnknownPhonemeError

Pronunciation = tuple[str, ...]


class PronunciationDictionary:
    """Immutable word to pronunciation-variants mapping.

    Lookup is case-insensitive.  When built against an inventory, the
    inventory is kept so consumers can ask for phoneme categories.
    """

    def __init__(
        self,
        entries: dict[str, Sequence[Pronunciation]],
        inventory: PhonemeInventory | None = None,
    ):
        cleaned: dict[str, tuple[Pronunciation, ...]] = {}
        for word, variants in entries.items():
            variants = tuple(tuple(p) for p in variants)
            if not variants or any(not v for v in variants):
                raise ValueError(f"word {word!r} has an empty pronunciation")
            cleaned[word.upper()] = variants
        self._entries = cleaned
        self.inventory = inventory

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(self._entries)

    def __contains__(self, word: object) -> bool:
        return isinstance(word, str) and word.upper() in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def variants(self, word: str) -> tuple[Pronunciation, ...]:
        try:
            return self._entries[word.upper()]
        except KeyError:
            raise OutOfVocabularyError(f"word {word!r} is not in the dictionary") from None


def parse_dictionary(
    text: str, inventory: PhonemeInventory | None = None
) -> PronunciationDictionary:
    """Parse dictionary text, validating phones against ``inventory``.

    With ``inventory=None`` the phones are accepted unchecked; any
    later mapping step will still reject symbols it does not know.
    """
    entries: dict[str, list[Pronunciation]] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        word = fields[0].upper()
        phones = fields[1:]
        if phones and phones[0].startswith("[") and phones[0].endswith("]"):
            phones = phones[1:]
        phones = [p.lower() for p in phones]
        if not phones:
            raise DictionaryParseError(f"entry for {word!r} has no pronunciation", number)
        if inventory is not None:
            for phone in phones:
                if phone not in inventory:
                    raise UnknownPhonemeError(
                        f"phoneme {phone!r} in entry for {word!r} is not in the inventory",
                        number,
                    )
        entries.setdefault(word, []).append(tuple(phones))
    return PronunciationDictionary(entries, inventory)


def serialize_dictionary(dictionary: PronunciationDictionary) -> str:
    lines = []
    for word in dictionary.words:
        for variant in dictionary.variants(word):
            lines.append(f"{word} {' '.join(variant)}")
    return "\n".join(lines) + "\n"


def phonemize(dictionary: PronunciationDictionary, word: str) -> list[Pronunciation]:
    """All pronunciation variants for ``word``, in file order."""
    return list(dictionary.variants(word))
