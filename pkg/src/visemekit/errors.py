"""Exception hierarchy for visemekit.

Everything raised on bad data derives from :class:`VisemeKitError`, so
callers (including the CLI) can distinguish data problems from plain
programming errors.
"""


class VisemeKitError(Exception):
    """Base class for all toolkit errors."""


class UsageError(VisemeKitError):
    """Bad command-line arguments."""


class FormatError(VisemeKitError):
    """A file does not follow its documented format."""


class LabelNotFoundError(VisemeKitError):
    """A phoneme symbol is not present where it was looked up."""


class InvalidPairError(VisemeKitError):
    """A pairwise operation was asked about a phoneme and itself."""


class EmptyInputError(VisemeKitError):
    """An operation that needs at least one item received none."""


class InventoryConflictError(VisemeKitError):
    """The same symbol carries different vowel/consonant tags in two sources."""


class DictionaryParseError(VisemeKitError):
    """A pronunciation dictionary line could not be parsed."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class UnknownPhonemeError(DictionaryParseError):
    """A pronunciation uses a phoneme absent from the bound inventory."""


class OutOfVocabularyError(VisemeKitError):
    """A word has no dictionary entry."""


class UnmappedPhonemeError(VisemeKitError):
    """A phoneme has no class in the P2V map being applied."""


class UncoveredPhonemeError(VisemeKitError):
    """A reference phoneme has no outcome distribution in a confusion profile."""


class UndefinedMetricError(VisemeKitError):
    """A metric is undefined for the given input (e.g. empty reference)."""


class LengthMismatchError(VisemeKitError):
    """Paired sequences differ in length."""


class InsufficientFoldsError(VisemeKitError):
    """Fewer folds than the summary statistics need."""


class InsufficientSpeakersError(VisemeKitError):
    """An operation needs more speakers than were supplied."""


class UnknownSpeakerError(VisemeKitError):
    """A speaker id does not refer to a declared speaker."""


class ConfigError(VisemeKitError):
    """An experiment configuration is invalid."""
