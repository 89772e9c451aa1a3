"""Strictly-confused phoneme clustering.

Turns a phoneme confusion matrix into a phoneme-to-viseme map.  The
derivation runs in three passes:

1. Phonemes whose only counts are true positives (no off-diagonal mass
   in their row or column) keep a class of their own.
2. The rest are grouped greedily.  Every unordered same-category pair
   with symmetric confusion at or above the threshold is enumerated,
   sorted by descending confusion (ties broken lexicographically by
   the pair's sorted symbols), and processed in order:

   * neither phoneme grouped yet: the pair founds a new viseme;
   * exactly one grouped: the loose phoneme joins that viseme only if
     it is confused (at or above the threshold) with every phoneme
     already in it;
   * both grouped: skip.

   Phonemes left over after the sweep become single-phoneme visemes.
3. Vowels and consonants never share a viseme, silence and short-pause
   labels go to their reserved classes, and phonemes with no counts at
   all (never seen in recognition output) land in the garbage class.

Classes are numbered ``v01``, ``v02``, ... after sorting by descending
size, breaking ties by the smallest member symbol, which makes the
output deterministic and diff-friendly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .core import (
    CONSONANT,
    SILENCE,
    SHORT_PAUSE,
    VOWEL,
    ConfusionMatrix,
    MapSource,
    P2VMap,
    PhonemeInventory,
    confusion,
    merge_matrices,
)
from .errors import (
    EmptyInputError,
    InsufficientSpeakersError,
    InventoryConflictError,
    LabelNotFoundError,
    UnknownSpeakerError,
)

TIE_BREAK_RULES = ("lexicographic",)


@dataclass(frozen=True)
class ClusterOptions:
    """Knobs for the clustering sweep.

    ``confusion_threshold`` is the minimum symmetric confusion for a
    pair to count as confused.  ``tie_break`` names the deterministic
    ordering rule used for equally-confused pairs; only
    ``"lexicographic"`` is implemented.
    """

    confusion_threshold: int = 1
    tie_break: str = "lexicographic"

    def __post_init__(self) -> None:
        if self.confusion_threshold < 1:
            raise ValueError("confusion_threshold must be at least 1")
        if self.tie_break not in TIE_BREAK_RULES:
            raise ValueError(
                f"unknown tie_break rule {self.tie_break!r}; expected one of {TIE_BREAK_RULES}"
            )


DEFAULT_OPTIONS = ClusterOptions()


def derive_visemes(
    cm: ConfusionMatrix,
    inventory: PhonemeInventory,
    options: ClusterOptions | None = None,
    *,
    speaker: str | None = None,
    designation: MapSource | None = None,
) -> P2VMap:
    """Cluster a confusion matrix into a P2V map.

    Matrix labels must all be in ``inventory``.  ``speaker`` (or a full
    ``designation``) records where the confusions came from.
    """
    options = options or DEFAULT_OPTIONS
    if not cm.labels:
        raise EmptyInputError("cannot derive visemes from an empty confusion matrix")
    for symbol in cm.labels:
        if symbol not in inventory:
            raise LabelNotFoundError(
                f"matrix label {symbol!r} is not declared in the inventory"
            )
        attached = (cm.categories or {}).get(symbol)
        if attached is not None and attached != inventory.category(symbol):
            raise InventoryConflictError(
                f"matrix tags {symbol!r} as {attached!r} but the inventory says "
                f"{inventory.category(symbol)!r}"
            )
    if designation is None and speaker is not None:
        designation = MapSource("speaker", speaker)

    silence = [s for s in cm.labels if inventory.category(s) == SILENCE]
    short_pause = [s for s in cm.labels if inventory.category(s) == SHORT_PAUSE]
    # Reserved classes mirror the inventory even when the matrix lacks the rows.
    sil_symbol = inventory.silence_symbol
    sp_symbol = inventory.short_pause_symbol
    silence = sorted(set(silence) | ({sil_symbol} if sil_symbol else set()))
    short_pause = sorted(set(short_pause) | ({sp_symbol} if sp_symbol else set()))

    clusterable = [
        s for s in cm.labels if inventory.category(s) in (VOWEL, CONSONANT)
    ]
    garbage = []
    singles = []
    remaining = []
    for s in clusterable:
        row = cm.row_mass(s)
        col = cm.column_mass(s)
        tp = cm.true_positives(s)
        if row + col == 0:
            garbage.append(s)
        elif tp > 0 and row - tp == 0 and col - tp == 0:
            singles.append(s)
        else:
            remaining.append(s)

    threshold = options.confusion_threshold
    pairs = []
    for i, a in enumerate(remaining):
        for b in remaining[i + 1 :]:
            if inventory.category(a) != inventory.category(b):
                continue
            score = confusion(cm, a, b)
            if score >= threshold:
                pairs.append((score, tuple(sorted((a, b)))))
    pairs.sort(key=lambda item: (-item[0], item[1]))

    clusters: list[set[str]] = []
    member_of: dict[str, int] = {}
    for score, (a, b) in pairs:
        ia, ib = member_of.get(a), member_of.get(b)
        if ia is None and ib is None:
            member_of[a] = member_of[b] = len(clusters)
            clusters.append({a, b})
        elif ia is None or ib is None:
            loose, host = (a, ib) if ia is None else (b, ia)
            if all(confusion(cm, loose, m) >= threshold for m in clusters[host]):
                clusters[host].add(loose)
                member_of[loose] = host
        # both already grouped (same or different viseme): skip

    classes = [set(c) for c in clusters]
    classes.extend({s} for s in singles)
    classes.extend({s} for s in remaining if s not in member_of)
    classes.sort(key=lambda c: (-len(c), min(c)))
    width = max(2, len(str(len(classes))))
    numbered = {f"v{i:0{width}d}": members for i, members in enumerate(classes, start=1)}

    return P2VMap(
        numbered,
        garbage=garbage,
        silence=silence,
        short_pause=short_pause,
        designation=designation,
    )


def derive_multi_speaker(
    cms: Sequence[ConfusionMatrix],
    inventory: PhonemeInventory,
    options: ClusterOptions | None = None,
) -> P2VMap:
    """P2V map from the pooled confusions of every supplied speaker."""
    merged = merge_matrices(cms)
    return derive_visemes(merged, inventory, options, designation=MapSource("all"))


def derive_speaker_independent(
    cms: Mapping[str, ConfusionMatrix],
    holdout: str,
    inventory: PhonemeInventory,
    options: ClusterOptions | None = None,
) -> P2VMap:
    """P2V map from every speaker's confusions except the holdout's."""
    if holdout not in cms:
        raise UnknownSpeakerError(f"holdout speaker {holdout!r} has no confusion matrix")
    if len(cms) < 2:
        raise InsufficientSpeakersError(
            "speaker-independent maps need at least two speakers"
        )
    rest = [cm for speaker, cm in cms.items() if speaker != holdout]
    merged = merge_matrices(rest)
    return derive_visemes(
        merged, inventory, options, designation=MapSource("all-but", holdout)
    )
