"""Sequence alignment, correctness metrics, and fold summaries.

Alignment uses the classic speech-scoring costs (substitution 10,
deletion 7, insertion 7) so that confusion matrices built from the
alignments carry the same shape bias as standard recogniser scoring
tools.  Unit costs are available through ``UNIT_COSTS``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .core import ConfusionMatrix, PhonemeInventory
from .errors import (
    InsufficientFoldsError,
    LengthMismatchError,
    UndefinedMetricError,
)


class AlignmentCosts(NamedTuple):
    substitution: int
    deletion: int
    insertion: int


HRESULTS_COSTS = AlignmentCosts(substitution=10, deletion=7, insertion=7)
UNIT_COSTS = AlignmentCosts(substitution=1, deletion=1, insertion=1)

_GAP = None


@dataclass(frozen=True)
class AlignmentResult:
    """Counts and aligned pairs from a reference/hypothesis alignment.

    ``pairs`` lists ``(reference, hypothesis)`` tokens where ``None``
    marks a gap: ``(ref, None)`` is a deletion, ``(None, hyp)`` an
    insertion.
    """

    N: int
    D: int
    S: int
    I: int
    pairs: tuple[tuple[str | None, str | None], ...]

    def __post_init__(self) -> None:
        if min(self.N, self.D, self.S, self.I) < 0:
            raise ValueError("alignment counts must be non-negative")
        if self.N != self.correct + self.D + self.S:
            raise ValueError("N must equal correct + deletions + substitutions")

    @property
    def correct(self) -> int:
        return sum(1 for r, h in self.pairs if r is not None and r == h)


def align(
    ref: Sequence[str],
    hyp: Sequence[str],
    costs: AlignmentCosts = HRESULTS_COSTS,
) -> AlignmentResult:
    """Minimum-cost alignment of two label sequences.

    Ties are broken deterministically: substitution (or match) is
    preferred over deletion, which is preferred over insertion.
    """
    n, m = len(ref), len(hyp)
    INF = float("inf")
    cost = [[0.0] * (m + 1) for _ in range(n + 1)]
    move = [[""] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        cost[i][0] = i * costs.deletion
        move[i][0] = "D"
    for j in range(1, m + 1):
        cost[0][j] = j * costs.insertion
        move[0][j] = "I"
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            diag = cost[i - 1][j - 1] + (0 if ref[i - 1] == hyp[j - 1] else costs.substitution)
            up = cost[i - 1][j] + costs.deletion
            left = cost[i][j - 1] + costs.insertion
            best, chosen = diag, "S"
            if up < best:
                best, chosen = up, "D"
            if left < best:
                best, chosen = left, "I"
            cost[i][j] = best
            move[i][j] = chosen
    pairs: list[tuple[str | None, str | None]] = []
    i, j = n, m
    while i > 0 or j > 0:
        step = move[i][j]
        if step == "S":
            pairs.append((ref[i - 1], hyp[j - 1]))
            i, j = i - 1, j - 1
        elif step == "D":
            pairs.append((ref[i - 1], _GAP))
            i -= 1
        else:
            pairs.append((_GAP, hyp[j - 1]))
            j -= 1
    pairs.reverse()
    D = sum(1 for r, h in pairs if h is _GAP)
    I = sum(1 for r, h in pairs if r is _GAP)
    S = sum(1 for r, h in pairs if r is not _GAP and h is not _GAP and r != h)
    return AlignmentResult(N=n, D=D, S=S, I=I, pairs=tuple(pairs))


def correctness(alignment: AlignmentResult) -> float:
    """Correctness C = (N - D - S) / N.  Ignores insertions."""
    if alignment.N == 0:
        raise UndefinedMetricError("correctness is undefined for an empty reference")
    return (alignment.N - alignment.D - alignment.S) / alignment.N


def word_accuracy(refs: Sequence[str], hyps: Sequence[str]) -> float:
    """Fraction of positions where the single-word answers agree."""
    if len(refs) != len(hyps):
        raise LengthMismatchError(
            f"got {len(refs)} references but {len(hyps)} hypotheses"
        )
    if not refs:
        raise UndefinedMetricError("accuracy is undefined for zero classified words")
    return sum(1 for r, h in zip(refs, hyps) if r == h) / len(refs)


@dataclass(frozen=True)
class FoldScores:
    """Per-fold correctness values with their mean and standard error."""

    values: tuple[float, ...]
    mean: float
    stderr: float

    def __post_init__(self) -> None:
        if self.stderr < 0:
            raise ValueError("standard error cannot be negative")
        if not min(self.values) <= self.mean <= max(self.values):
            raise ValueError("mean must lie within the range of the fold values")


def fold_summary(values: Sequence[float]) -> FoldScores:
    """Mean and standard error (sample sd over sqrt(n)) of fold scores."""
    values = tuple(float(v) for v in values)
    n = len(values)
    if n < 2:
        raise InsufficientFoldsError(f"need at least 2 folds, got {n}")
    mean = sum(values) / n
    variance = sum((v - mean) ** 2 for v in values) / (n - 1)
    return FoldScores(values=values, mean=mean, stderr=math.sqrt(variance) / math.sqrt(n))


@dataclass(frozen=True)
class ConfusionTally:
    """A confusion matrix plus the alignment events it excludes.

    Deletions and insertions do not enter the matrix; they are kept as
    per-label side counts.
    """

    matrix: ConfusionMatrix
    deletions: dict[str, int]
    insertions: dict[str, int]


def confusions_from_alignments(
    alignments: Iterable[AlignmentResult],
    labels: Sequence[str] | None = None,
    inventory: PhonemeInventory | None = None,
) -> ConfusionTally:
    """Accumulate aligned pairs into a confusion matrix.

    Correct pairs increment the diagonal, substitutions the
    (reference, hypothesis) cell.  ``labels`` fixes the matrix axes;
    when omitted, the sorted set of observed labels is used.
    """
    deletions: Counter[str] = Counter()
    insertions: Counter[str] = Counter()
    cells: Counter[tuple[str, str]] = Counter()
    observed: set[str] = set()
    for alignment in alignments:
        for r, h in alignment.pairs:
            if r is None:
                insertions[h] += 1
                observed.add(h)
            elif h is None:
                deletions[r] += 1
                observed.add(r)
            else:
                cells[(r, h)] += 1
                observed.update((r, h))
    if labels is None:
        labels = sorted(observed)
    else:
        labels = list(labels)
        stray = observed - set(labels)
        if stray:
            raise LengthMismatchError(
                f"aligned labels not in the supplied label list: {sorted(stray)}"
            )
    index = {s: i for i, s in enumerate(labels)}
    counts = [[0] * len(labels) for _ in labels]
    for (r, h), c in cells.items():
        counts[index[r]][index[h]] += c
    categories = None
    if inventory is not None:
        categories = {s: inventory.category(s) for s in labels if s in inventory}
    matrix = ConfusionMatrix(labels, counts, categories=categories)
    return ConfusionTally(matrix=matrix, deletions=dict(deletions), insertions=dict(insertions))
