"""Exact Wilcoxon signed-rank comparison and weighted ranking tables.

The signed-rank test here computes the exact two-sided p-value by
dynamic programming over the distribution of the signed rank sum
across all sign assignments, which stays correct in the presence of
tied ranks.  Folded score vectors are short (sevens and tens), far
below where a normal approximation becomes defensible, so no
approximation is offered.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from .errors import EmptyInputError, LengthMismatchError

SIGNIFICANCE_LEVEL = 0.05


@dataclass(frozen=True)
class WilcoxonResult:
    """Signed-rank sum, effective sample size, and exact p-value."""

    statistic: float
    n_effective: int
    p_value: float
    significant: bool

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError("p-value must lie in [0, 1]")
        if self.significant != (self.p_value < SIGNIFICANCE_LEVEL):
            raise ValueError("significance flag must mirror p < 0.05")


def _exact_two_sided_p(doubled_ranks: Sequence[int], observed: int) -> float:
    """P(|sum of signed ranks| >= |observed|) over all sign vectors.

    Works on doubled ranks so tied (half-integer) ranks stay integral.
    Counts are exact Python integers; the final division is the only
    rounding step.
    """
    counts: dict[int, int] = {0: 1}
    for rank in doubled_ranks:
        nxt: dict[int, int] = {}
        for total, ways in counts.items():
            nxt[total + rank] = nxt.get(total + rank, 0) + ways
            nxt[total - rank] = nxt.get(total - rank, 0) + ways
        counts = nxt
    target = abs(observed)
    favourable = sum(ways for total, ways in counts.items() if abs(total) >= target)
    return favourable / (1 << len(doubled_ranks))


def wilcoxon_exact(x: Sequence[float], y: Sequence[float]) -> WilcoxonResult:
    """Exact two-sided Wilcoxon signed-rank test on paired samples.

    Zero differences are dropped; tied absolute differences receive
    average ranks.  With no non-zero differences the samples are
    indistinguishable and the p-value is 1.
    """
    if len(x) != len(y):
        raise LengthMismatchError(f"paired samples differ in length: {len(x)} vs {len(y)}")
    if len(x) == 0:
        raise EmptyInputError("paired samples must contain at least one pair")
    diffs = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    diffs = diffs[diffs != 0.0]
    n = int(diffs.size)
    if n == 0:
        return WilcoxonResult(statistic=0.0, n_effective=0, p_value=1.0, significant=False)
    ranks = rankdata(np.abs(diffs), method="average")
    signed = np.where(diffs > 0, ranks, -ranks)
    statistic = float(signed.sum())
    doubled = [int(round(2 * r)) for r in ranks]
    observed = int(round(2 * statistic))
    p = _exact_two_sided_p(doubled, observed)
    return WilcoxonResult(
        statistic=statistic,
        n_effective=n,
        p_value=p,
        significant=p < SIGNIFICANCE_LEVEL,
    )


def wilcoxon_matrix(
    series: Sequence[tuple[str, Sequence[float]]]
) -> tuple[list[str], np.ndarray, np.ndarray]:
    """Pairwise exact signed-rank p-values for labelled score vectors.

    Returns ``(labels, p_values, significant)`` where both matrices are
    square in the order of ``series``.
    """
    labels = [label for label, _ in series]
    k = len(series)
    p = np.ones((k, k))
    sig = np.zeros((k, k), dtype=int)
    for i in range(k):
        for j in range(i + 1, k):
            result = wilcoxon_exact(series[i][1], series[j][1])
            p[i, j] = p[j, i] = result.p_value
            sig[i, j] = sig[j, i] = int(result.significant)
    return labels, p, sig


def rank_score(baseline, other, self_comparison: bool = False) -> int:
    """Weighted comparison of fold summaries against a baseline.

    +2 when the other mean clears the baseline mean by more than one
    baseline standard error, -2 when it falls more than one below;
    otherwise +1 or -1 for differences inside the band.  A system
    compared with itself scores 0.
    """
    if self_comparison:
        return 0
    if other.mean > baseline.mean + baseline.stderr:
        return 2
    if other.mean < baseline.mean - baseline.stderr:
        return -2
    return 1 if other.mean >= baseline.mean else -1


@dataclass(frozen=True)
class RankTable:
    """Grid of weighted rank scores with per-column totals."""

    cells: tuple[tuple[int, ...], ...]
    totals: tuple[int, ...]
    row_labels: tuple[str, ...]
    column_labels: tuple[str, ...]

    @property
    def best_columns(self) -> tuple[str, ...]:
        top = max(self.totals)
        return tuple(
            label for label, total in zip(self.column_labels, self.totals) if total == top
        )


def rank_table(
    cells: Sequence[Sequence[int]],
    row_labels: Sequence[str] | None = None,
    column_labels: Sequence[str] | None = None,
) -> RankTable:
    """Column totals for a rectangular grid of rank scores.

    Cells must lie in {-2, -1, 0, +1, +2}; on a square grid the
    diagonal (a system against itself) must be zero.
    """
    grid = tuple(tuple(int(v) for v in row) for row in cells)
    if not grid or not grid[0]:
        raise ValueError("rank table needs a non-empty grid")
    width = len(grid[0])
    if any(len(row) != width for row in grid):
        raise ValueError("rank table grid must be rectangular")
    for row in grid:
        for value in row:
            if value not in (-2, -1, 0, 1, 2):
                raise ValueError(f"rank scores must be in -2..2, got {value}")
    if len(grid) == width:
        for i in range(width):
            if grid[i][i] != 0:
                raise ValueError("self comparisons on the diagonal must score 0")
    if row_labels is None:
        row_labels = tuple(f"r{i + 1}" for i in range(len(grid)))
    if column_labels is None:
        column_labels = tuple(f"c{j + 1}" for j in range(width))
    if len(row_labels) != len(grid) or len(column_labels) != width:
        raise ValueError("label counts must match the grid dimensions")
    totals = tuple(sum(row[j] for row in grid) for j in range(width))
    return RankTable(
        cells=grid,
        totals=totals,
        row_labels=tuple(row_labels),
        column_labels=tuple(column_labels),
    )
