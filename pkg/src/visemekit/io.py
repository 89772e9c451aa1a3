"""File codecs for the toolkit's on-disk formats.

Formats
-------
confusion matrix (CSV)
    First row: empty corner cell, then hypothesis labels.  Each later
    row: reference label, then integer counts.

inventory (text)
    One phoneme per line: ``symbol<TAB>class`` where class is one of
    ``vowel``, ``consonant``, ``silence``, ``short-pause``.  Any run of
    whitespace works as the separator.

P2V map (text)
    Optional header ``# designation: M[...]``, then one class per
    line: ``v01<TAB>p1 p3 p7``.  Reserved classes (``sil``, ``sp``,
    ``gar``) come last and may be omitted when empty.

transcript (text)
    One utterance per line: ``utt_id<TAB>token token token``.

word list (text)
    One word per line.

Lines starting with ``#`` and blank lines are ignored everywhere.
"""

from __future__ import annotations

import csv
import io as _io
from pathlib import Path
from typing import Sequence

from .core import (
    GAR_CLASS,
    PHONEME_CLASSES,
    RESERVED_CLASS_IDS,
    SIL_CLASS,
    SP_CLASS,
    ConfusionMatrix,
    MapSource,
    P2VMap,
    PhonemeInventory,
)
from .errors import FormatError


def _data_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        out.append((number, line))
    return out


# -- confusion matrices -------------------------------------------------

def format_confusion_csv(cm: ConfusionMatrix) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + list(cm.labels))
    for i, label in enumerate(cm.labels):
        writer.writerow([label] + [int(v) for v in cm.counts[i]])
    return buf.getvalue()


def parse_confusion_csv(text: str, inventory: PhonemeInventory | None = None) -> ConfusionMatrix:
    rows = [row for row in csv.reader(text.splitlines()) if row and any(cell.strip() for cell in row)]
    if not rows:
        raise FormatError("confusion matrix file is empty")
    header = [cell.strip() for cell in rows[0][1:]]
    if not header:
        raise FormatError("confusion matrix header has no labels")
    counts = []
    ref_labels = []
    for row in rows[1:]:
        cells = [cell.strip() for cell in row]
        ref_labels.append(cells[0])
        if len(cells) - 1 != len(header):
            raise FormatError(
                f"row for {cells[0]!r} has {len(cells) - 1} cells, expected {len(header)}"
            )
        try:
            counts.append([int(cell) for cell in cells[1:]])
        except ValueError as exc:
            raise FormatError(f"non-integer count in row for {cells[0]!r}: {exc}") from None
    if ref_labels != header:
        raise FormatError(
            "confusion matrix row labels must match column labels in the same order"
        )
    categories = None
    if inventory is not None:
        categories = {s: inventory.category(s) for s in header if s in inventory}
    try:
        return ConfusionMatrix(header, counts, categories=categories)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def read_confusion_csv(path: str | Path, inventory: PhonemeInventory | None = None) -> ConfusionMatrix:
    return parse_confusion_csv(Path(path).read_text(), inventory)


def write_confusion_csv(path: str | Path, cm: ConfusionMatrix) -> None:
    Path(path).write_text(format_confusion_csv(cm))


# -- inventories ---------------------------------------------------------

def parse_inventory(text: str) -> PhonemeInventory:
    pairs = []
    for number, line in _data_lines(text):
        fields = line.split()
        if len(fields) != 2:
            raise FormatError(f"line {number}: expected 'symbol<TAB>class', got {line!r}")
        symbol, category = fields
        if category not in PHONEME_CLASSES:
            raise FormatError(
                f"line {number}: unknown phoneme class {category!r} "
                f"(expected one of {', '.join(PHONEME_CLASSES)})"
            )
        pairs.append((symbol, category))
    try:
        return PhonemeInventory.from_pairs(pairs)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_inventory(inventory: PhonemeInventory) -> str:
    lines = [f"{label.symbol}\t{label.category}" for label in inventory]
    return "\n".join(lines) + "\n"


def read_inventory(path: str | Path) -> PhonemeInventory:
    return parse_inventory(Path(path).read_text())


# -- P2V maps ------------------------------------------------------------

def format_map(p2v: P2VMap) -> str:
    lines = []
    if p2v.designation is not None:
        lines.append(f"# designation: {p2v.designation.render()}")
    for class_id, members in p2v.classes.items():
        lines.append(f"{class_id}\t{' '.join(sorted(members))}")
    for class_id, members in (
        (SIL_CLASS, p2v.silence),
        (SP_CLASS, p2v.short_pause),
        (GAR_CLASS, p2v.garbage),
    ):
        if members:
            lines.append(f"{class_id}\t{' '.join(sorted(members))}")
    return "\n".join(lines) + "\n"


def parse_map(text: str) -> P2VMap:
    designation = None
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("#") and "designation:" in line:
            value = line.split("designation:", 1)[1].strip()
            try:
                designation = MapSource.parse(value)
            except ValueError as exc:
                raise FormatError(str(exc)) from None
    classes: dict[str, list[str]] = {}
    reserved: dict[str, list[str]] = {SIL_CLASS: [], SP_CLASS: [], GAR_CLASS: []}
    for number, line in _data_lines(text):
        fields = line.split()
        class_id, members = fields[0], fields[1:]
        if not members:
            raise FormatError(f"line {number}: class {class_id!r} lists no phonemes")
        target = reserved if class_id in RESERVED_CLASS_IDS else classes
        if class_id in target and target is classes:
            raise FormatError(f"line {number}: duplicate class id {class_id!r}")
        target.setdefault(class_id, []).extend(members)
    return P2VMap(
        classes,
        garbage=reserved[GAR_CLASS],
        silence=reserved[SIL_CLASS],
        short_pause=reserved[SP_CLASS],
        designation=designation,
    )


def read_map(path: str | Path) -> P2VMap:
    return parse_map(Path(path).read_text())


def write_map(path: str | Path, p2v: P2VMap) -> None:
    Path(path).write_text(format_map(p2v))


# -- transcripts and word lists -------------------------------------------

def parse_transcript(text: str) -> list[tuple[str, list[str]]]:
    """Utterances as ``(utt_id, tokens)`` pairs, in file order."""
    out = []
    seen = set()
    for number, line in _data_lines(text):
        parts = line.split(maxsplit=1)
        if len(parts) < 2:
            raise FormatError(f"line {number}: expected 'utt_id<TAB>tokens...', got {line!r}")
        utt_id, rest = parts
        if utt_id in seen:
            raise FormatError(f"line {number}: duplicate utterance id {utt_id!r}")
        seen.add(utt_id)
        out.append((utt_id, rest.split()))
    return out


def read_transcript(path: str | Path) -> list[tuple[str, list[str]]]:
    return parse_transcript(Path(path).read_text())


def format_transcript(utterances: Sequence[tuple[str, Sequence[str]]]) -> str:
    return "\n".join(f"{utt_id}\t{' '.join(tokens)}" for utt_id, tokens in utterances) + "\n"


def parse_wordlist(text: str) -> list[str]:
    words = []
    for number, line in _data_lines(text):
        fields = line.split()
        if len(fields) != 1:
            raise FormatError(f"line {number}: expected one word per line, got {line!r}")
        words.append(fields[0])
    return words


def read_wordlist(path: str | Path) -> list[str]:
    return parse_wordlist(Path(path).read_text())


# -- score vectors and rank grids -----------------------------------------

def parse_score_rows(text: str) -> list[tuple[str, list[float]]]:
    """Rows of ``label,v1,v2,...`` used for paired-sample comparisons."""
    rows = []
    for number, line in _data_lines(text):
        cells = [c.strip() for c in line.split(",")]
        if len(cells) < 2:
            raise FormatError(f"line {number}: expected 'label,value,...', got {line!r}")
        try:
            values = [float(c) for c in cells[1:]]
        except ValueError:
            raise FormatError(f"line {number}: non-numeric score value") from None
        rows.append((cells[0], values))
    if not rows:
        raise FormatError("score file has no rows")
    return rows


def read_score_rows(path: str | Path) -> list[tuple[str, list[float]]]:
    return parse_score_rows(Path(path).read_text())


def parse_rank_grid(text: str) -> tuple[list[str], list[str], list[list[int]]]:
    """A header-labelled grid of integer rank scores.

    Returns ``(row_labels, column_labels, cells)``.
    """
    lines = _data_lines(text)
    if not lines:
        raise FormatError("rank grid file is empty")
    header = [c.strip() for c in lines[0][1].split(",")]
    columns = header[1:]
    if not columns:
        raise FormatError("rank grid header has no columns")
    row_labels = []
    cells = []
    for number, line in lines[1:]:
        parts = [c.strip() for c in line.split(",")]
        if len(parts) != len(columns) + 1:
            raise FormatError(
                f"line {number}: expected {len(columns) + 1} cells, got {len(parts)}"
            )
        row_labels.append(parts[0])
        try:
            cells.append([int(c) for c in parts[1:]])
        except ValueError:
            raise FormatError(f"line {number}: rank scores must be integers") from None
    if not cells:
        raise FormatError("rank grid has no rows")
    return row_labels, columns, cells


def read_rank_grid(path: str | Path) -> tuple[list[str], list[str], list[list[int]]]:
    return parse_rank_grid(Path(path).read_text())
