"""Batch command-line front end.

Subcommands: ``cluster``, ``merge``, ``transcribe``, ``homophenes``,
``score``, ``wilcoxon``, ``rank``, ``simulate``, ``validate``.

Exit codes: 0 on success, 1 on usage errors, 2 on data or validation
errors.  Diagnostics go to stderr; data goes to ``--out`` targets or
stdout (``-``).  Inputs are read and checked before any output file is
opened, so a failing invocation leaves no partial outputs behind.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import sys
from pathlib import Path

from . import __version__
from .clustering import ClusterOptions, derive_visemes
from .core import MapSource, validate_map
from .dictionary import parse_dictionary
from .errors import LengthMismatchError, UsageError, VisemeKitError
from .io import (
    format_confusion_csv,
    format_map,
    read_confusion_csv,
    read_inventory,
    read_map,
    read_rank_grid,
    read_score_rows,
    read_transcript,
    read_wordlist,
)
from .core import merge_matrices
from .scoring import HRESULTS_COSTS, UNIT_COSTS, align, fold_summary
from .simulator import load_experiment_config, run_experiment, write_report
from .stats import rank_table, wilcoxon_matrix
from .transcription import LEVELS, homophene_stats, word_to_viseme_strings


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D102 - argparse hook
        raise UsageError(f"{self.prog}: {message}")


def _csv_text(rows) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(list(row))
    return buf.getvalue()


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def build_parser() -> _Parser:
    parser = _Parser(prog="visemekit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"visemekit {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("cluster", parser_class=_Parser, help="derive a P2V map from a confusion matrix")
    p.add_argument("--cm", required=True, help="confusion matrix CSV")
    p.add_argument("--inventory", required=True, help="phoneme inventory file")
    p.add_argument("--threshold", type=int, default=1, help="minimum confusion to group a pair")
    p.add_argument("--speaker", help="speaker id recorded in the map designation")
    p.add_argument("--designation", help="explicit designation, e.g. M[all] or M[!2]")
    p.add_argument("--out", default="-", help="output map file (default stdout)")
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("merge", parser_class=_Parser, help="sum confusion matrices over the union label set")
    p.add_argument("--cm", action="append", required=True, help="confusion matrix CSV (repeatable)")
    p.add_argument("--inventory", help="optional inventory used to tag labels")
    p.add_argument("--out", default="-", help="output CSV (default stdout)")
    p.set_defaults(func=_cmd_merge)

    p = sub.add_parser("transcribe", parser_class=_Parser, help="translate word transcripts into viseme strings")
    p.add_argument("--map", dest="map_path", required=True)
    p.add_argument("--dict", dest="dict_path", required=True)
    p.add_argument("--transcript", required=True, help="utt_id<TAB>word word ... per line")
    p.add_argument("--inventory", help="optional inventory for dictionary validation")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_transcribe)

    p = sub.add_parser("homophenes", parser_class=_Parser, help="homophene statistics at word, phoneme, and viseme level")
    p.add_argument("--map", dest="map_path", required=True)
    p.add_argument("--dict", dest="dict_path", required=True)
    p.add_argument("--words", required=True, help="one word per line")
    p.add_argument("--inventory", help="optional inventory for dictionary validation")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_homophenes)

    p = sub.add_parser("score", parser_class=_Parser, help="align reference and hypothesis transcripts per fold")
    p.add_argument("--ref", action="append", required=True, help="reference transcript (repeat per fold)")
    p.add_argument("--hyp", action="append", required=True, help="hypothesis transcript (repeat per fold)")
    p.add_argument("--unit-costs", action="store_true", help="use 1/1/1 alignment costs instead of 10/7/7")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("wilcoxon", parser_class=_Parser, help="pairwise exact signed-rank tests over score rows")
    p.add_argument("--scores", required=True, help="CSV rows: label,v1,v2,...")
    p.add_argument("--out", default="-", help="p-value matrix output")
    p.add_argument("--sig-out", default="-", help="0/1 significance matrix output")
    p.set_defaults(func=_cmd_wilcoxon)

    p = sub.add_parser("rank", parser_class=_Parser, help="total a grid of weighted rank scores")
    p.add_argument("--grid", required=True, help="CSV grid with row and column labels")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("simulate", parser_class=_Parser, help="run a synthetic recognition experiment")
    p.add_argument("--config", required=True, help="experiment configuration (JSON)")
    p.add_argument("--out", required=True, help="report directory")
    p.add_argument("--seed", type=int, help="override the master seed from the config")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("validate", parser_class=_Parser, help="check a P2V map against an inventory")
    p.add_argument("--map", dest="map_path", required=True)
    p.add_argument("--inventory", required=True)
    p.set_defaults(func=_cmd_validate)

    return parser


def _cmd_cluster(args) -> int:
    inventory = read_inventory(args.inventory)
    cm = read_confusion_csv(args.cm, inventory)
    if args.designation and args.speaker:
        raise UsageError("give either --speaker or --designation, not both")
    designation = None
    if args.designation:
        try:
            designation = MapSource.parse(args.designation)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    speaker = args.speaker
    if designation is None and speaker is None:
        speaker = Path(args.cm).stem
    options = ClusterOptions(confusion_threshold=args.threshold)
    p2v = derive_visemes(cm, inventory, options, speaker=speaker, designation=designation)
    _emit(format_map(p2v), args.out)
    return 0


def _cmd_merge(args) -> int:
    inventory = read_inventory(args.inventory) if args.inventory else None
    matrices = [read_confusion_csv(path, inventory) for path in args.cm]
    merged = merge_matrices(matrices)
    _emit(format_confusion_csv(merged), args.out)
    return 0


def _cmd_transcribe(args) -> int:
    inventory = read_inventory(args.inventory) if args.inventory else None
    p2v = read_map(args.map_path)
    dictionary = parse_dictionary(Path(args.dict_path).read_text(), inventory)
    utterances = read_transcript(args.transcript)
    lines = []
    for utt_id, words in utterances:
        visemes: list[str] = []
        for word in words:
            # several pronunciations may exist; transcripts take the first
            visemes.extend(word_to_viseme_strings(word, p2v, dictionary)[0])
        lines.append(f"{utt_id}\t{' '.join(visemes)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_homophenes(args) -> int:
    inventory = read_inventory(args.inventory) if args.inventory else None
    p2v = read_map(args.map_path)
    dictionary = parse_dictionary(Path(args.dict_path).read_text(), inventory)
    words = read_wordlist(args.words)
    rows = [["level", "W", "T", "H"]]
    for level in LEVELS:
        stats = homophene_stats(words, dictionary, level=level, p2v=p2v)
        rows.append([level, stats.W, stats.T, f"{stats.H:.5f}"])
    _emit(_csv_text(rows), args.out)
    return 0


def _cmd_score(args) -> int:
    if len(args.ref) != len(args.hyp):
        raise UsageError(
            f"got {len(args.ref)} --ref files but {len(args.hyp)} --hyp files"
        )
    costs = UNIT_COSTS if args.unit_costs else HRESULTS_COSTS
    fold_rows = []
    fold_c = []
    totals = [0, 0, 0, 0]
    for fold, (ref_path, hyp_path) in enumerate(zip(args.ref, args.hyp), start=1):
        refs = dict(read_transcript(ref_path))
        hyps = dict(read_transcript(hyp_path))
        missing = sorted(set(refs) - set(hyps))
        if missing:
            raise LengthMismatchError(
                f"fold {fold}: hypothesis file lacks utterances: {', '.join(missing)}"
            )
        N = D = S = I = 0
        for utt_id in refs:
            a = align(refs[utt_id], hyps.get(utt_id, []), costs)
            N, D, S, I = N + a.N, D + a.D, S + a.S, I + a.I
        if N == 0:
            raise LengthMismatchError(f"fold {fold}: reference contains no labels")
        C = (N - D - S) / N
        fold_rows.append([fold, N, D, S, I, f"{C:.6f}"])
        fold_c.append(C)
        totals = [totals[0] + N, totals[1] + D, totals[2] + S, totals[3] + I]
    rows = [["fold", "N", "D", "S", "I", "C"]]
    rows.extend(fold_rows)
    mean = fold_summary(fold_c).mean if len(fold_c) >= 2 else fold_c[0]
    rows.append(["summary", *totals, f"{mean:.6f}"])
    _emit(_csv_text(rows), args.out)
    return 0


def _cmd_wilcoxon(args) -> int:
    series = read_score_rows(args.scores)
    lengths = {len(values) for _, values in series}
    if len(lengths) > 1:
        raise LengthMismatchError("all score rows must have the same number of folds")
    labels, p, sig = wilcoxon_matrix(series)
    p_rows = [[""] + labels]
    s_rows = [[""] + labels]
    for i, label in enumerate(labels):
        p_rows.append([label] + [f"{p[i, j]:.3f}" for j in range(len(labels))])
        s_rows.append([label] + [int(sig[i, j]) for j in range(len(labels))])
    if args.out == "-" and args.sig_out == "-":
        _emit(_csv_text(p_rows) + "# significant (1 = p < 0.05)\n" + _csv_text(s_rows), "-")
    else:
        _emit(_csv_text(p_rows), args.out)
        _emit(_csv_text(s_rows), args.sig_out)
    return 0


def _cmd_rank(args) -> int:
    row_labels, column_labels, cells = read_rank_grid(args.grid)
    try:
        table = rank_table(cells, row_labels, column_labels)
    except ValueError as exc:
        raise VisemeKitError(str(exc)) from None
    rows = [[""] + list(table.column_labels)]
    for label, row in zip(table.row_labels, table.cells):
        rows.append([label] + list(row))
    rows.append(["Total"] + list(table.totals))
    _emit(_csv_text(rows), args.out)
    return 0


def _cmd_simulate(args) -> int:
    config = load_experiment_config(args.config)
    if args.seed is not None:
        config.master_seed = args.seed
    report = run_experiment(config)
    write_report(report, args.out)
    return 0


def _cmd_validate(args) -> int:
    inventory = read_inventory(args.inventory)
    p2v = read_map(args.map_path)
    report = validate_map(p2v, inventory)
    sys.stdout.write(str(report) + "\n")
    return 0 if report.ok else 2


def dispatch(argv) -> int:
    """Parse and run; returns the process exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "func", None) is None:
            parser.print_usage(sys.stderr)
            return 1
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except VisemeKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse --help/--version
        return int(exc.code or 0)


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
