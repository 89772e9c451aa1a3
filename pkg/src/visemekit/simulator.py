"""Synthetic recogniser harness for end-to-end pipeline runs.

A :class:`ConfusionProfile` describes how a speaker's recogniser
mangles each phoneme (kept, replaced, or dropped, plus spurious
insertions between phonemes).  Sampling from profiles yields
hypothesis transcripts, which drive the full analysis chain:
confusion matrices, P2V maps, viseme transcription, fold scoring,
signed-rank comparisons, and ranking tables.

Outcomes are drawn independently per phoneme with no context
modelling, so simulated scores exercise the pipeline but are not
comparable to any recogniser built on real video.

Seeding: a master seed fans out to per-channel sub-seeds through a
hash of (master, purpose, speaker ids, fold), so adding a speaker or a
crossing never perturbs the draws of existing ones, and a report can
be regenerated byte for byte from its configuration.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .clustering import (
    ClusterOptions,
    derive_multi_speaker,
    derive_speaker_independent,
    derive_visemes,
)
from .core import (
    ConfusionMatrix,
    ExperimentTag,
    MapSource,
    P2VMap,
    PhonemeInventory,
)
from .dictionary import PronunciationDictionary, parse_dictionary, phonemize
from .errors import (
    ConfigError,
    InsufficientSpeakersError,
    OutOfVocabularyError,
    UncoveredPhonemeError,
)
from .io import format_confusion_csv, format_map, parse_inventory, parse_wordlist
from .scoring import (
    HRESULTS_COSTS,
    FoldScores,
    align,
    confusions_from_alignments,
    correctness,
    fold_summary,
)
from .stats import RankTable, rank_score, rank_table, wilcoxon_matrix

CROSSING_TYPES = ("SSD", "MS", "DSD", "DSDD", "SI")

_PROB_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PhonemeOutcomes:
    """Categorical outcome distribution for one reference phoneme."""

    same: float = 0.0
    delete: float = 0.0
    substitutions: tuple[tuple[str, float], ...] = ()

    def __post_init__(self) -> None:
        probs = [self.same, self.delete] + [p for _, p in self.substitutions]
        if any(p < 0 for p in probs):
            raise ValueError("outcome probabilities cannot be negative")
        targets = [t for t, _ in self.substitutions]
        if len(set(targets)) != len(targets):
            raise ValueError("duplicate substitution target")
        total = sum(probs)
        if abs(total - 1.0) > _PROB_TOLERANCE:
            raise ValueError(f"outcome probabilities must sum to 1, got {total!r}")
        object.__setattr__(
            self, "substitutions", tuple(sorted(self.substitutions))
        )

    @classmethod
    def from_spec(cls, spec: Mapping) -> "PhonemeOutcomes":
        subs = tuple((str(t), float(p)) for t, p in dict(spec.get("substitutions", {})).items())
        return cls(
            same=float(spec.get("same", 0.0)),
            delete=float(spec.get("delete", 0.0)),
            substitutions=subs,
        )


@dataclass(frozen=True)
class ConfusionProfile:
    """Per-phoneme outcome distributions plus a per-boundary insertion rate.

    ``default`` covers phonemes without an explicit entry.  Inserted
    phonemes are drawn uniformly from ``insertion_pool`` (by default
    the explicitly covered phonemes).
    """

    outcomes: Mapping[str, PhonemeOutcomes] = field(default_factory=dict)
    insertion_rate: float = 0.0
    insertion_pool: tuple[str, ...] = ()
    default: PhonemeOutcomes | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.insertion_rate <= 1.0:
            raise ValueError("insertion rate must be a probability")
        if self.insertion_rate > 0 and not self.pool:
            raise ValueError("a positive insertion rate needs a non-empty insertion pool")

    @property
    def pool(self) -> tuple[str, ...]:
        if self.insertion_pool:
            return tuple(sorted(self.insertion_pool))
        return tuple(sorted(self.outcomes))

    def covers(self, symbol: str) -> bool:
        return symbol in self.outcomes or self.default is not None

    def outcome_for(self, symbol: str) -> PhonemeOutcomes:
        try:
            return self.outcomes[symbol]
        except KeyError:
            if self.default is not None:
                return self.default
            raise UncoveredPhonemeError(
                f"profile has no outcome distribution for phoneme {symbol!r}"
            ) from None

    def cross_class_substitutions(self, inventory: PhonemeInventory) -> list[tuple[str, str]]:
        """Substitution edges whose source and target differ in category."""
        crossings = []
        for source, outcomes in sorted(self.outcomes.items()):
            for target, prob in outcomes.substitutions:
                if prob > 0 and source in inventory and target in inventory:
                    if inventory.category(source) != inventory.category(target):
                        crossings.append((source, target))
        return crossings

    @classmethod
    def identity(cls) -> "ConfusionProfile":
        return cls(default=PhonemeOutcomes(same=1.0))

    @classmethod
    def from_spec(cls, spec: Mapping) -> "ConfusionProfile":
        outcomes = {
            str(sym): PhonemeOutcomes.from_spec(entry)
            for sym, entry in dict(spec.get("phonemes", {})).items()
        }
        default = spec.get("default")
        return cls(
            outcomes=outcomes,
            insertion_rate=float(spec.get("insertion_rate", 0.0)),
            insertion_pool=tuple(spec.get("insertion_pool", ())),
            default=PhonemeOutcomes.from_spec(default) if default is not None else None,
        )


def _subseed(master: int, *parts: object) -> int:
    text = ":".join([str(master)] + [str(p) for p in parts])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def simulate_recognition(
    refs: Sequence[Sequence[str]],
    profile: ConfusionProfile,
    seed: int,
) -> list[list[str]]:
    """Sample hypothesis transcripts for the reference transcripts.

    Deterministic for a fixed ``(refs, profile, seed)`` triple.  Every
    reference phoneme must be covered by the profile.
    """
    for utt in refs:
        for phone in utt:
            if not profile.covers(phone):
                raise UncoveredPhonemeError(
                    f"profile has no outcome distribution for phoneme {phone!r}"
                )
    rng = np.random.default_rng(seed)
    pool = profile.pool
    hyps: list[list[str]] = []
    for utt in refs:
        out: list[str] = []
        for phone in utt:
            if profile.insertion_rate and rng.random() < profile.insertion_rate:
                out.append(pool[int(rng.integers(len(pool)))])
            outcome = profile.outcome_for(phone)
            draw = rng.random()
            edge = outcome.same
            if draw < edge:
                out.append(phone)
                continue
            edge += outcome.delete
            if draw < edge:
                continue
            emitted = None
            for target, prob in outcome.substitutions:
                edge += prob
                if draw < edge:
                    emitted = target
                    break
            # cumulative round-off can leave a sliver at the top; give it
            # to the last listed outcome
            if emitted is None:
                emitted = outcome.substitutions[-1][0] if outcome.substitutions else phone
            out.append(emitted)
        if profile.insertion_rate and rng.random() < profile.insertion_rate:
            out.append(pool[int(rng.integers(len(pool)))])
        hyps.append(out)
    return hyps


@dataclass
class ExperimentConfig:
    """Everything a synthetic experiment needs, fully materialised."""

    master_seed: int
    folds: int
    vocabulary: list[str]
    dictionary: PronunciationDictionary
    inventory: PhonemeInventory
    speakers: list[str]
    profiles: dict[str, ConfusionProfile]
    crossings: list[str]
    cluster_options: ClusterOptions = field(default_factory=ClusterOptions)
    echo: dict | None = None


def load_experiment_config(path: str | Path) -> ExperimentConfig:
    """Read a JSON experiment configuration.

    Relative file references are resolved against the config file's
    directory.  See the package README for the schema.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    base = path.parent

    def _resolve(name: str) -> Path:
        if name not in raw:
            raise ConfigError(f"config is missing the {name!r} entry")
        return base / str(raw[name])

    inventory = parse_inventory(_resolve("inventory").read_text())
    dictionary = parse_dictionary(_resolve("dictionary").read_text(), inventory)
    vocabulary = parse_wordlist(_resolve("vocabulary").read_text())
    speakers_spec = raw.get("speakers")
    if not isinstance(speakers_spec, dict) or not speakers_spec:
        raise ConfigError("config must declare a non-empty 'speakers' object")
    profiles = {}
    for speaker, spec in speakers_spec.items():
        try:
            profiles[str(speaker)] = ConfusionProfile.from_spec(spec)
        except ValueError as exc:
            raise ConfigError(f"speaker {speaker!r}: {exc}") from None
    cluster_spec = raw.get("cluster", {})
    try:
        cluster_options = ClusterOptions(
            confusion_threshold=int(cluster_spec.get("confusion_threshold", 1)),
            tie_break=str(cluster_spec.get("tie_break", "lexicographic")),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return ExperimentConfig(
        master_seed=int(raw.get("master_seed", 0)),
        folds=int(raw.get("folds", 0)),
        vocabulary=vocabulary,
        dictionary=dictionary,
        inventory=inventory,
        speakers=[str(s) for s in speakers_spec],
        profiles=profiles,
        crossings=[str(c) for c in raw.get("crossings", ["SSD"])],
        cluster_options=cluster_options,
        echo=raw,
    )


@dataclass
class CrossingScores:
    """Per-fold counts and the fold summary for one experiment crossing."""

    crossing: str
    tag: ExperimentTag
    per_fold: list[tuple[int, int, int, int, float]]
    summary: FoldScores


@dataclass
class ExperimentReport:
    """All derived artefacts of one experiment run."""

    config: ExperimentConfig
    confusions: dict[str, ConfusionMatrix]
    maps: dict[str, P2VMap]
    crossings: list[CrossingScores]
    wilcoxon: tuple[list[str], np.ndarray, np.ndarray] | None
    ranks: RankTable | None


def _validate_config(config: ExperimentConfig) -> None:
    if config.folds < 2:
        raise ConfigError(f"experiments need at least 2 folds, got {config.folds}")
    if not config.speakers:
        raise ConfigError("no speakers declared")
    unknown = [c for c in config.crossings if c not in CROSSING_TYPES]
    if unknown:
        raise ConfigError(
            f"unknown crossings {unknown}; expected a subset of {list(CROSSING_TYPES)}"
        )
    for speaker in config.speakers:
        if speaker not in config.profiles:
            raise ConfigError(f"speaker {speaker!r} has no confusion profile")
    missing = sorted({w.upper() for w in config.vocabulary if w not in config.dictionary})
    if missing:
        raise OutOfVocabularyError(
            "vocabulary words missing from the dictionary: " + ", ".join(missing)
        )
    if "SI" in config.crossings and len(config.speakers) < 2:
        raise InsufficientSpeakersError(
            "speaker-independent crossings need at least two speakers"
        )


def _expand_crossings(config: ExperimentConfig) -> list[tuple[str, ExperimentTag]]:
    tags: list[tuple[str, ExperimentTag]] = []
    speakers = config.speakers
    for crossing in config.crossings:
        if crossing == "SSD":
            for q in speakers:
                tags.append((crossing, ExperimentTag(MapSource("speaker", q), q, q)))
        elif crossing == "MS":
            for q in speakers:
                tags.append((crossing, ExperimentTag(MapSource("all"), q, q)))
        elif crossing == "DSD":
            for q in speakers:
                for n in speakers:
                    if n != q:
                        tags.append((crossing, ExperimentTag(MapSource("speaker", n), q, q)))
        elif crossing == "DSDD":
            for q in speakers:
                for n in speakers:
                    if n != q:
                        tags.append((crossing, ExperimentTag(MapSource("speaker", n), n, q)))
        elif crossing == "SI":
            for q in speakers:
                tags.append((crossing, ExperimentTag(MapSource("all-but", q), q, q)))
    return tags


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run the full pipeline for every requested crossing.

    For the crossing M_n(p,q): the hypothesis stream for test speaker
    ``q`` is sampled from the profile of the training speaker ``p``
    (the recogniser behaves like the speaker it was trained on), and
    phoneme transcripts on both sides are translated through speaker
    ``n``'s map before viseme-level scoring.
    """
    _validate_config(config)
    inventory = config.inventory
    refs = [list(phonemize(config.dictionary, word)[0]) for word in config.vocabulary]
    for speaker in config.speakers:
        for utt in refs:
            for phone in utt:
                if not config.profiles[speaker].covers(phone):
                    raise UncoveredPhonemeError(
                        f"profile for speaker {speaker!r} does not cover phoneme {phone!r}"
                    )

    # Confusion matrices per speaker come from dedicated derivation
    # draws, mirroring the separation of map-building and test folds.
    confusions: dict[str, ConfusionMatrix] = {}
    for n in config.speakers:
        alignments = []
        for fold in range(config.folds):
            hyps = simulate_recognition(
                refs, config.profiles[n], _subseed(config.master_seed, "map", n, fold)
            )
            alignments.extend(align(r, h, HRESULTS_COSTS) for r, h in zip(refs, hyps))
        tally = confusions_from_alignments(
            alignments, labels=inventory.symbols, inventory=inventory
        )
        confusions[n] = tally.matrix

    maps: dict[str, P2VMap] = {}
    needed = set(config.crossings)
    if needed & {"SSD", "DSD", "DSDD"}:
        for n in config.speakers:
            p2v = derive_visemes(confusions[n], inventory, config.cluster_options, speaker=n)
            maps[p2v.designation.render()] = p2v
    if "MS" in needed:
        p2v = derive_multi_speaker(
            [confusions[n] for n in config.speakers], inventory, config.cluster_options
        )
        maps[p2v.designation.render()] = p2v
    if "SI" in needed:
        for q in config.speakers:
            p2v = derive_speaker_independent(
                confusions, q, inventory, config.cluster_options
            )
            maps[p2v.designation.render()] = p2v

    channels: dict[tuple[str, str], list[list[list[str]]]] = {}

    def channel(p: str, q: str) -> list[list[list[str]]]:
        key = (p, q)
        if key not in channels:
            channels[key] = [
                simulate_recognition(
                    refs, config.profiles[p], _subseed(config.master_seed, "score", p, q, fold)
                )
                for fold in range(config.folds)
            ]
        return channels[key]

    results: list[CrossingScores] = []
    for crossing, tag in _expand_crossings(config):
        p2v = maps[tag.source.render()]
        per_fold = []
        for fold_hyps in channel(tag.train_speaker, tag.test_speaker):
            N = D = S = I = 0
            for ref, hyp in zip(refs, fold_hyps):
                ref_v = [p2v.viseme_of(ph) for ph in ref]
                hyp_v = [p2v.viseme_of(ph) for ph in hyp]
                a = align(ref_v, hyp_v, HRESULTS_COSTS)
                N, D, S, I = N + a.N, D + a.D, S + a.S, I + a.I
            C = (N - D - S) / N
            per_fold.append((N, D, S, I, C))
        summary = fold_summary([row[4] for row in per_fold])
        results.append(CrossingScores(crossing=crossing, tag=tag, per_fold=per_fold, summary=summary))

    wilcoxon = None
    ranks = None
    ssd = {
        r.tag.test_speaker: r for r in results if r.crossing == "SSD"
    }
    if "SSD" in needed and len(config.speakers) >= 2:
        series = [(q, ssd[q].summary.values) for q in config.speakers]
        wilcoxon = wilcoxon_matrix(series)
    if {"SSD", "DSD"} <= needed:
        dsd = {
            (r.tag.source.speaker, r.tag.test_speaker): r
            for r in results
            if r.crossing == "DSD"
        }
        cells = []
        for q in config.speakers:
            row = []
            for n in config.speakers:
                if n == q:
                    row.append(0)
                else:
                    row.append(rank_score(ssd[q].summary, dsd[(n, q)].summary))
            cells.append(row)
        ranks = rank_table(
            cells,
            row_labels=config.speakers,
            column_labels=[f"M[{n}]" for n in config.speakers],
        )
    return ExperimentReport(
        config=config,
        confusions=confusions,
        maps=maps,
        crossings=results,
        wilcoxon=wilcoxon,
        ranks=ranks,
    )


def _csv_lines(rows: Sequence[Sequence[object]]) -> str:
    import csv
    import io as _io

    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(list(row))
    return buf.getvalue()


def _safe_name(source: MapSource) -> str:
    if source.kind == "speaker":
        return f"sp_{source.speaker}"
    if source.kind == "all":
        return "all"
    return f"not_{source.speaker}"


def write_report(report: ExperimentReport, outdir: str | Path) -> Path:
    """Write a report directory: manifest, CSVs, maps, and matrices.

    Output is a pure function of the configuration, so regenerating
    into a fresh directory produces byte-identical files.
    """
    outdir = Path(outdir)
    (outdir / "maps").mkdir(parents=True, exist_ok=True)
    (outdir / "confusions").mkdir(parents=True, exist_ok=True)

    config = report.config
    manifest = {
        "master_seed": config.master_seed,
        "folds": config.folds,
        "speakers": config.speakers,
        "crossings": config.crossings,
        "vocabulary_size": len(config.vocabulary),
        "config": config.echo,
    }
    (outdir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    )

    rows: list[Sequence[object]] = [["crossing", "designation", "fold", "N", "D", "S", "I", "C"]]
    for result in report.crossings:
        for fold, (N, D, S, I, C) in enumerate(result.per_fold, start=1):
            rows.append(
                [result.crossing, result.tag.render(), fold, N, D, S, I, f"{C:.6f}"]
            )
    (outdir / "fold_scores.csv").write_text(_csv_lines(rows))

    rows = [["crossing", "designation", "mean", "stderr"]]
    for result in report.crossings:
        rows.append(
            [
                result.crossing,
                result.tag.render(),
                f"{result.summary.mean:.6f}",
                f"{result.summary.stderr:.6f}",
            ]
        )
    (outdir / "summary.csv").write_text(_csv_lines(rows))

    for speaker, cm in report.confusions.items():
        (outdir / "confusions" / f"{speaker}.csv").write_text(format_confusion_csv(cm))

    for rendered, p2v in report.maps.items():
        name = _safe_name(p2v.designation)
        (outdir / "maps" / f"map_{name}.txt").write_text(format_map(p2v))

    if report.wilcoxon is not None:
        labels, p, sig = report.wilcoxon
        rows = [[""] + labels]
        for i, label in enumerate(labels):
            rows.append([label] + [f"{p[i, j]:.3f}" for j in range(len(labels))])
        (outdir / "wilcoxon_p.csv").write_text(_csv_lines(rows))
        rows = [[""] + labels]
        for i, label in enumerate(labels):
            rows.append([label] + [int(sig[i, j]) for j in range(len(labels))])
        (outdir / "wilcoxon_significant.csv").write_text(_csv_lines(rows))

    if report.ranks is not None:
        table = report.ranks
        rows = [[""] + list(table.column_labels)]
        for label, row in zip(table.row_labels, table.cells):
            rows.append([label] + list(row))
        rows.append(["Total"] + list(table.totals))
        (outdir / "ranks.csv").write_text(_csv_lines(rows))

    return outdir
