"""visemekit: derive and analyse phoneme-to-viseme maps.

The package turns phoneme confusion matrices into viseme classes,
applies the resulting maps to transcripts, measures homophene effects,
scores recognition output over cross-validation folds, compares
speakers with exact signed-rank tests and weighted ranking tables, and
ships a seeded synthetic recogniser for end-to-end runs.
"""

__version__ = "0.1.0"

from .core import (
    CONSONANT,
    GAR_CLASS,
    SHORT_PAUSE,
    SIL_CLASS,
    SILENCE,
    SP_CLASS,
    VOWEL,
    ConfusionMatrix,
    ExperimentTag,
    MapSource,
    P2VMap,
    PhonemeInventory,
    PhonemeLabel,
    ValidationReport,
    confusion,
    merge_matrices,
    validate_map,
)
from .dictionary import (
    PronunciationDictionary,
    parse_dictionary,
    phonemize,
    serialize_dictionary,
)
from .clustering import (
    ClusterOptions,
    derive_multi_speaker,
    derive_speaker_independent,
    derive_visemes,
)
from .transcription import (
    HomopheneStats,
    homophene_profile,
    homophene_stats,
    word_to_viseme_strings,
)
from .scoring import (
    HRESULTS_COSTS,
    UNIT_COSTS,
    AlignmentCosts,
    AlignmentResult,
    ConfusionTally,
    FoldScores,
    align,
    confusions_from_alignments,
    correctness,
    fold_summary,
    word_accuracy,
)
from .stats import (
    RankTable,
    WilcoxonResult,
    rank_score,
    rank_table,
    wilcoxon_exact,
    wilcoxon_matrix,
)
from .simulator import (
    ConfusionProfile,
    ExperimentConfig,
    ExperimentReport,
    PhonemeOutcomes,
    load_experiment_config,
    run_experiment,
    simulate_recognition,
    write_report,
)
from . import errors, io

__all__ = [
    "__version__",
    "CONSONANT",
    "GAR_CLASS",
    "SHORT_PAUSE",
    "SIL_CLASS",
    "SILENCE",
    "SP_CLASS",
    "VOWEL",
    "ConfusionMatrix",
    "ExperimentTag",
    "MapSource",
    "P2VMap",
    "PhonemeInventory",
    "PhonemeLabel",
    "ValidationReport",
    "confusion",
    "merge_matrices",
    "validate_map",
    "PronunciationDictionary",
    "parse_dictionary",
    "phonemize",
    "serialize_dictionary",
    "ClusterOptions",
    "derive_multi_speaker",
    "derive_speaker_independent",
    "derive_visemes",
    "HomopheneStats",
    "homophene_profile",
    "homophene_stats",
    "word_to_viseme_strings",
    "HRESULTS_COSTS",
    "UNIT_COSTS",
    "AlignmentCosts",
    "AlignmentResult",
    "ConfusionTally",
    "FoldScores",
    "align",
    "confusions_from_alignments",
    "correctness",
    "fold_summary",
    "word_accuracy",
    "RankTable",
    "WilcoxonResult",
    "rank_score",
    "rank_table",
    "wilcoxon_exact",
    "wilcoxon_matrix",
    "ConfusionProfile",
    "ExperimentConfig",
    "ExperimentReport",
    "PhonemeOutcomes",
    "load_experiment_config",
    "run_experiment",
    "simulate_recognition",
    "write_report",
    "errors",
    "io",
]
