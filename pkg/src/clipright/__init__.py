"""clipright: embedding-similarity copyright risk metric and
compensation-scheme simulator for AI-generated imagery."""

from .embedstore import EmbeddingRecord, EmbeddingStore, load_store, save_store
from .metric import clip_metric, pairwise_matrix, unit_normalize
from .rulings import (
    CasePair,
    ClassStats,
    DEFAULT_THRESHOLDS,
    MetricSource,
    RulingLabel,
    Thresholds,
    Verdict,
    calibrate,
    class_stats,
    classify,
    evaluate,
    expand_uncontested,
    load_cases,
    metric_for_pair,
)
from .influence import (
    InfluenceMatrix,
    RidgeProblem,
    loo_influence,
    normalize_influence,
    similarity_influence,
    uniform_influence,
)
from .schemes import (
    AIRoyaltyParams,
    CompensationReport,
    OutputRecord,
    PayToTrainParams,
    Rightsholder,
    WindfallParams,
    ai_royalties,
    clause_rate_for_profit,
    pay_to_train,
    pay_to_train_and_inspire,
    windfall,
    windfall_per_worker,
)
from .scenario import load_scenario, run_comparison, run_scenario

__version__ = "0.1.0"
