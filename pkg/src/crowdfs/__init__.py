"""Feature ranking by crowding distance, with filter and greedy wrapper selection."""

__version__ = "0.1.0"

from .crowding import CrowdingScore, FeatureRanking, crowding_ranking, crowding_scores, rank_descending
from .data import Dataset, DatasetError, Scaler, fit_scaler, load_csv, write_csv
from .evaluation import (
    ClassifierConfig,
    EvalConfig,
    EvalReport,
    classify_knn,
    cv_accuracy,
    repeated_eval,
    split_seed,
    stratified_folds,
    train_linear_svm,
)
from .rankers import ScoreVector, pearson_scores, rank_features, relieff_scores, variance_scores
from .selection import SelectionResult, filter_select, repeated_wrapper, wrapper_select
from .stats import TestOutcome, summary_stats, wilcoxon_rank_sum

__all__ = [
    "ClassifierConfig",
    "CrowdingScore",
    "Dataset",
    "DatasetError",
    "EvalConfig",
    "EvalReport",
    "FeatureRanking",
    "Scaler",
    "ScoreVector",
    "SelectionResult",
    "TestOutcome",
    "classify_knn",
    "crowding_ranking",
    "crowding_scores",
    "cv_accuracy",
    "filter_select",
    "fit_scaler",
    "load_csv",
    "pearson_scores",
    "rank_descending",
    "rank_features",
    "relieff_scores",
    "repeated_eval",
    "repeated_wrapper",
    "split_seed",
    "stratified_folds",
    "summary_stats",
    "train_linear_svm",
    "variance_scores",
    "wilcoxon_rank_sum",
    "wrapper_select",
    "write_csv",
]
