"""Top-k filter selection and greedy wrapper selection over a feature ranking."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import NamedTuple

from .crowding import FeatureRanking
from .data import Dataset
from .evaluation import (
    ClassifierConfig,
    EvalConfig,
    EvalReport,
    _map_ordered,
    cv_accuracy,
    split_seed,
    stratified_folds,
    worker_count,
)


class Step(NamedTuple):
    feature: int
    fitness: float
    accepted: bool


@dataclass(frozen=True)
class SelectionResult:
    selected: tuple[int, ...]
    method: str  # "filter" or "wrapper"
    ranking_method: str
    best_accuracy: float | None = None
    trace: tuple[Step, ...] = ()

    def as_dict(self) -> dict:
        out = {
            "selected": list(self.selected),
            "n_selected": len(self.selected),
            "mode": self.method,
            "ranking_method": self.ranking_method,
        }
        if self.method == "wrapper":
            out["best_accuracy"] = self.best_accuracy
            out["trace"] = [
                {"feature": s.feature, "fitness": s.fitness, "accepted": s.accepted}
                for s in self.trace
            ]
        return out


def filter_select(ranking: FeatureRanking, k: int) -> SelectionResult:
    """The ``k`` highest-ranked features, in ranking order."""
    if not 1 <= k <= len(ranking):
        raise ValueError(f"k must be between 1 and {len(ranking)}, got {k}")
    return SelectionResult(tuple(ranking.order[:k]), "filter", ranking.method)


def wrapper_select(
    dataset: Dataset,
    ranking: FeatureRanking,
    classifier: ClassifierConfig,
    folds: int,
    seed: int,
    accuracy_threshold: float | None = None,
) -> SelectionResult:
    """Greedy forward pass over ``ranking``.

    Each feature is added tentatively and kept only when the cross-validated
    accuracy strictly beats the best so far (which starts at 0). One fold split,
    drawn from ``seed``, is shared by every step. The loop stops early once the
    best accuracy reaches ``accuracy_threshold``.
    """
    if accuracy_threshold is not None and not 0 < accuracy_threshold <= 100:
        raise ValueError("accuracy_threshold must lie in (0, 100]")
    if len(ranking) != dataset.n_features:
        raise ValueError("ranking does not match the dataset's feature count")
    fold_assignment = stratified_folds(dataset.labels, folds, seed)

    selected: list[int] = []
    best = 0.0
    trace: list[Step] = []
    for feature in ranking.order:
        fitness = cv_accuracy(dataset, selected + [feature], classifier, fold_assignment, seed=seed)
        accepted = fitness > best
        if accepted:
            selected.append(feature)
            best = fitness
        trace.append(Step(feature, fitness, accepted))
        if accuracy_threshold is not None and best >= accuracy_threshold:
            break
    if not selected:
        raise ValueError("no feature reached a positive cross-validated accuracy")
    return SelectionResult(tuple(selected), "wrapper", ranking.method, best, tuple(trace))


class WrapperRuns(NamedTuple):
    """Repeated wrapper runs, one :class:`SelectionResult` per repetition."""

    runs: tuple[SelectionResult, ...]
    report: EvalReport

    @property
    def best_run(self) -> SelectionResult:
        # first repetition wins ties
        return max(self.runs, key=lambda r: r.best_accuracy)


def repeated_wrapper(
    dataset: Dataset,
    ranking: FeatureRanking,
    classifier: ClassifierConfig,
    eval_config: EvalConfig,
    accuracy_threshold: float | None = None,
    workers: int | None = None,
) -> WrapperRuns:
    """Rerun :func:`wrapper_select` with a derived seed per repetition."""
    if workers is None:
        workers = worker_count()
    t0 = time.perf_counter()

    def run(r: int) -> SelectionResult:
        return wrapper_select(
            dataset,
            ranking,
            classifier,
            eval_config.folds,
            split_seed(eval_config.seed, r),
            accuracy_threshold,
        )

    runs = tuple(_map_ordered(run, range(eval_config.repetitions), workers))
    report = EvalReport.from_runs([r.best_accuracy for r in runs], time.perf_counter() - t0)
    return WrapperRuns(runs, report)
