"""Classifiers, stratified cross-validation and repeated accuracy runs."""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .data import Dataset, fit_scaler
from .stats import summary_stats

CLASSIFIERS = ("knn", "linear_svm")
WORKERS_ENV = "CROWDFS_WORKERS"
DEFAULT_SEED = 20210101

_MASK64 = (1 << 64) - 1


def split_seed(seed: int, index: int) -> int:
    """Derive an independent 64-bit seed for stream ``index`` of ``seed``.

    SplitMix64 finalizer applied to ``seed + (index + 1) * 0x9E3779B97F4A7C15``
    (mod 2**64).
    """
    z = (int(seed) + (int(index) + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def worker_count(default: int = 1) -> int:
    raw = os.environ.get(WORKERS_ENV)
    if not raw:
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class ClassifierConfig:
    kind: str = "knn"
    knn_k: int = 5
    svm_lambda: float = 1e-3
    svm_epochs: int = 50

    def __post_init__(self):
        if self.kind not in CLASSIFIERS:
            raise ValueError(f"unknown classifier {self.kind!r}; choose from {', '.join(CLASSIFIERS)}")
        if self.knn_k < 1 or self.knn_k % 2 == 0:
            raise ValueError("knn_k must be a positive odd integer")
        if not self.svm_lambda > 0:
            raise ValueError("svm_lambda must be positive")
        if self.svm_epochs < 1:
            raise ValueError("svm_epochs must be a positive integer")

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "knn_k": self.knn_k,
            "svm_lambda": self.svm_lambda,
            "svm_epochs": self.svm_epochs,
        }


@dataclass(frozen=True)
class EvalConfig:
    folds: int = 5
    repetitions: int = 30
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.folds < 2:
            raise ValueError("folds must be at least 2")
        if self.repetitions < 1:
            raise ValueError("repetitions must be positive")
        if not 0 <= self.seed <= _MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class EvalReport:
    mean: float
    std: float
    worst: float
    best: float
    per_run: tuple[float, ...]
    runtime: float = field(default=0.0, compare=False)

    @classmethod
    def from_runs(cls, per_run: Sequence[float], runtime: float = 0.0) -> "EvalReport":
        s = summary_stats(per_run)
        return cls(s.mean, s.std, s.worst, s.best, tuple(float(v) for v in per_run), runtime)

    def as_dict(self) -> dict:
        return {
            "mean": self.mean,
            "std": self.std,
            "worst": self.worst,
            "best": self.best,
            "per_run": list(self.per_run),
        }


def stratified_folds(labels: Sequence[int], folds: int, seed: int) -> np.ndarray:
    """Assign every sample to one of ``folds`` folds, stratified by class.

    Classes are visited in ascending label order; each class's members are
    shuffled with a seeded generator and dealt round-robin, continuing from the
    fold where the previous class stopped so fold sizes stay balanced.
    """
    y = np.asarray(labels, dtype=np.int64)
    if folds < 2:
        raise ValueError("folds must be at least 2")
    classes, counts = np.unique(y, return_counts=True)
    small = classes[counts < folds]
    if small.size:
        raise ValueError(
            f"class {int(small[0])} has {int(counts[counts < folds][0])} samples, fewer than {folds} folds"
        )
    rng = np.random.default_rng(seed)
    assign = np.empty(len(y), dtype=np.int64)
    start = 0
    for c in classes:
        members = rng.permutation(np.flatnonzero(y == c))
        assign[members] = (start + np.arange(len(members))) % folds
        start = (start + len(members)) % folds
    return assign


def _squared_distances(query: np.ndarray, train: np.ndarray) -> np.ndarray:
    # direct differences rather than the |a|^2 - 2ab + |b|^2 expansion so exact
    # ties stay exact
    d = query[:, None, :] - train[None, :, :]
    return np.einsum("qtf,qtf->qt", d, d)


def knn_predict(train_X: np.ndarray, train_y: np.ndarray, query: np.ndarray, k: int) -> np.ndarray:
    """Vectorized :func:`classify_knn` over a batch of query rows."""
    train_X = np.atleast_2d(np.asarray(train_X, dtype=np.float64))
    train_y = np.asarray(train_y, dtype=np.int64)
    query = np.atleast_2d(np.asarray(query, dtype=np.float64))
    if k > len(train_y):
        raise ValueError(f"k={k} exceeds training size {len(train_y)}")
    dist = _squared_distances(query, train_X)
    # k nearest per query; among rows tied with the k-th distance, the lowest
    # indices fill the remaining slots (same set as a stable sort)
    kth = np.partition(dist, k - 1, axis=1)[:, k - 1 : k]
    closer = dist < kth
    tied = dist == kth
    room = k - closer.sum(axis=1, keepdims=True)
    nearest = closer | (tied & (np.cumsum(tied, axis=1) <= room))
    onehot = np.eye(int(train_y.max()) + 1, dtype=np.int64)[train_y]
    tally = nearest.astype(np.int64) @ onehot
    # argmax returns the first maximum: vote ties go to the smallest label
    return tally.argmax(axis=1)


def classify_knn(train_X, train_y, query, k: int) -> int:
    """Majority label among the ``k`` nearest training rows (Euclidean).

    Distance ties go to the lower training-row index, vote ties to the smaller
    label.
    """
    return int(knn_predict(train_X, train_y, np.asarray(query, dtype=np.float64)[None, :], k)[0])


@dataclass(frozen=True)
class LinearSVM:
    """One weight row per binary problem; bias is the last column."""

    weights: np.ndarray
    classes: np.ndarray

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        return X @ self.weights[:, :-1].T + self.weights[:, -1]

    def predict(self, X: np.ndarray) -> np.ndarray:
        scores = self.decision_function(X)
        if len(self.classes) == 2:
            return np.where(scores[:, 0] >= 0, self.classes[1], self.classes[0])
        return self.classes[scores.argmax(axis=1)]


def _pegasos(Xb: np.ndarray, target: np.ndarray, lam: float, epochs: int, rng) -> np.ndarray:
    m, d = Xb.shape
    w = np.zeros(d)
    radius = 1.0 / np.sqrt(lam)
    t = 0
    for _ in range(epochs):
        for i in rng.permutation(m):
            t += 1
            eta = 1.0 / (lam * t)
            margin = target[i] * (w @ Xb[i])
            w *= 1.0 - eta * lam
            if margin < 1.0:
                w += eta * target[i] * Xb[i]
            norm = np.sqrt(w @ w)
            if norm > radius:
                w *= radius / norm
    return w


def train_linear_svm(train_X, train_y, config: ClassifierConfig, seed: int) -> LinearSVM:
    """Hinge-loss SVM trained by stochastic subgradient steps (Pegasos).

    The bias is a constant input column and is regularized with the weights.
    Two classes give one model; more classes are handled one-vs-rest.
    """
    X = np.atleast_2d(np.asarray(train_X, dtype=np.float64))
    y = np.asarray(train_y, dtype=np.int64)
    classes = np.unique(y)
    if len(classes) < 2:
        raise ValueError("linear SVM needs at least two classes in the training data")
    Xb = np.hstack([X, np.ones((len(X), 1))])
    positives = classes[1:] if len(classes) == 2 else classes
    rows = []
    for j, c in enumerate(positives):
        rng = np.random.default_rng(split_seed(seed, j))
        target = np.where(y == c, 1.0, -1.0)
        rows.append(_pegasos(Xb, target, config.svm_lambda, config.svm_epochs, rng))
    return LinearSVM(np.vstack(rows), classes)


def _fit_predict(train_X, train_y, test_X, classifier: ClassifierConfig, seed: int) -> np.ndarray:
    if classifier.kind == "knn":
        return knn_predict(train_X, train_y, test_X, classifier.knn_k)
    return train_linear_svm(train_X, train_y, classifier, seed).predict(test_X)


def cv_accuracy(
    dataset: Dataset,
    subset: Sequence[int],
    classifier: ClassifierConfig,
    fold_assignment: Sequence[int],
    seed: int = 0,
) -> float:
    """Cross-validated accuracy (percent) of ``classifier`` on ``subset``.

    For every fold the scaler and classifier see only that fold's training
    rows. ``seed`` drives classifier internals (SVM shuffling); k-NN ignores it.
    """
    cols = np.asarray(list(subset), dtype=np.int64)
    if cols.size == 0:
        raise ValueError("cannot evaluate an empty feature subset")
    if cols.min() < 0 or cols.max() >= dataset.n_features:
        raise IndexError("feature index out of range")
    folds = np.asarray(fold_assignment, dtype=np.int64)
    if folds.shape != (dataset.n_samples,):
        raise ValueError("fold assignment must have one entry per sample")
    X = dataset.features[:, cols]
    y = dataset.labels
    correct = 0
    for f in np.unique(folds):
        test = folds == f
        train_idx = np.flatnonzero(~test)
        scaler = fit_scaler(X, train_idx)
        pred = _fit_predict(
            scaler.transform(X[train_idx]),
            y[train_idx],
            scaler.transform(X[test]),
            classifier,
            split_seed(seed, int(f)),
        )
        correct += int(np.sum(pred == y[test]))
    return 100.0 * correct / dataset.n_samples


def _map_ordered(fn, items, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def repeated_eval(
    dataset: Dataset,
    subset: Sequence[int],
    classifier: ClassifierConfig,
    eval_config: EvalConfig,
    workers: int | None = None,
) -> EvalReport:
    """Run ``eval_config.repetitions`` seeded cross-validations of ``subset``.

    Repetition ``r`` draws fresh folds from ``split_seed(seed, r)``; results are
    collected in repetition order regardless of ``workers``.
    """
    if workers is None:
        workers = worker_count()
    subset = list(subset)
    t0 = time.perf_counter()

    def run(r: int) -> float:
        s = split_seed(eval_config.seed, r)
        folds = stratified_folds(dataset.labels, eval_config.folds, s)
        return cv_accuracy(dataset, subset, classifier, folds, seed=s)

    per_run = _map_ordered(run, range(eval_config.repetitions), workers)
    return EvalReport.from_runs(per_run, time.perf_counter() - t0)
