"""Baseline filter scores: absolute Pearson correlation, variance and ReliefF."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .crowding import FeatureRanking, crowding_scores, rank_descending
from .data import Dataset

METHODS = ("crowding", "pearson", "relieff", "variance")
DEFAULT_RELIEFF_NEIGHBORS = 10


@dataclass(frozen=True, eq=False)
class ScoreVector:
    """Per-feature scores, higher is better."""

    values: np.ndarray
    method: str

    def __len__(self):
        return len(self.values)


def pearson_scores(dataset: Dataset) -> ScoreVector:
    """|r| between each feature and the encoded label, population moments.

    A constant feature scores 0.
    """
    X = dataset.features
    y = dataset.labels.astype(np.float64)
    xc = X - X.mean(axis=0)
    yc = y - y.mean()
    cov = (xc * yc[:, None]).mean(axis=0)
    sx = np.sqrt((xc**2).mean(axis=0))
    sy = np.sqrt((yc**2).mean())
    # constant columns leave rounding residue in xc, so test them exactly
    live = _non_constant(X) & (sx > 0)
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(live, cov / (sx * sy), 0.0)
    return ScoreVector(np.minimum(np.abs(r), 1.0), "pearson")


def variance_scores(dataset: Dataset) -> ScoreVector:
    """Population variance of each feature column; exactly 0 for constant columns."""
    X = dataset.features
    return ScoreVector(np.where(_non_constant(X), X.var(axis=0), 0.0), "variance")


def _non_constant(X: np.ndarray) -> np.ndarray:
    return X.max(axis=0) > X.min(axis=0)


def feasible_relieff_neighbors(dataset: Dataset, requested: int = DEFAULT_RELIEFF_NEIGHBORS) -> int:
    """Clamp ``requested`` so every class can supply that many hits."""
    return max(1, min(requested, int(dataset.class_counts().min()) - 1))


def _range_normalized(X: np.ndarray) -> np.ndarray:
    span = X.max(axis=0) - X.min(axis=0)
    out = np.zeros_like(X)
    nz = span > 0
    out[:, nz] = (X[:, nz] - X[:, nz].min(axis=0)) / span[nz]
    return out


def relieff_scores(dataset: Dataset, k_neighbors: int = DEFAULT_RELIEFF_NEIGHBORS) -> ScoreVector:
    """ReliefF weights over all instances.

    For every instance R the ``k_neighbors`` nearest hits and, for each other
    class C, the ``k_neighbors`` nearest misses from C are found under the
    Manhattan distance on range-normalized features. Neighbour ties go to the
    lower row index. The weight update is

        W += sum_C [P(C) / (1 - P(class(R)))] * mean miss diff_C - mean hit diff

    averaged over instances, with diff the range-normalized absolute difference.
    """
    if k_neighbors < 1:
        raise ValueError("k_neighbors must be positive")
    y = dataset.labels
    counts = dataset.class_counts()
    for c, cnt in enumerate(counts):
        if cnt < k_neighbors + 1:
            raise ValueError(
                f"class {dataset.label_names[c]!r} has {cnt} samples; ReliefF with "
                f"k_neighbors={k_neighbors} needs at least {k_neighbors + 1}"
            )
    Z = _range_normalized(dataset.features)
    m, n = Z.shape
    prior = counts / m
    members = [np.flatnonzero(y == c) for c in range(len(counts))]

    weights = np.zeros(n)
    for i in range(m):
        diff = np.abs(Z - Z[i])
        dist = diff.sum(axis=1)
        ci = y[i]
        update = np.zeros(n)
        for c, idx in enumerate(members):
            if c == ci:
                idx = idx[idx != i]
            near = idx[np.argsort(dist[idx], kind="stable")[:k_neighbors]]
            mean_diff = diff[near].mean(axis=0)
            if c == ci:
                update -= mean_diff
            else:
                update += prior[c] / (1.0 - prior[ci]) * mean_diff
        weights += update
    return ScoreVector(weights / m, "relieff")


def score_features(dataset: Dataset, method: str, k_neighbors: int | None = None):
    """Raw per-feature scores for ``method`` (crowding scores or a float array)."""
    if method == "crowding":
        return crowding_scores(dataset)
    if method == "pearson":
        return pearson_scores(dataset).values
    if method == "variance":
        return variance_scores(dataset).values
    if method == "relieff":
        k = k_neighbors if k_neighbors is not None else feasible_relieff_neighbors(dataset)
        return relieff_scores(dataset, k).values
    raise ValueError(f"unknown ranking method {method!r}; choose from {', '.join(METHODS)}")


def rank_features(dataset: Dataset, method: str = "crowding", k_neighbors: int | None = None) -> FeatureRanking:
    scores = score_features(dataset, method, k_neighbors)
    return rank_descending([float(s) for s in scores] if method != "crowding" else scores, method)
