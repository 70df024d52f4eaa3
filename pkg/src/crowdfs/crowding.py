"""Crowding distance of features, with samples acting as objectives.

Each sample row is one "objective": features are sorted by their value on that
row, the two extreme features are boundary points and every interior feature
collects the normalized gap between its two sorted neighbours. Per-row
contributions are summed over rows.

Boundary points carry an infinite distance in NSGA-II. Summing infinities over
rows would make every feature that was ever extreme incomparable, so a
:class:`CrowdingScore` keeps the number of boundary hits separately and orders
scores lexicographically by ``(boundary_count, finite_sum)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .data import Dataset


@dataclass(frozen=True, order=True)
class CrowdingScore:
    boundary_count: int
    finite_sum: float

    def as_dict(self) -> dict:
        return {"boundary_count": self.boundary_count, "finite_sum": self.finite_sum}


@dataclass(frozen=True)
class FeatureRanking:
    """Feature indices ordered from most to least preferred.

    ``scores`` stays aligned with the original feature indices, not with
    ``order``.
    """

    order: tuple[int, ...]
    scores: tuple[Any, ...]
    method: str = "crowding"

    def __post_init__(self):
        if sorted(self.order) != list(range(len(self.scores))):
            raise ValueError("order must be a permutation of the feature indices")

    def __len__(self):
        return len(self.order)

    def top(self, k: int) -> tuple[int, ...]:
        return self.order[:k]


def _as_matrix(data) -> np.ndarray:
    X = data.features if isinstance(data, Dataset) else np.asarray(data, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("expected a 2-D samples x features matrix")
    return X


def crowding_contributions(data) -> tuple[np.ndarray, np.ndarray]:
    """Per-row crowding contributions.

    Returns ``(boundary, gaps)``, both shaped like the input: ``boundary[r, j]``
    is 1 when feature ``j`` is an extreme of row ``r`` and ``gaps[r, j]`` is its
    normalized neighbour gap on that row (0 for extremes). Rows with zero range
    are all zeros.
    """
    X = _as_matrix(data)
    m, n = X.shape
    if n < 2:
        raise ValueError(f"crowding distance needs at least 2 features, got {n}")
    order = np.argsort(X, axis=1, kind="stable")
    srt = np.take_along_axis(X, order, axis=1)
    lo, hi = srt[:, 0], srt[:, -1]
    span = hi - lo
    live = span > 0

    rows = np.arange(m)[:, None]
    boundary = np.zeros((m, n), dtype=np.int64)
    boundary[rows, order[:, [0, -1]]] = 1
    boundary[~live] = 0

    gaps = np.zeros((m, n), dtype=np.float64)
    if n > 2:
        safe = np.where(live, span, 1.0)[:, None]
        gaps[rows, order[:, 1:-1]] = (srt[:, 2:] - srt[:, :-2]) / safe
        gaps[~live] = 0.0
    return boundary, gaps


def crowding_scores(data) -> list[CrowdingScore]:
    """Crowding score of every feature of ``data`` (Dataset or matrix)."""
    boundary, gaps = crowding_contributions(data)
    counts = boundary.sum(axis=0)
    # explicit row loop: the sum runs over rows 0..m-1 in order, whatever
    # reduction strategy numpy would pick
    total = np.zeros(gaps.shape[1], dtype=np.float64)
    for row in gaps:
        total += row
    return [CrowdingScore(int(c), float(s)) for c, s in zip(counts, total)]


def rank_descending(scores: Sequence[Any], method: str = "crowding") -> FeatureRanking:
    """Sort feature indices by descending score, ties by ascending index."""
    scores = tuple(scores)
    if not scores:
        raise ValueError("cannot rank an empty score list")
    # sorted() keeps equal keys in input order even with reverse=True
    order = sorted(range(len(scores)), key=scores.__getitem__, reverse=True)
    return FeatureRanking(tuple(order), scores, method)


def crowding_ranking(data) -> FeatureRanking:
    return rank_descending(crowding_scores(data), "crowding")
