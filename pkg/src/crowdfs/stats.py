"""Run summaries and the two-sided Wilcoxon rank-sum (Mann-Whitney U) test."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

EXACT_MAX_SIZE = 12
ALPHA = 0.05


class Summary(NamedTuple):
    mean: float
    std: float
    worst: float
    best: float


def summary_stats(values: Sequence[float]) -> Summary:
    """Mean, sample standard deviation (n - 1), minimum and maximum."""
    xs = [float(v) for v in values]
    if not xs:
        raise ValueError("summary_stats needs at least one value")
    n = len(xs)
    mean = math.fsum(xs) / n
    std = math.sqrt(math.fsum((x - mean) ** 2 for x in xs) / (n - 1)) if n > 1 else 0.0
    return Summary(mean, std, min(xs), max(xs))


@dataclass(frozen=True)
class TestOutcome:
    statistic: float  # U for the first sample
    p_value: float
    method: str  # "exact" or "normal-approximation"
    n_a: int
    n_b: int

    __test__ = False  # not a pytest class

    @property
    def u_b(self) -> float:
        return self.n_a * self.n_b - self.statistic

    @property
    def significant_at_005(self) -> bool:
        return self.p_value < ALPHA

    def as_dict(self) -> dict:
        return {
            "U": self.statistic,
            "p_value": self.p_value,
            "method": self.method,
            "significant_at_0.05": self.significant_at_005,
        }


def midranks(values: Sequence[float]) -> list[float]:
    """1-based ranks; tied values share the mean of their positions."""
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        r = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = r
        i = j + 1
    return ranks


def u_distribution(n_a: int, n_b: int) -> list[int]:
    """Number of rank arrangements giving U = 0..n_a*n_b (no ties)."""
    # counts[i][j] is the distribution for sizes (i, j), built up column by column
    prev = [[1] for _ in range(n_a + 1)]  # j = 0: only U = 0
    for j in range(1, n_b + 1):
        cur = [[1]]  # i = 0
        for i in range(1, n_a + 1):
            size = i * j + 1
            dist = [0] * size
            # last element belongs to sample a: it beats all j b-values
            for u, c in enumerate(cur[i - 1]):
                dist[u + j] += c
            # last element belongs to sample b
            for u, c in enumerate(prev[i]):
                dist[u] += c
            cur.append(dist)
        prev = cur
    return prev[n_a]


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def wilcoxon_rank_sum(a: Sequence[float], b: Sequence[float]) -> TestOutcome:
    """Two-sided rank-sum test of ``a`` against ``b``.

    Exact when both samples have at most 12 values and there are no ties,
    otherwise the normal approximation with tie and continuity corrections.
    """
    a = [float(v) for v in a]
    b = [float(v) for v in b]
    n_a, n_b = len(a), len(b)
    if n_a == 0 or n_b == 0:
        raise ValueError("both samples must be nonempty")
    pooled = a + b
    ranks = midranks(pooled)
    u_a = math.fsum(ranks[:n_a]) - n_a * (n_a + 1) / 2.0
    ties = len(set(pooled)) < len(pooled)

    if n_a <= EXACT_MAX_SIZE and n_b <= EXACT_MAX_SIZE and not ties:
        dist = u_distribution(n_a, n_b)
        u = int(round(u_a))
        total = sum(dist)
        tail = min(sum(dist[: u + 1]), sum(dist[u:]))
        p = min(1.0, 2 * tail / total)
        return TestOutcome(u_a, p, "exact", n_a, n_b)

    N = n_a + n_b
    counts: dict[float, int] = {}
    for v in pooled:
        counts[v] = counts.get(v, 0) + 1
    tie_term = sum(t**3 - t for t in counts.values())
    var = n_a * n_b / 12.0 * ((N + 1) - tie_term / (N * (N - 1)))
    if var <= 0:
        return TestOutcome(u_a, 1.0, "normal-approximation", n_a, n_b)
    dev = max(abs(u_a - n_a * n_b / 2.0) - 0.5, 0.0)
    p = 2.0 * _normal_sf(dev / math.sqrt(var))
    return TestOutcome(u_a, min(1.0, max(0.0, p)), "normal-approximation", n_a, n_b)
