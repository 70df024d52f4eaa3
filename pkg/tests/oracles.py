"""Slow, independent reference implementations used only by the tests.

Plain Python loops over lists; nothing here imports the package's numeric code.
"""

import itertools
import math


def naive_crowding(rows):
    """Crowding (boundary_count, finite_sum) per feature, one sample row at a time."""
    n = len(rows[0])
    counts = [0] * n
    sums = [0.0] * n
    for row in rows:
        idx = sorted(range(n), key=lambda j: (row[j], j))
        lo, hi = row[idx[0]], row[idx[-1]]
        if hi == lo:
            continue
        counts[idx[0]] += 1
        counts[idx[-1]] += 1
        for i in range(1, n - 1):
            sums[idx[i]] += (row[idx[i + 1]] - row[idx[i - 1]]) / (hi - lo)
    return list(zip(counts, sums))


def naive_relieff(X, y, k):
    m, n = len(X), len(X[0])
    lo = [min(X[i][j] for i in range(m)) for j in range(n)]
    hi = [max(X[i][j] for i in range(m)) for j in range(n)]

    def diff(j, a, b):
        if hi[j] == lo[j]:
            return 0.0
        return abs(X[a][j] - X[b][j]) / (hi[j] - lo[j])

    def dist(a, b):
        return sum(diff(j, a, b) for j in range(n))

    classes = sorted(set(y))
    prior = {c: y.count(c) / m for c in classes}
    w = [0.0] * n
    for i in range(m):
        for c in classes:
            cand = [r for r in range(m) if y[r] == c and r != i]
            cand.sort(key=lambda r: (dist(i, r), r))
            near = cand[:k]
            for j in range(n):
                md = sum(diff(j, i, r) for r in near) / k
                if c == y[i]:
                    w[j] -= md
                else:
                    w[j] += prior[c] / (1 - prior[y[i]]) * md
    return [v / m for v in w]


def brute_knn_cv(X, y, folds, k):
    """Accuracy (percent) of min-max scaled k-NN under a given fold assignment."""
    m, n = len(X), len(X[0])
    correct = 0
    for f in sorted(set(folds)):
        train = [i for i in range(m) if folds[i] != f]
        test = [i for i in range(m) if folds[i] == f]
        lo = [min(X[i][j] for i in train) for j in range(n)]
        hi = [max(X[i][j] for i in train) for j in range(n)]

        def s(i, j):
            return 0.0 if hi[j] == lo[j] else (X[i][j] - lo[j]) / (hi[j] - lo[j])

        for q in test:
            d = sorted(train, key=lambda t: (sum((s(q, j) - s(t, j)) ** 2 for j in range(n)), t))
            votes = [y[t] for t in d[:k]]
            best = max(sorted(set(votes)), key=votes.count)
            correct += best == y[q]
    return 100.0 * correct / m


def enumerate_u(a, b):
    """Two-sided exact p of U_a by enumerating every split of the pooled ranks."""
    n_a, n_b = len(a), len(b)
    pooled = sorted(a + b)
    ranks = {v: i + 1 for i, v in enumerate(pooled)}
    u_obs = sum(ranks[v] for v in a) - n_a * (n_a + 1) / 2
    le = ge = total = 0
    for combo in itertools.combinations(range(1, n_a + n_b + 1), n_a):
        u = sum(combo) - n_a * (n_a + 1) / 2
        total += 1
        le += u <= u_obs
        ge += u >= u_obs
    return u_obs, min(1.0, 2 * min(le, ge) / total)


def sample_std(xs):
    mu = sum(xs) / len(xs)
    return math.sqrt(sum((x - mu) ** 2 for x in xs) / (len(xs) - 1))
