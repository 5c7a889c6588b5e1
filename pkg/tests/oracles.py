"""Brute-force oracles, kept deliberately independent of the implementations.

Each oracle recomputes its quantity from the definition (explicit scans,
exact rational arithmetic, pairwise enumeration) rather than reusing any
package code path, so the tests are genuine dual-route checks.
"""

from __future__ import annotations

import math
from fractions import Fraction


def km_oracle(observations):
    """Product-limit by definition: per event time, full rescans of the data.

    observations: list of (time, event) tuples.
    Returns (event_times, survival, at_risk, events, greenwood_se).
    """
    event_times = sorted({t for t, e in observations if e})
    survival, at_risk, events, se = [], [], [], []
    for t in event_times:
        n_t = sum(1 for time, _ in observations if time >= t)
        d_t = sum(1 for time, e in observations if e and time == t)
        at_risk.append(n_t)
        events.append(d_t)
        s = 1.0
        gw = 0.0
        for u in event_times:
            if u > t:
                break
            n_u = sum(1 for time, _ in observations if time >= u)
            d_u = sum(1 for time, e in observations if e and time == u)
            s *= 1.0 - d_u / n_u
            if n_u > d_u:
                gw += d_u / (n_u * (n_u - d_u))
        survival.append(s)
        se.append(s * math.sqrt(gw))
    return event_times, survival, at_risk, events, se


def bh_oracle(p_values):
    """q_(i) = min over j >= i of p_(j) * m / j, returned in input order."""
    m = len(p_values)
    order = sorted(range(m), key=lambda i: p_values[i])
    q = [0.0] * m
    for rank_i in range(1, m + 1):
        candidates = [
            p_values[order[rank_j - 1]] * m / rank_j for rank_j in range(rank_i, m + 1)
        ]
        q[order[rank_i - 1]] = min(1.0, min(candidates))
    return q


def hypergeom_oracle(k, N, K, n):
    """P(X >= k) by exact rational summation of the pmf."""
    lo = max(k, max(0, n + K - N))
    hi = min(K, n)
    if k <= max(0, n + K - N):
        return 1.0
    if k > hi:
        return 0.0
    total = Fraction(0)
    denom = math.comb(N, n)
    for i in range(lo, hi + 1):
        total += Fraction(math.comb(K, i) * math.comb(N - K, n - i), denom)
    return float(total)


def auc_oracle(is_positive, scores):
    """Fraction of (positive, negative) pairs ranked correctly, ties 1/2."""
    pos = [s for f, s in zip(is_positive, scores) if f]
    neg = [s for f, s in zip(is_positive, scores) if not f]
    total = 0.0
    for p in pos:
        for q in neg:
            if p > q:
                total += 1.0
            elif p == q:
                total += 0.5
    return total / (len(pos) * len(neg))


def weighted_gini_oracle(columns, kinds, y, min_samples_leaf):
    """Minimal weighted Gini over every enumerable root split.

    columns: list of feature columns (list per feature); kinds: "numeric" or
    "categorical" per feature; y: 0/1 labels. Returns None when no split is
    valid, else the minimal weighted Gini value.
    """

    def gini(labels):
        n = len(labels)
        if n == 0:
            return 0.0
        p = sum(labels) / n
        return 2.0 * p * (1.0 - p)

    n = len(y)
    best = None
    for col, kind in zip(columns, kinds):
        if kind == "numeric":
            values = sorted(set(col))
            candidates = [
                (values[i] + values[i + 1]) / 2.0 for i in range(len(values) - 1)
            ]
            masks = [[v <= c for v in col] for c in candidates]
        else:
            masks = [[v == level for v in col] for level in sorted(set(col))]
        for mask in masks:
            left = [y[i] for i in range(n) if mask[i]]
            right = [y[i] for i in range(n) if not mask[i]]
            if len(left) < min_samples_leaf or len(right) < min_samples_leaf:
                continue
            weighted = (len(left) * gini(left) + len(right) * gini(right)) / n
            if best is None or weighted < best:
                best = weighted
    return best


def gaussian_bayes_oracle(x, priors, params):
    """Direct Bayes-rule posterior for 1-D Gaussian class densities.

    priors: {label: probability}; params: {label: (mean, var)}.
    Returns {label: posterior}.
    """
    likes = {}
    for label, (mean, var) in params.items():
        likes[label] = priors[label] * math.exp(-((x - mean) ** 2) / (2 * var)) / math.sqrt(
            2 * math.pi * var
        )
    total = sum(likes.values())
    return {label: v / total for label, v in likes.items()}
