"""Independent brute-force oracles used to verify the library's tests.

Everything here is implemented from first principles with itertools and
math only, deliberately avoiding the library's own code paths, so that a
bug in the implementation cannot hide in its oracle.
"""
from __future__ import annotations

import itertools
import math


def rank_abs(values):
    """Average ranks of |values| (1-based), computed by sorting."""
    pairs = sorted((abs(v), i) for i, v in enumerate(values))
    ranks = [0.0] * len(values)
    pos = 0
    while pos < len(pairs):
        end = pos
        while end + 1 < len(pairs) and pairs[end + 1][0] == pairs[pos][0]:
            end += 1
        avg = (pos + end) / 2 + 1
        for k in range(pos, end + 1):
            ranks[pairs[k][1]] = avg
        pos = end + 1
    return ranks


def exact_wilcoxon_p(d, direction):
    """Exact signed-rank p by enumerating all 2^n sign assignments.

    Zeros must already be dropped and the sample tie-free.
    """
    d = list(d)
    n = len(d)
    ranks = rank_abs(d)
    w_obs = sum(r for v, r in zip(d, ranks) if v > 0)
    ge = le = 0
    total = 2**n
    for signs in itertools.product((1, -1), repeat=n):
        w = sum(r for s, r in zip(signs, ranks) if s > 0)
        if w >= w_obs:
            ge += 1
        if w <= w_obs:
            le += 1
    right = ge / total
    left = le / total
    if direction == "right":
        return right
    if direction == "left":
        return left
    return min(1.0, 2.0 * min(left, right))


def exact_permutation_p(d, direction):
    """Exact sign-flip permutation p on the mean, by full enumeration.

    Sums accumulate left-to-right so borderline float ties resolve the same
    way as any other left-to-right evaluation of the same signed values.
    """
    d = list(d)
    s_obs = 0.0
    for v in d:
        s_obs = s_obs + v
    ge = le = extreme = 0
    total = 2 ** len(d)
    for signs in itertools.product((1.0, -1.0), repeat=len(d)):
        s = 0.0
        for sign, v in zip(signs, d):
            s = s + sign * v
        if s >= s_obs:
            ge += 1
        if s <= s_obs:
            le += 1
        if abs(s) >= abs(s_obs):
            extreme += 1
    if direction == "right":
        return ge / total
    if direction == "left":
        return le / total
    return extreme / total


def binom_tail_p(k, n, direction):
    """Sign-test p from exact binomial tail sums (math.comb)."""
    def prob_le(j):
        return sum(math.comb(n, i) for i in range(0, j + 1)) / 2.0**n

    right = 1.0 - prob_le(k - 1) if k > 0 else 1.0
    left = prob_le(k)
    if direction == "right":
        return right
    if direction == "left":
        return left
    return min(1.0, 2.0 * min(left, right))


def brute_hodges_lehmann(w, include_self=False):
    """Median of pairwise averages by explicit enumeration and sorting."""
    w = list(w)
    n = len(w)
    averages = []
    for i in range(n):
        start = i if include_self else i + 1
        for j in range(start, n):
            averages.append((w[i] + w[j]) / 2.0)
    averages.sort()
    m = len(averages)
    if m % 2 == 1:
        return averages[m // 2]
    return (averages[m // 2 - 1] + averages[m // 2]) / 2.0


def wilcoxon_z_by_hand(d):
    """Tie-corrected signed-rank Z recomputed from the printed formula."""
    nz = [v for v in d if v != 0.0]
    n = len(nz)
    ranks = rank_abs(nz)
    w = sum(r for v, r in zip(nz, ranks) if v > 0)
    groups: dict[float, int] = {}
    for v in nz:
        groups[abs(v)] = groups.get(abs(v), 0) + 1
    tie_term = sum(t**3 - t for t in groups.values() if t > 1) / 48.0
    var = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term
    return (w - n * (n + 1) / 4.0) / math.sqrt(var)
