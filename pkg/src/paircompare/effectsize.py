"""Effect size indices for paired differences.

Four indices quantify practical significance of w = u - v: Cohen's d and
Hedges' g (standardized mean difference, g bias-adjusted by 1 - 3/(4n - 9)),
Wilcoxon r (Z / sqrt(n) from the signed-rank normal approximation), and the
Hodges-Lehmann estimator (median of pairwise averages, a robust location
estimate on the original scale).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError
from .hypotests import _signed_ranks, wilcoxon_z
from .ingest import EuSeries

COHENS_D = "cohens_d"
HEDGES_G = "hedges_g"
WILCOXON_R = "wilcoxon_r"
HODGES_LEHMANN = "hodges_lehmann"
EFFECT_SIZE_INDICES = (COHENS_D, HEDGES_G, WILCOXON_R, HODGES_LEHMANN)

# Above this sample size the Hodges-Lehmann estimator switches from explicit
# enumeration of all pairs to a selection scheme that never materializes them.
HL_ENUMERATION_LIMIT = 2000


@dataclass(frozen=True)
class EffectSizeEstimate:
    index: str
    value: float
    n: int
    standardized: bool

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "value": self.value,
            "n": int(self.n),
            "standardized": self.standardized,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EffectSizeEstimate":
        return cls(
            index=d["index"], value=d["value"], n=int(d["n"]), standardized=bool(d["standardized"])
        )


def _diffs(series: EuSeries, minimum: int, what: str) -> np.ndarray:
    if series.n < minimum:
        raise DegenerateDataError(f"{what} needs n >= {minimum}, got n={series.n}")
    return series.diffs


def cohens_d(series: EuSeries) -> EffectSizeEstimate:
    """Standardized mean difference: mean(w) / sd(w), n-1 denominator."""
    w = _diffs(series, 2, "cohens_d")
    sd = float(w.std(ddof=1))
    if sd == 0.0:
        raise DegenerateDataError("cohens_d undefined: differences have zero variance")
    return EffectSizeEstimate(
        index=COHENS_D, value=float(w.mean()) / sd, n=w.size, standardized=True
    )


def hedges_g(series: EuSeries) -> EffectSizeEstimate:
    """Small-sample adjusted d: g = d * (1 - 3 / (4n - 9)); needs n >= 3."""
    if series.n <= 2:
        raise DegenerateDataError(f"hedges_g needs n >= 3, got n={series.n}")
    d = cohens_d(series)
    correction = 1.0 - 3.0 / (4.0 * series.n - 9.0)
    return EffectSizeEstimate(
        index=HEDGES_G, value=d.value * correction, n=series.n, standardized=True
    )


def wilcoxon_r(series: EuSeries) -> EffectSizeEstimate:
    """Signed-rank effect size r = Z / sqrt(n), n counted after zero-dropping."""
    w = _diffs(series, 2, "wilcoxon_r")
    nz, ranks, ties = _signed_ranks(w)
    n = nz.size
    w_stat = float(ranks[nz > 0.0].sum())
    z = wilcoxon_z(w_stat, n, ties)
    return EffectSizeEstimate(index=WILCOXON_R, value=z / math.sqrt(n), n=n, standardized=True)


def _count_pairs_leq(w: np.ndarray, x: float, include_self: bool) -> int:
    """#{i < j : w_i + w_j <= x} on sorted w, plus the diagonal if asked."""
    n = w.size
    count = 0
    j = n - 1
    for i in range(n):
        while j > i and w[i] + w[j] > x:
            j -= 1
        if j <= i:
            break
        count += j - i
    if include_self:
        count += int(np.searchsorted(w + w, x, side="right"))
    return count


def _max_pairsum_leq(w: np.ndarray, x: float, include_self: bool) -> float:
    """Largest pairwise sum <= x on sorted w; -inf if none."""
    n = w.size
    best = -math.inf
    j = n - 1
    for i in range(n):
        while j > i and w[i] + w[j] > x:
            j -= 1
        if j <= i:
            break
        best = max(best, float(w[i] + w[j]))
    if include_self:
        doubled = w + w
        pos = int(np.searchsorted(doubled, x, side="right"))
        if pos > 0:
            best = max(best, float(doubled[pos - 1]))
    return best


def _kth_pairsum(w: np.ndarray, k: int, include_self: bool) -> float:
    """k-th smallest (1-based) pairwise sum w_i + w_j without materializing pairs.

    Binary search on the value axis with an O(n) two-pointer count per probe;
    the result is snapped to an actual pair sum.
    """
    lo = float(2.0 * w[0])
    hi = float(2.0 * w[-1])
    if _count_pairs_leq(w, lo, include_self) >= k:
        return _max_pairsum_leq(w, lo, include_self)
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _count_pairs_leq(w, mid, include_self) >= k:
            hi = mid
        else:
            lo = mid
    return _max_pairsum_leq(w, hi, include_self)


def hodges_lehmann(
    series: EuSeries, include_self_pairs: bool = False, enumeration_limit: int = HL_ENUMERATION_LIMIT
) -> EffectSizeEstimate:
    """Hodges-Lehmann estimator: median of pairwise averages (w_i + w_j) / 2.

    The default excludes i = j; ``include_self_pairs`` adds the classical
    Walsh averages w_i. Pairs are enumerated explicitly up to
    ``enumeration_limit`` observations and selected by a counting binary
    search above it; both paths return the same value.
    """
    w = _diffs(series, 2, "hodges_lehmann")
    n = w.size
    if n <= enumeration_limit:
        i, j = np.triu_indices(n, k=0 if include_self_pairs else 1)
        value = float(np.median((w[i] + w[j]) / 2.0))
    else:
        w_sorted = np.sort(w)
        m = n * (n - 1) // 2 + (n if include_self_pairs else 0)
        mid_hi = m // 2 + 1
        if m % 2 == 1:
            value = _kth_pairsum(w_sorted, mid_hi, include_self_pairs) / 2.0
        else:
            a = _kth_pairsum(w_sorted, m // 2, include_self_pairs)
            b = _kth_pairsum(w_sorted, mid_hi, include_self_pairs)
            value = (a / 2.0 + b / 2.0) / 2.0
    return EffectSizeEstimate(index=HODGES_LEHMANN, value=value, n=n, standardized=False)


_ESTIMATORS = {
    COHENS_D: cohens_d,
    HEDGES_G: hedges_g,
    WILCOXON_R: wilcoxon_r,
    HODGES_LEHMANN: hodges_lehmann,
}


def estimate(series: EuSeries, indices) -> list[EffectSizeEstimate]:
    """Compute the requested effect size indices, in the order given."""
    out = []
    for index in indices:
        if index not in _ESTIMATORS:
            raise DegenerateDataError(
                f"unknown effect size index {index!r}; expected one of {EFFECT_SIZE_INDICES}"
            )
        out.append(_ESTIMATORS[index](series))
    return out
