"""Descriptive analysis of the paired sample and test recommendation.

Produces summary statistics and histogram data for {u}, {v}, and {u - v},
classifies the skewness of the differences to pick mean vs median as the
test statistic, runs the Shapiro-Wilk normality check when the distribution
is roughly symmetric, and recommends a list of significance tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._shapiro import MAX_N, MIN_N, shapiro_wilk_statistic
from .errors import DataError
from .ingest import EuSeries

ROUGHLY_SYMMETRIC = "roughly_symmetric"
SLIGHTLY_SKEWED = "slightly_skewed"
HIGHLY_SKEWED = "highly_skewed"

VERDICT_NORMAL = "normal"
VERDICT_NOT_NORMAL = "not_normal"
VERDICT_SKIPPED = "skipped"

T_TEST = "t_test"
WILCOXON = "wilcoxon_signed_rank"
SIGN_TEST = "sign_test"
BOOTSTRAP_T = "bootstrap_t"
BOOTSTRAP_MEDIAN = "bootstrap_median"
PERMUTATION = "permutation"

TEST_IDS = (T_TEST, WILCOXON, SIGN_TEST, BOOTSTRAP_T, BOOTSTRAP_MEDIAN, PERMUTATION)

# Recommendation policy, keyed by (symmetric?, normality verdict). The lists
# are ordered by preference; callers may pass their own policy to recommend().
DEFAULT_POLICY = {
    (ROUGHLY_SYMMETRIC, VERDICT_NORMAL): (T_TEST, BOOTSTRAP_T, PERMUTATION, WILCOXON),
    (ROUGHLY_SYMMETRIC, VERDICT_NOT_NORMAL): (BOOTSTRAP_T, PERMUTATION, WILCOXON, SIGN_TEST),
    "skewed": (WILCOXON, SIGN_TEST, BOOTSTRAP_MEDIAN),
}

HISTOGRAM_MIN_BINS = 5
HISTOGRAM_MAX_BINS = 50


@dataclass(frozen=True)
class SummaryStats:
    """Descriptive statistics of one sample.

    ``std_dev`` uses the n-1 denominator. ``skewness`` is the adjusted
    Fisher-Pearson coefficient G1 = n/((n-1)(n-2)) * sum(((x-mean)/s)^3);
    it is reported as 0 with ``degenerate`` set when n < 3 or s = 0.
    """

    count: int
    mean: float
    median: float
    std_dev: float
    min: float
    max: float
    skewness: float
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "count": int(self.count),
            "mean": self.mean,
            "median": self.median,
            "std_dev": self.std_dev,
            "min": self.min,
            "max": self.max,
            "skewness": self.skewness,
            "degenerate": self.degenerate,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SummaryStats":
        return cls(
            count=int(d["count"]),
            mean=d["mean"],
            median=d["median"],
            std_dev=d["std_dev"],
            min=d["min"],
            max=d["max"],
            skewness=d["skewness"],
            degenerate=bool(d["degenerate"]),
        )


@dataclass(frozen=True, eq=False)
class HistogramData:
    """Equal-width histogram counts; rendering is the caller's job."""

    bin_edges: np.ndarray
    counts: np.ndarray
    label: str

    def __post_init__(self):
        edges = np.asarray(self.bin_edges, dtype=np.float64)
        counts = np.asarray(self.counts, dtype=np.int64)
        if edges.size != counts.size + 1:
            raise DataError("bin_edges must be one longer than counts")
        edges.setflags(write=False)
        counts.setflags(write=False)
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "counts", counts)

    def to_csv(self) -> str:
        lines = ["bin_start,bin_end,count"]
        for lo, hi, c in zip(self.bin_edges[:-1], self.bin_edges[1:], self.counts):
            lines.append(f"{float(lo)!r},{float(hi)!r},{int(c)}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "bin_edges": [float(e) for e in self.bin_edges],
            "counts": [int(c) for c in self.counts],
            "label": self.label,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HistogramData":
        return cls(bin_edges=np.array(d["bin_edges"]), counts=np.array(d["counts"]), label=d["label"])


@dataclass(frozen=True)
class SkewClass:
    """Skewness classification and the implied test statistic.

    |gamma| in [0, 0.5) is roughly symmetric (use the mean), [0.5, 1) is
    slightly skewed, and [1, inf) highly skewed (use the median in both).
    """

    gamma: float
    skew_class: str
    recommended_statistic: str
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "class": self.skew_class,
            "recommended_statistic": self.recommended_statistic,
            "degenerate": self.degenerate,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SkewClass":
        return cls(
            gamma=d["gamma"],
            skew_class=d["class"],
            recommended_statistic=d["recommended_statistic"],
            degenerate=bool(d["degenerate"]),
        )


@dataclass(frozen=True)
class NormalityResult:
    performed: bool
    w_statistic: float | None
    p_value: float | None
    alpha1: float
    verdict: str
    skip_reason: str | None = None

    def to_dict(self) -> dict:
        return {
            "performed": self.performed,
            "w_statistic": self.w_statistic,
            "p_value": self.p_value,
            "alpha1": self.alpha1,
            "verdict": self.verdict,
            "skip_reason": self.skip_reason,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NormalityResult":
        return cls(
            performed=bool(d["performed"]),
            w_statistic=d["w_statistic"],
            p_value=d["p_value"],
            alpha1=d["alpha1"],
            verdict=d["verdict"],
            skip_reason=d.get("skip_reason"),
        )


@dataclass(frozen=True)
class AnalysisReport:
    stats_u: SummaryStats
    stats_v: SummaryStats
    stats_diff: SummaryStats
    histograms: tuple[HistogramData, HistogramData, HistogramData]
    skew: SkewClass
    normality: NormalityResult
    recommended_tests: tuple[str, ...]
    schema_version: str = "1"

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "stats_u": self.stats_u.to_dict(),
            "stats_v": self.stats_v.to_dict(),
            "stats_diff": self.stats_diff.to_dict(),
            "histograms": [h.to_dict() for h in self.histograms],
            "skew": self.skew.to_dict(),
            "normality": self.normality.to_dict(),
            "recommended_tests": list(self.recommended_tests),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisReport":
        return cls(
            stats_u=SummaryStats.from_dict(d["stats_u"]),
            stats_v=SummaryStats.from_dict(d["stats_v"]),
            stats_diff=SummaryStats.from_dict(d["stats_diff"]),
            histograms=tuple(HistogramData.from_dict(h) for h in d["histograms"]),
            skew=SkewClass.from_dict(d["skew"]),
            normality=NormalityResult.from_dict(d["normality"]),
            recommended_tests=tuple(d["recommended_tests"]),
            schema_version=d.get("schema_version", "1"),
        )


def summarize(sample) -> SummaryStats:
    """Summary statistics with bias-corrected (G1) skewness."""
    x = np.asarray(sample, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise DataError("summarize needs a non-empty 1-D sample")
    if not np.isfinite(x).all():
        raise DataError("sample must be finite")
    n = x.size
    mean = float(x.mean())
    sd = float(x.std(ddof=1)) if n >= 2 else 0.0
    degenerate = n < 3 or sd == 0.0
    if degenerate:
        skewness = 0.0
    else:
        z = (x - mean) / sd
        skewness = float(n / ((n - 1) * (n - 2)) * np.sum(z**3))
    return SummaryStats(
        count=n,
        mean=mean,
        median=float(np.median(x)),
        std_dev=sd,
        min=float(x.min()),
        max=float(x.max()),
        skewness=skewness,
        degenerate=degenerate,
    )


def auto_bin_count(n: int) -> int:
    """ceil(sqrt(n)), clamped to [5, 50]."""
    return min(HISTOGRAM_MAX_BINS, max(HISTOGRAM_MIN_BINS, math.ceil(math.sqrt(n))))


def histogram(sample, bins: int | str = "auto", label: str = "") -> HistogramData:
    """Equal-width histogram over [min, max].

    An all-equal sample gets a single bin of width 1 centered on the value.
    """
    x = np.asarray(sample, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise DataError("histogram needs a non-empty 1-D sample")
    if bins == "auto":
        n_bins = auto_bin_count(x.size)
    else:
        n_bins = int(bins)
        if n_bins < 1:
            raise DataError(f"bins must be positive, got {bins!r}")
    lo, hi = float(x.min()), float(x.max())
    if lo == hi:
        edges = np.array([lo - 0.5, lo + 0.5])
        counts = np.array([x.size])
        return HistogramData(bin_edges=edges, counts=counts, label=label)
    edges = np.linspace(lo, hi, n_bins + 1)
    counts, _ = np.histogram(x, bins=edges)
    return HistogramData(bin_edges=edges, counts=counts, label=label)


def classify_skew(stats_diff: SummaryStats) -> SkewClass:
    """Apply the symmetric / slightly / highly skewed rule of thumb.

    Intervals are half-open: |gamma| = 0.5 is slightly skewed and
    |gamma| = 1 highly skewed. A degenerate skewness falls back to roughly
    symmetric with the ``degenerate`` flag set.
    """
    gamma = stats_diff.skewness
    if stats_diff.degenerate:
        return SkewClass(
            gamma=gamma,
            skew_class=ROUGHLY_SYMMETRIC,
            recommended_statistic="mean",
            degenerate=True,
        )
    a = abs(gamma)
    if a < 0.5:
        cls = ROUGHLY_SYMMETRIC
    elif a < 1.0:
        cls = SLIGHTLY_SKEWED
    else:
        cls = HIGHLY_SKEWED
    statistic = "mean" if cls == ROUGHLY_SYMMETRIC else "median"
    return SkewClass(gamma=gamma, skew_class=cls, recommended_statistic=statistic, degenerate=False)


def shapiro_wilk(sample, alpha1: float = 0.05) -> NormalityResult:
    """Shapiro-Wilk normality test; verdict is normal iff p >= alpha1."""
    if not 0.0 < alpha1 < 1.0:
        raise DataError(f"alpha1 must be in (0, 1), got {alpha1}")
    w, p = shapiro_wilk_statistic(sample)
    verdict = VERDICT_NORMAL if p >= alpha1 else VERDICT_NOT_NORMAL
    return NormalityResult(
        performed=True, w_statistic=w, p_value=p, alpha1=alpha1, verdict=verdict
    )


def skipped_normality(alpha1: float, reason: str) -> NormalityResult:
    return NormalityResult(
        performed=False,
        w_statistic=None,
        p_value=None,
        alpha1=alpha1,
        verdict=VERDICT_SKIPPED,
        skip_reason=reason,
    )


def recommend(skew: SkewClass, normality: NormalityResult, policy=None) -> tuple[str, ...]:
    """Recommend significance tests from skewness class and normality verdict.

    The t test appears only for a roughly symmetric sample that passed the
    normality check. A symmetric sample whose normality test was skipped
    (out-of-range n, zero variance) falls back to the nonparametric list. A
    skewed sample with a performed normality test is rejected as
    inconsistent: the test should have been skipped.
    """
    policy = DEFAULT_POLICY if policy is None else policy
    if skew.skew_class != ROUGHLY_SYMMETRIC:
        if normality.performed:
            raise DataError(
                "inconsistent inputs: normality test performed on a skewed sample"
            )
        return tuple(policy["skewed"])
    if normality.verdict == VERDICT_NORMAL:
        return tuple(policy[(ROUGHLY_SYMMETRIC, VERDICT_NORMAL)])
    return tuple(policy[(ROUGHLY_SYMMETRIC, VERDICT_NOT_NORMAL)])


def analyze(series: EuSeries, alpha1: float = 0.05, bins: int | str = "auto") -> AnalysisReport:
    """Full data-analysis step for an EU series.

    Summarizes u, v, and u - v, classifies skewness of the differences, runs
    Shapiro-Wilk on the differences when the sample is roughly symmetric and
    the test is applicable, and attaches the recommended test list.
    """
    if not 0.0 < alpha1 < 1.0:
        raise DataError(f"alpha1 must be in (0, 1), got {alpha1}")
    w = series.diffs
    stats_u = summarize(series.u)
    stats_v = summarize(series.v)
    stats_diff = summarize(w)
    histograms = (
        histogram(series.u, bins=bins, label="u"),
        histogram(series.v, bins=bins, label="v"),
        histogram(w, bins=bins, label="u-v"),
    )
    skew = classify_skew(stats_diff)
    if skew.skew_class != ROUGHLY_SYMMETRIC:
        normality = skipped_normality(alpha1, "sample is skewed; normality test unnecessary")
    elif stats_diff.std_dev == 0.0:
        normality = skipped_normality(alpha1, "zero-variance differences")
    elif series.n < MIN_N or series.n > MAX_N:
        normality = skipped_normality(
            alpha1, f"Shapiro-Wilk requires {MIN_N} <= n <= {MAX_N} (n={series.n})"
        )
    else:
        normality = shapiro_wilk(w, alpha1=alpha1)
    recommended = recommend(skew, normality)
    return AnalysisReport(
        stats_u=stats_u,
        stats_v=stats_v,
        stats_diff=stats_diff,
        histograms=histograms,
        skew=skew,
        normality=normality,
        recommended_tests=recommended,
    )
