"""Paired significance tests on evaluation-unit differences.

Every test follows one convention: with observed differences w_i = u_i - v_i
and hypothesized statistic difference delta, the sample actually tested is
d_i = w_i - delta and H0 states that the relevant statistic of d (mean,
median, or signed-rank location) is zero. ``direction`` names the
alternative: ``right`` means the statistic of w exceeds delta.

Resampling tests report the smoothed p-value (1 + hits) / (B + 1), which
cannot be zero; exact enumerations report unsmoothed tail probabilities.
Two-sided p-values double the smaller tail for discrete nulls (Wilcoxon,
sign) and use the |statistic| convention for resampling nulls; both are
capped at 1. H0 is rejected iff p < alpha2, strictly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import numpy as np
from scipy import stats as sps

from ._seeds import TRIAL_CHUNK, iter_chunks, spawn_seed, substream, validate_seed
from .analysis import (
    BOOTSTRAP_MEDIAN,
    BOOTSTRAP_T,
    PERMUTATION,
    SIGN_TEST,
    T_TEST,
    TEST_IDS,
    WILCOXON,
)
from .errors import DataError, DegenerateDataError
from .ingest import EuSeries, eu_series_from_arrays

TWO_SIDED = "two_sided"
LEFT = "left"
RIGHT = "right"
DIRECTIONS = (TWO_SIDED, LEFT, RIGHT)

RESAMPLING_TESTS = (BOOTSTRAP_T, BOOTSTRAP_MEDIAN, PERMUTATION)

# Largest n for which the permutation test enumerates all 2^n sign flips and
# the Wilcoxon test uses its exact (tie-free) null distribution.
PERMUTATION_EXACT_LIMIT = 20
WILCOXON_EXACT_LIMIT = 25

DEFAULT_TRIALS = 10_000
MIN_TRIALS = 100


@dataclass(frozen=True)
class TestConfig:
    test_id: str
    direction: str = TWO_SIDED
    delta: float = 0.0
    alpha2: float = 0.05
    trials: int = DEFAULT_TRIALS
    seed: int = 0

    def __post_init__(self):
        if self.test_id not in TEST_IDS:
            raise DataError(f"unknown test_id {self.test_id!r}; expected one of {TEST_IDS}")
        if self.direction not in DIRECTIONS:
            raise DataError(f"direction must be one of {DIRECTIONS}, got {self.direction!r}")
        if not math.isfinite(self.delta):
            raise DataError(f"delta must be finite, got {self.delta!r}")
        if not 0.0 < self.alpha2 < 1.0:
            raise DataError(f"alpha2 must be in (0, 1), got {self.alpha2}")
        if self.test_id in RESAMPLING_TESTS and self.trials < MIN_TRIALS:
            raise DataError(
                f"{self.test_id} needs trials >= {MIN_TRIALS}, got {self.trials}"
            )
        validate_seed(self.seed)

    def to_dict(self) -> dict:
        return {
            "test_id": self.test_id,
            "direction": self.direction,
            "delta": self.delta,
            "alpha2": self.alpha2,
            "trials": int(self.trials),
            "seed": int(self.seed),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TestConfig":
        return cls(
            test_id=d["test_id"],
            direction=d["direction"],
            delta=d["delta"],
            alpha2=d["alpha2"],
            trials=int(d["trials"]),
            seed=int(d["seed"]),
        )


@dataclass(frozen=True)
class TestResult:
    config: TestConfig
    statistic_name: str
    statistic_value: float
    p_value: float
    reject_h0: bool
    n: int
    n_effective: int
    confidence_interval: tuple[float, float] | None
    method: str

    def to_dict(self) -> dict:
        ci = self.confidence_interval
        return {
            "config": self.config.to_dict(),
            "statistic_name": self.statistic_name,
            "statistic_value": self.statistic_value,
            "p_value": self.p_value,
            "reject_h0": self.reject_h0,
            "n": int(self.n),
            "n_effective": int(self.n_effective),
            "confidence_interval": None if ci is None else [ci[0], ci[1]],
            "method": self.method,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TestResult":
        ci = d["confidence_interval"]
        return cls(
            config=TestConfig.from_dict(d["config"]),
            statistic_name=d["statistic_name"],
            statistic_value=d["statistic_value"],
            p_value=d["p_value"],
            reject_h0=bool(d["reject_h0"]),
            n=int(d["n"]),
            n_effective=int(d["n_effective"]),
            confidence_interval=None if ci is None else (ci[0], ci[1]),
            method=d["method"],
        )


def _two_sided_from_tails(left: float, right: float) -> float:
    return min(1.0, 2.0 * min(left, right))


def _pick_tail(left: float, right: float, direction: str) -> float:
    if direction == RIGHT:
        return right
    if direction == LEFT:
        return left
    return _two_sided_from_tails(left, right)


def _shifted_diffs(series: EuSeries, config: TestConfig) -> np.ndarray:
    if series.n < 2:
        raise DegenerateDataError(f"tests need n >= 2 evaluation units, got n={series.n}")
    return series.diffs - config.delta


# ---------------------------------------------------------------------------
# t test


def _t_p_value(t: float | np.ndarray, df: int, direction: str):
    """p-value(s) for a t statistic; shared by the test and the power code."""
    if direction == RIGHT:
        return sps.t.sf(t, df)
    if direction == LEFT:
        return sps.t.cdf(t, df)
    return np.minimum(1.0, 2.0 * sps.t.sf(np.abs(t), df))


def _t_stat(d: np.ndarray) -> tuple[float, float]:
    n = d.size
    sd = float(d.std(ddof=1))
    if sd == 0.0:
        raise DegenerateDataError("zero-variance sample: t statistic undefined")
    se = sd / math.sqrt(n)
    return float(d.mean()) / se, se


def t_test(series: EuSeries, config: TestConfig) -> TestResult:
    """One-sample Student t test on d = w - delta with df = n - 1.

    The confidence interval is the central (1 - alpha2) interval for the
    mean of w, regardless of direction.
    """
    d = _shifted_diffs(series, config)
    n = d.size
    t, se = _t_stat(d)
    df = n - 1
    p = float(_t_p_value(t, df, config.direction))
    half = float(sps.t.ppf(1.0 - config.alpha2 / 2.0, df)) * se
    center = float(d.mean()) + config.delta
    return TestResult(
        config=config,
        statistic_name="t",
        statistic_value=t,
        p_value=p,
        reject_h0=p < config.alpha2,
        n=n,
        n_effective=n,
        confidence_interval=(center - half, center + half),
        method=f"one-sample t, df={df}",
    )


# ---------------------------------------------------------------------------
# Wilcoxon signed-rank


def _signed_ranks(d: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Drop zeros; return (nonzero d, average ranks of |d|, tie-group sizes)."""
    nz = d[d != 0.0]
    if nz.size == 0:
        raise DegenerateDataError("degenerate sample: all differences equal delta")
    ranks = sps.rankdata(np.abs(nz), method="average")
    _, counts = np.unique(np.abs(nz), return_counts=True)
    ties = counts[counts > 1]
    return nz, ranks, ties


def _wilcoxon_sigma(n: int, ties: np.ndarray) -> float:
    var = n * (n + 1) * (2 * n + 1) / 24.0 - float(np.sum(ties.astype(np.float64) ** 3 - ties)) / 48.0
    return math.sqrt(var)


def wilcoxon_z(w_stat: float, n: int, ties: np.ndarray) -> float:
    """Normal-approximation Z for the positive-rank sum W with tie correction."""
    return (w_stat - n * (n + 1) / 4.0) / _wilcoxon_sigma(n, ties)


def _exact_signed_rank_counts(n: int) -> np.ndarray:
    """Null distribution of W over ranks 1..n: counts[w] = #sign assignments."""
    max_w = n * (n + 1) // 2
    counts = np.zeros(max_w + 1, dtype=np.int64)
    counts[0] = 1
    for k in range(1, n + 1):
        shifted = np.zeros_like(counts)
        shifted[k:] = counts[:-k]
        counts = counts + shifted
    return counts


def wilcoxon_signed_rank(series: EuSeries, config: TestConfig) -> TestResult:
    """Wilcoxon signed-rank test on d = w - delta.

    Zeros are dropped. For n <= 25 without ties the exact null distribution
    of the positive-rank sum W is enumerated; otherwise the tie-corrected
    normal approximation is used.
    """
    d = _shifted_diffs(series, config)
    nz, ranks, ties = _signed_ranks(d)
    n = nz.size
    w_stat = float(ranks[nz > 0.0].sum())
    if n <= WILCOXON_EXACT_LIMIT and ties.size == 0:
        counts = _exact_signed_rank_counts(n)
        total = float(2**n)
        w_int = int(round(w_stat))
        right = float(counts[w_int:].sum()) / total
        left = float(counts[: w_int + 1].sum()) / total
        method = "exact null enumeration"
    else:
        z = wilcoxon_z(w_stat, n, ties)
        right = float(sps.norm.sf(z))
        left = float(sps.norm.cdf(z))
        method = "normal approximation with tie correction"
    p = _pick_tail(left, right, config.direction)
    return TestResult(
        config=config,
        statistic_name="W",
        statistic_value=w_stat,
        p_value=p,
        reject_h0=p < config.alpha2,
        n=series.n,
        n_effective=n,
        confidence_interval=None,
        method=method,
    )


# ---------------------------------------------------------------------------
# sign test


def sign_test(series: EuSeries, config: TestConfig) -> TestResult:
    """Exact binomial sign test on the count of positive d = w - delta."""
    d = _shifted_diffs(series, config)
    nz = d[d != 0.0]
    if nz.size == 0:
        raise DegenerateDataError("degenerate sample: all differences equal delta")
    n = nz.size
    k = int((nz > 0.0).sum())
    right = float(sps.binom.sf(k - 1, n, 0.5))
    left = float(sps.binom.cdf(k, n, 0.5))
    p = _pick_tail(left, right, config.direction)
    return TestResult(
        config=config,
        statistic_name="positive_count",
        statistic_value=float(k),
        p_value=p,
        reject_h0=p < config.alpha2,
        n=series.n,
        n_effective=n,
        confidence_interval=None,
        method="exact binomial tails",
    )


# ---------------------------------------------------------------------------
# bootstrap tests


def _bootstrap_tails(
    d: np.ndarray, which: str, trials: int, seed: int, delta: float
) -> tuple[float, float, float, float, np.ndarray]:
    """Resample d with replacement; statistics are recentered to the null.

    Returns (observed statistic, left tail p, right tail p, two-sided p,
    bootstrap distribution of the statistic on the w scale for the CI).
    """
    n = d.size
    mean_d = float(d.mean())
    if which == "t":
        sd = float(d.std(ddof=1))
        if sd == 0.0:
            raise DegenerateDataError("zero-variance sample: bootstrap t undefined")
        obs = mean_d / (sd / math.sqrt(n))
    else:
        obs = float(np.median(d))

    ge = le = extreme = 0
    ci_parts: list[np.ndarray] = []
    for chunk_index, count in iter_chunks(trials, TRIAL_CHUNK):
        rng = substream(seed, chunk_index)
        idx = rng.integers(0, n, size=(count, n))
        resample = d[idx]
        if which == "t":
            rm = resample.mean(axis=1)
            rs = resample.std(axis=1, ddof=1)
            num = rm - mean_d
            with np.errstate(divide="ignore", invalid="ignore"):
                stat = num / (rs / math.sqrt(n))
            zero_sd = rs == 0.0
            if zero_sd.any():
                # A constant resample has no spread: the t ratio is 0 for a
                # centered numerator and +/-inf otherwise.
                fallback = np.where(num > 0.0, np.inf, np.where(num < 0.0, -np.inf, 0.0))
                stat = np.where(zero_sd, fallback, stat)
            ci_parts.append(rm + delta)
        else:
            rmed = np.median(resample, axis=1)
            stat = rmed - obs
            ci_parts.append(rmed + delta)
        ge += int((stat >= obs).sum())
        le += int((stat <= obs).sum())
        extreme += int((np.abs(stat) >= abs(obs)).sum())

    denom = trials + 1.0
    right = (1.0 + ge) / denom
    left = (1.0 + le) / denom
    two = min(1.0, (1.0 + extreme) / denom)
    return obs, left, right, two, np.concatenate(ci_parts)


def bootstrap_test(series: EuSeries, config: TestConfig) -> TestResult:
    """Bootstrap test with the t ratio (bootstrap_t) or median (bootstrap_median).

    B resamples of d = w - delta are drawn with replacement; each resample's
    statistic is recentered by the observed statistic so that the null holds
    in the resampling world. The smoothed p is (1 + hits) / (B + 1). The
    confidence interval is the percentile interval of the un-recentered
    statistic on the w scale at level 1 - alpha2.
    """
    if config.test_id not in (BOOTSTRAP_T, BOOTSTRAP_MEDIAN):
        raise DataError(f"bootstrap_test cannot run test_id {config.test_id!r}")
    d = _shifted_diffs(series, config)
    which = "t" if config.test_id == BOOTSTRAP_T else "median"
    obs, left, right, two, ci_dist = _bootstrap_tails(
        d, which, config.trials, config.seed, config.delta
    )
    p = two if config.direction == TWO_SIDED else (right if config.direction == RIGHT else left)
    lo = float(np.quantile(ci_dist, config.alpha2 / 2.0))
    hi = float(np.quantile(ci_dist, 1.0 - config.alpha2 / 2.0))
    return TestResult(
        config=config,
        statistic_name="t_ratio" if which == "t" else "median",
        statistic_value=obs,
        p_value=p,
        reject_h0=p < config.alpha2,
        n=series.n,
        n_effective=series.n,
        confidence_interval=(lo, hi),
        method=f"bootstrap resampling, B={config.trials}",
    )


# ---------------------------------------------------------------------------
# permutation test


def _exact_sign_flip_sums(d: np.ndarray) -> np.ndarray:
    """All 2^n values of sum(s_i * d_i) via iterative doubling.

    Each value accumulates terms in index order, so it is bit-identical to a
    left-to-right summation of the signed values.
    """
    sums = np.zeros(1)
    for di in d:
        sums = np.concatenate((sums + di, sums - di))
    return sums


def permutation_test(series: EuSeries, config: TestConfig) -> TestResult:
    """Paired sign-flip permutation test with the mean statistic.

    All 2^n sign assignments are enumerated for n <= 20 (unsmoothed p);
    larger samples draw B random assignments and report the smoothed p.
    """
    d = _shifted_diffs(series, config)
    n = d.size
    if n <= PERMUTATION_EXACT_LIMIT:
        sums = _exact_sign_flip_sums(d)
        s_obs = float(sums[0])  # the all-positive assignment
        total = sums.size
        right = float((sums >= s_obs).sum()) / total
        left = float((sums <= s_obs).sum()) / total
        two = float((np.abs(sums) >= abs(s_obs)).sum()) / total
        method = f"exact enumeration of 2^{n} sign assignments"
    else:
        s_obs = float(d.sum())
        ge = le = extreme = 0
        for chunk_index, count in iter_chunks(config.trials, TRIAL_CHUNK):
            rng = substream(config.seed, chunk_index)
            signs = rng.integers(0, 2, size=(count, n)) * 2 - 1
            stat = signs @ d
            ge += int((stat >= s_obs).sum())
            le += int((stat <= s_obs).sum())
            extreme += int((np.abs(stat) >= abs(s_obs)).sum())
        denom = config.trials + 1.0
        right = (1.0 + ge) / denom
        left = (1.0 + le) / denom
        two = min(1.0, (1.0 + extreme) / denom)
        method = f"sampled sign assignments, B={config.trials}"
    p = two if config.direction == TWO_SIDED else (right if config.direction == RIGHT else left)
    return TestResult(
        config=config,
        statistic_name="mean",
        statistic_value=s_obs / n,
        p_value=p,
        reject_h0=p < config.alpha2,
        n=series.n,
        n_effective=n,
        confidence_interval=None,
        method=method,
    )


# ---------------------------------------------------------------------------
# dispatch

_RUNNERS = {
    T_TEST: t_test,
    WILCOXON: wilcoxon_signed_rank,
    SIGN_TEST: sign_test,
    BOOTSTRAP_T: bootstrap_test,
    BOOTSTRAP_MEDIAN: bootstrap_test,
    PERMUTATION: permutation_test,
}


def run_test(series: EuSeries, config: TestConfig) -> TestResult:
    """Run the test named by ``config.test_id``."""
    return _RUNNERS[config.test_id](series, config)


# ---------------------------------------------------------------------------
# multiple comparisons


def bonferroni_adjust(p_values: Sequence[float], k: int | None = None) -> list[float]:
    """Bonferroni correction: p' = min(1, k * p), order-preserving.

    ``k`` is the family size and defaults to len(p_values); it must be at
    least that many.
    """
    ps = [float(p) for p in p_values]
    for p in ps:
        if not 0.0 <= p <= 1.0:
            raise DataError(f"p-values must lie in [0, 1], got {p}")
    if k is None:
        k = len(ps)
    if k < 1:
        raise DataError(f"family size k must be >= 1, got {k}")
    if k < len(ps):
        raise DataError(f"family size k={k} smaller than the number of p-values ({len(ps)})")
    return [min(1.0, k * p) for p in ps]


@dataclass(frozen=True, eq=False)
class GridResult:
    """All-pairs comparison matrix with jointly Bonferroni-adjusted p-values."""

    system_names: tuple[str, ...]
    config: TestConfig
    p_values: np.ndarray
    adjusted_p: np.ndarray
    significant: np.ndarray
    n_comparisons: int

    def cell_rows(self) -> list[tuple[str, str, float | None, bool]]:
        """(row, col, adjusted_p, significant) for every cell; None on the diagonal."""
        rows = []
        s = len(self.system_names)
        for i in range(s):
            for j in range(s):
                adj = None if i == j else float(self.adjusted_p[i, j])
                rows.append(
                    (self.system_names[i], self.system_names[j], adj, bool(self.significant[i, j]))
                )
        return rows

    def to_cells_csv(self) -> str:
        lines = ["row,col,adjusted_p,significant"]
        for row, col, adj, sig in self.cell_rows():
            adj_text = "" if adj is None else repr(adj)
            lines.append(f"{row},{col},{adj_text},{str(sig).lower()}")
        return "\n".join(lines) + "\n"

    def to_matrix_csv(self) -> str:
        names = self.system_names
        lines = ["system," + ",".join(names)]
        for i, name in enumerate(names):
            cells = []
            for j in range(len(names)):
                cells.append("" if i == j else repr(float(self.adjusted_p[i, j])))
            lines.append(name + "," + ",".join(cells))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        def matrix(m, diag=None):
            out = []
            for i in range(m.shape[0]):
                row = []
                for j in range(m.shape[1]):
                    row.append(diag if i == j else float(m[i, j]))
                out.append(row)
            return out

        return {
            "system_names": list(self.system_names),
            "config": self.config.to_dict(),
            "p_values": matrix(self.p_values),
            "adjusted_p": matrix(self.adjusted_p),
            "significant": [[bool(v) for v in row] for row in self.significant],
            "n_comparisons": int(self.n_comparisons),
        }


def pairwise_grid(
    systems: Mapping[str, Sequence[float]] | Sequence[tuple[str, Sequence[float]]],
    config: TestConfig,
) -> GridResult:
    """Run the configured test on every unordered pair of systems.

    All score sequences must share EU alignment (equal length). The
    S*(S-1)/2 p-values are Bonferroni-adjusted jointly; a pair is
    significant iff its adjusted p < alpha2. Resampling tests derive one
    seed per pair from config.seed, so results do not depend on pair order.
    A degenerate pair (for example two identical score columns) records
    p = 1 rather than failing the whole grid.
    """
    items = list(systems.items()) if isinstance(systems, Mapping) else list(systems)
    if len(items) < 2:
        raise DataError("pairwise grid needs at least 2 systems")
    names = tuple(name for name, _ in items)
    if len(set(names)) != len(names):
        raise DataError("system names must be unique")
    arrays = [np.asarray(scores, dtype=np.float64) for _, scores in items]
    length = arrays[0].size
    for name, arr in zip(names, arrays):
        if arr.ndim != 1 or arr.size != length:
            raise DataError(f"system {name!r}: all score sequences must have equal length")
    s = len(arrays)
    k = s * (s - 1) // 2
    raw = np.full((s, s), np.nan)
    flat: list[float] = []
    pairs: list[tuple[int, int]] = []
    for i in range(s):
        for j in range(i + 1, s):
            series = eu_series_from_arrays(
                arrays[i], arrays[j], source_name=f"{names[i]} vs {names[j]}"
            )
            pair_config = replace(config, seed=spawn_seed(config.seed, i, j))
            try:
                p = run_test(series, pair_config).p_value
            except DegenerateDataError:
                p = 1.0
            raw[i, j] = raw[j, i] = p
            flat.append(p)
            pairs.append((i, j))
    adjusted_flat = bonferroni_adjust(flat, k=k)
    adjusted = np.full((s, s), np.nan)
    significant = np.zeros((s, s), dtype=bool)
    for (i, j), adj in zip(pairs, adjusted_flat):
        adjusted[i, j] = adjusted[j, i] = adj
        significant[i, j] = significant[j, i] = adj < config.alpha2
    raw.setflags(write=False)
    adjusted.setflags(write=False)
    significant.setflags(write=False)
    return GridResult(
        system_names=names,
        config=config,
        p_values=raw,
        adjusted_p=adjusted,
        significant=significant,
        n_comparisons=k,
    )
