"""Power analysis: prospective sample sizes and simulated power curves.

Prospective analysis turns an expected difference distribution into the
minimum sample size for the paired t test: a closed-form normal
approximation, refined upward by a noncentral-t search. Retrospective
analysis estimates power as the rejection fraction across seeded trials,
simulating either from a known normal difference distribution (Monte Carlo)
or by resampling the observed differences with replacement (bootstrap).
The p-value sweep runs a paired test on synthetic pairs over a grid of
sample sizes, recording how p behaves as n grows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from ._seeds import TRIAL_CHUNK, iter_chunks, spawn_seed, substream, validate_seed
from .analysis import T_TEST, TEST_IDS
from .errors import CeilingExceededError, DataError, DegenerateDataError
from .hypotests import (
    DIRECTIONS,
    RESAMPLING_TESTS,
    TWO_SIDED,
    TestConfig,
    _t_p_value,
    run_test,
)
from .ingest import EuSeries, eu_series_from_diffs

ONE_SIDED = "one_sided"

DEFAULT_SAMPLE_SIZE_CEILING = 10**9
DEFAULT_POWER_TRIALS = 1000

# Sweep grid spanning the simulation-study range.
DEFAULT_SWEEP_SIZES = (30, 50, 100, 200, 500, 1000, 2500, 5000, 10000, 25000)


@dataclass(frozen=True)
class ProspectiveSpec:
    """Inputs for prospective (design-time) power analysis."""

    expected_mean_diff: float
    expected_std_dev: float
    target_power: float = 0.8
    alpha: float = 0.05
    direction: str = TWO_SIDED

    def __post_init__(self):
        if not math.isfinite(self.expected_mean_diff) or self.expected_mean_diff == 0.0:
            raise DataError("expected_mean_diff must be finite and nonzero")
        if not self.expected_std_dev > 0.0:
            raise DataError("expected_std_dev must be positive")
        if not 0.0 < self.alpha < 1.0:
            raise DataError(f"alpha must be in (0, 1), got {self.alpha}")
        if not 0.0 < self.target_power < 1.0:
            raise DataError(f"target_power must be in (0, 1), got {self.target_power}")
        if self.target_power <= self.alpha:
            raise DataError("target_power must exceed alpha")
        if self.direction not in (TWO_SIDED, ONE_SIDED):
            raise DataError(f"direction must be two_sided or one_sided, got {self.direction!r}")

    @property
    def effect(self) -> float:
        return abs(self.expected_mean_diff) / self.expected_std_dev

    def to_dict(self) -> dict:
        return {
            "expected_mean_diff": self.expected_mean_diff,
            "expected_std_dev": self.expected_std_dev,
            "target_power": self.target_power,
            "alpha": self.alpha,
            "direction": self.direction,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ProspectiveSpec":
        return cls(
            expected_mean_diff=d["expected_mean_diff"],
            expected_std_dev=d["expected_std_dev"],
            target_power=d["target_power"],
            alpha=d["alpha"],
            direction=d["direction"],
        )


def t_test_power(effect: float, n: int, alpha: float, direction: str = TWO_SIDED) -> float:
    """Exact one-sample t test power from the noncentral t distribution."""
    if n < 2:
        return 0.0
    df = n - 1
    nc = effect * math.sqrt(n)
    if direction == TWO_SIDED:
        crit = sps.t.ppf(1.0 - alpha / 2.0, df)
        return float(sps.nct.sf(crit, df, nc) + sps.nct.cdf(-crit, df, nc))
    crit = sps.t.ppf(1.0 - alpha, df)
    return float(sps.nct.sf(crit, df, nc))


def closed_form_sample_size(spec: ProspectiveSpec) -> int:
    """Normal-approximation sample size: ceil(((z_alpha + z_power) / e)^2)."""
    tail = spec.alpha / 2.0 if spec.direction == TWO_SIDED else spec.alpha
    z_alpha = float(sps.norm.ppf(1.0 - tail))
    z_power = float(sps.norm.ppf(spec.target_power))
    return max(2, math.ceil(((z_alpha + z_power) / spec.effect) ** 2))


def prospective_sample_size(
    spec: ProspectiveSpec, ceiling: int = DEFAULT_SAMPLE_SIZE_CEILING
) -> int:
    """Minimum n whose noncentral-t power reaches the target.

    Starts from the closed form (which undershoots at small n) and refines
    by bisection on the exact t power. Raises CeilingExceededError when the
    requirement exceeds ``ceiling`` instead of computing it.
    """
    n0 = closed_form_sample_size(spec)
    if n0 > ceiling:
        raise CeilingExceededError(
            f"required sample size exceeds ceiling {ceiling} "
            f"(closed form needs about {n0})",
            ceiling,
        )
    hi = min(ceiling, max(4, 2 * n0 + 8))
    while t_test_power(spec.effect, hi, spec.alpha, spec.direction) < spec.target_power:
        if hi >= ceiling:
            raise CeilingExceededError(
                f"required sample size exceeds ceiling {ceiling}", ceiling
            )
        hi = min(ceiling, hi * 2)
    lo = 2
    while lo < hi:
        mid = (lo + hi) // 2
        if t_test_power(spec.effect, mid, spec.alpha, spec.direction) >= spec.target_power:
            hi = mid
        else:
            lo = mid + 1
    return lo


@dataclass(frozen=True)
class PowerPoint:
    sample_size: int
    power: float
    mc_stderr: float

    def to_dict(self) -> dict:
        return {
            "sample_size": int(self.sample_size),
            "power": self.power,
            "mc_stderr": self.mc_stderr,
        }


@dataclass(frozen=True)
class PowerCurve:
    """Estimated power against sample size, with Monte-Carlo standard errors."""

    points: tuple[PowerPoint, ...]
    method: str
    trials: int
    seed: int
    test_id: str
    alpha: float
    direction: str

    def to_csv(self) -> str:
        lines = ["sample_size,power,mc_stderr"]
        for pt in self.points:
            lines.append(f"{pt.sample_size},{pt.power!r},{pt.mc_stderr!r}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "points": [pt.to_dict() for pt in self.points],
            "method": self.method,
            "trials": int(self.trials),
            "seed": int(self.seed),
            "test_id": self.test_id,
            "alpha": self.alpha,
            "direction": self.direction,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PowerCurve":
        return cls(
            points=tuple(
                PowerPoint(int(p["sample_size"]), p["power"], p["mc_stderr"])
                for p in d["points"]
            ),
            method=d["method"],
            trials=int(d["trials"]),
            seed=int(d["seed"]),
            test_id=d["test_id"],
            alpha=d["alpha"],
            direction=d["direction"],
        )


def _validate_power_args(test_id: str, alpha: float, sample_sizes, trials: int, seed: int):
    if test_id not in TEST_IDS:
        raise DataError(f"unknown test_id {test_id!r}; expected one of {TEST_IDS}")
    if not 0.0 < alpha < 1.0:
        raise DataError(f"alpha must be in (0, 1), got {alpha}")
    sizes = [int(n) for n in sample_sizes]
    if not sizes or any(n < 2 for n in sizes):
        raise DataError("sample_sizes must be positive integers >= 2")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise DataError("sample_sizes must be strictly increasing")
    if trials < 100:
        raise DataError(f"trials must be >= 100, got {trials}")
    validate_seed(seed)
    return sizes


def _rejects_for_draws(
    draws: np.ndarray,
    test_id: str,
    alpha: float,
    direction: str,
    rng: np.random.Generator,
    resample_trials: int,
) -> int:
    """Count rejections of the configured test over the rows of ``draws``."""
    count, n = draws.shape
    if test_id == T_TEST:
        # Vectorized fast path; identical decisions to the public t test.
        sd = draws.std(axis=1, ddof=1)
        ok = sd > 0.0
        t = np.zeros(count)
        t[ok] = draws[ok].mean(axis=1) / (sd[ok] / math.sqrt(n))
        p = np.asarray(_t_p_value(t, n - 1, direction))
        p[~ok] = 1.0
        return int((p < alpha).sum())
    rejected = 0
    for row in draws:
        inner_seed = int(rng.integers(0, 2**63)) if test_id in RESAMPLING_TESTS else 0
        config = TestConfig(
            test_id=test_id,
            direction=direction,
            alpha2=alpha,
            trials=resample_trials,
            seed=inner_seed,
        )
        try:
            result = run_test(eu_series_from_diffs(row), config)
        except DegenerateDataError:
            continue
        if result.reject_h0:
            rejected += 1
    return rejected


def retrospective_power_mc(
    mean: float,
    std_dev: float,
    test_id: str = T_TEST,
    alpha: float = 0.05,
    sample_sizes=DEFAULT_SWEEP_SIZES,
    trials: int = DEFAULT_POWER_TRIALS,
    seed: int = 0,
    direction: str = TWO_SIDED,
    resample_trials: int = 500,
) -> PowerCurve:
    """Monte-Carlo power curve for a known normal difference distribution.

    For each sample size, ``trials`` datasets of n normal deviates with the
    given mean and standard deviation are drawn and tested at level alpha;
    power is the rejection fraction. ``resample_trials`` sets the inner B
    when the tested statistic itself resamples.
    """
    if not std_dev > 0.0:
        raise DataError("std_dev must be positive")
    if direction not in DIRECTIONS:
        raise DataError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    sizes = _validate_power_args(test_id, alpha, sample_sizes, trials, seed)
    points = []
    for size_index, n in enumerate(sizes):
        rejected = 0
        for chunk_index, count in iter_chunks(trials, TRIAL_CHUNK):
            rng = substream(seed, size_index, chunk_index)
            draws = rng.normal(mean, std_dev, size=(count, n))
            rejected += _rejects_for_draws(draws, test_id, alpha, direction, rng, resample_trials)
        power = rejected / trials
        stderr = math.sqrt(power * (1.0 - power) / trials)
        points.append(PowerPoint(sample_size=n, power=power, mc_stderr=stderr))
    return PowerCurve(
        points=tuple(points),
        method="monte_carlo",
        trials=trials,
        seed=seed,
        test_id=test_id,
        alpha=alpha,
        direction=direction,
    )


def retrospective_power_bootstrap(
    series: EuSeries,
    test_id: str = T_TEST,
    alpha: float = 0.05,
    sample_sizes=DEFAULT_SWEEP_SIZES,
    trials: int = DEFAULT_POWER_TRIALS,
    seed: int = 0,
    direction: str = TWO_SIDED,
    resample_trials: int = 500,
) -> PowerCurve:
    """Bootstrap power curve from the empirical difference distribution.

    For each target size, ``trials`` resamples of that size are drawn with
    replacement from the observed differences and tested at level alpha.
    """
    if series.n < 10:
        raise DegenerateDataError(
            f"bootstrap power needs at least 10 observed differences, got {series.n}"
        )
    w = series.diffs
    if float(w.std(ddof=1)) == 0.0:
        raise DegenerateDataError("bootstrap power undefined: all differences equal")
    if direction not in DIRECTIONS:
        raise DataError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    sizes = _validate_power_args(test_id, alpha, sample_sizes, trials, seed)
    points = []
    for size_index, n in enumerate(sizes):
        rejected = 0
        for chunk_index, count in iter_chunks(trials, TRIAL_CHUNK):
            rng = substream(seed, size_index, chunk_index)
            draws = w[rng.integers(0, w.size, size=(count, n))]
            rejected += _rejects_for_draws(draws, test_id, alpha, direction, rng, resample_trials)
        power = rejected / trials
        stderr = math.sqrt(power * (1.0 - power) / trials)
        points.append(PowerPoint(sample_size=n, power=power, mc_stderr=stderr))
    return PowerCurve(
        points=tuple(points),
        method="bootstrap",
        trials=trials,
        seed=seed,
        test_id=test_id,
        alpha=alpha,
        direction=direction,
    )


# ---------------------------------------------------------------------------
# p-value sweep


@dataclass(frozen=True)
class NormalPairSpec:
    """Paired generator: a ~ Normal(mean_a, std_a), b ~ Normal(mean_b, std_b)."""

    mean_a: float = 0.5
    std_a: float = 1.0
    mean_b: float = 0.5
    std_b: float = 1.0

    def __post_init__(self):
        if not (self.std_a > 0.0 and self.std_b > 0.0):
            raise DataError("standard deviations must be positive")

    def draw(self, rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
        return rng.normal(self.mean_a, self.std_a, n), rng.normal(self.mean_b, self.std_b, n)

    def label(self) -> str:
        return (
            f"normal({self.mean_a},{self.std_a};{self.mean_b},{self.std_b})"
        )

    def to_dict(self) -> dict:
        return {
            "kind": "normal",
            "mean_a": self.mean_a,
            "std_a": self.std_a,
            "mean_b": self.mean_b,
            "std_b": self.std_b,
        }


@dataclass(frozen=True)
class BetaPairSpec:
    """Paired generator: a ~ Beta(alpha_a, beta_a), b ~ Beta(alpha_b, beta_b)."""

    alpha_a: float
    beta_a: float
    alpha_b: float
    beta_b: float

    def __post_init__(self):
        if min(self.alpha_a, self.beta_a, self.alpha_b, self.beta_b) <= 0.0:
            raise DataError("beta parameters must be positive")

    def draw(self, rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
        return rng.beta(self.alpha_a, self.beta_a, n), rng.beta(self.alpha_b, self.beta_b, n)

    def label(self) -> str:
        return f"beta({self.alpha_a},{self.beta_a};{self.alpha_b},{self.beta_b})"

    def to_dict(self) -> dict:
        return {
            "kind": "beta",
            "alpha_a": self.alpha_a,
            "beta_a": self.beta_a,
            "alpha_b": self.alpha_b,
            "beta_b": self.beta_b,
        }


def generator_from_dict(d: dict):
    kind = d.get("kind")
    if kind == "normal":
        return NormalPairSpec(d["mean_a"], d["std_a"], d["mean_b"], d["std_b"])
    if kind == "beta":
        return BetaPairSpec(d["alpha_a"], d["beta_a"], d["alpha_b"], d["beta_b"])
    raise DataError(f"unknown generator kind {kind!r}")


@dataclass(frozen=True)
class SweepRow:
    sample_size: int
    p_min: float
    p_mean: float
    p_max: float

    def to_dict(self) -> dict:
        return {
            "sample_size": int(self.sample_size),
            "p_min": self.p_min,
            "p_mean": self.p_mean,
            "p_max": self.p_max,
        }


@dataclass(frozen=True)
class SweepTable:
    """p-value ranges per sample size; ``p_values[i]`` holds every iteration."""

    rows: tuple[SweepRow, ...]
    p_values: tuple[tuple[float, ...], ...]
    generator: str
    test_id: str
    iterations: int
    seed: int

    def to_csv(self) -> str:
        lines = ["sample_size,p_min,p_mean,p_max"]
        for row in self.rows:
            lines.append(f"{row.sample_size},{row.p_min!r},{row.p_mean!r},{row.p_max!r}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "rows": [r.to_dict() for r in self.rows],
            "p_values": [list(ps) for ps in self.p_values],
            "generator": self.generator,
            "test_id": self.test_id,
            "iterations": int(self.iterations),
            "seed": int(self.seed),
        }


def pvalue_sweep(
    generator,
    test_id: str = T_TEST,
    sample_sizes=DEFAULT_SWEEP_SIZES,
    iterations: int = 20,
    seed: int = 0,
    trials: int = 1000,
) -> SweepTable:
    """Run the two-sided paired test across a grid of sample sizes.

    For each size and iteration, a fresh paired sample is drawn from the
    generator and tested with delta = 0; the table records the min, mean,
    and max p-value per size. ``trials`` only matters for resampling tests.
    """
    if iterations < 2:
        raise DataError(f"iterations must be >= 2, got {iterations}")
    if test_id not in TEST_IDS:
        raise DataError(f"unknown test_id {test_id!r}; expected one of {TEST_IDS}")
    sizes = [int(n) for n in sample_sizes]
    if not sizes or any(n < 2 for n in sizes):
        raise DataError("sample_sizes must be integers >= 2")
    validate_seed(seed)
    rows = []
    all_ps = []
    for size_index, n in enumerate(sizes):
        ps = []
        for iteration in range(iterations):
            rng = substream(seed, size_index, iteration)
            a, b = generator.draw(rng, n)
            series = eu_series_from_diffs(a - b, source_name=generator.label())
            config = TestConfig(
                test_id=test_id,
                direction=TWO_SIDED,
                trials=trials,
                seed=spawn_seed(seed, size_index, iteration),
            )
            ps.append(run_test(series, config).p_value)
        rows.append(
            SweepRow(
                sample_size=n,
                p_min=float(min(ps)),
                p_mean=float(np.mean(ps)),
                p_max=float(max(ps)),
            )
        )
        all_ps.append(tuple(ps))
    return SweepTable(
        rows=tuple(rows),
        p_values=tuple(all_ps),
        generator=generator.label(),
        test_id=test_id,
        iterations=iterations,
        seed=seed,
    )
