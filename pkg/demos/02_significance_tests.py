"""Run every paired significance test on one sample.

Shows the shared conventions: the sample tested is d = w - delta, the
direction names the alternative, and H0 is rejected iff p < alpha2.
"""
import numpy as np

import paircompare as pc

rng = np.random.default_rng(1)
w = rng.normal(0.03, 0.10, 120)  # per-EU differences with a small real effect
series = pc.eu_series_from_diffs(w, source_name="simulated diffs")

print(f"n = {series.n}, mean(w) = {w.mean():+.4f}, sd(w) = {w.std(ddof=1):.4f}\n")
print(f"{'test':22s} {'statistic':>12s} {'p-value':>10s}  decision")
for test_id in pc.TEST_IDS:
    config = pc.TestConfig(test_id=test_id, direction="two_sided", delta=0.0,
                           alpha2=0.05, trials=10_000, seed=42)
    result = pc.run_test(series, config)
    decision = "reject H0" if result.reject_h0 else "keep H0"
    print(f"{test_id:22s} {result.statistic_value:12.4f} {result.p_value:10.5f}  {decision}")

# Direction and delta: is A better than B by at least 0.01?
print("\nright-sided test of 'mean difference exceeds 0.01':")
config = pc.TestConfig(test_id="t_test", direction="right", delta=0.01)
result = pc.run_test(series, config)
print(f"t = {result.statistic_value:.4f}, p = {result.p_value:.5f}, "
      f"CI for mean(w): [{result.confidence_interval[0]:.4f}, "
      f"{result.confidence_interval[1]:.4f}]")

# Exact small-sample behavior: 2^n enumeration, no Monte-Carlo noise.
small = pc.eu_series_from_diffs(np.array([0.8, 1.3, 2.1, -0.4, 0.9]))
exact = pc.run_test(small, pc.TestConfig(test_id="permutation", direction="right"))
print(f"\nn=5 permutation test: p = {exact.p_value} ({exact.method})")
