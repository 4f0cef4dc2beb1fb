"""Prospective and retrospective power analysis.

Prospective: how many evaluation units are needed before collecting data.
Retrospective: estimated power against sample size, either simulating from
a normal difference distribution (Monte Carlo) or resampling the observed
differences (bootstrap).
"""
import numpy as np

import paircompare as pc

# --- prospective: plan the test-set size -----------------------------------
spec = pc.ProspectiveSpec(expected_mean_diff=0.5, expected_std_dev=1.0,
                          target_power=0.8, alpha=0.05, direction="two_sided")
closed = pc.closed_form_sample_size(spec)
refined = pc.prospective_sample_size(spec)
print(f"standardized effect e = {spec.effect:.2f}")
print(f"closed-form (normal approximation) n = {closed}")
print(f"noncentral-t refined n = {refined}")
print(f"exact t power at the refined n: {pc.t_test_power(spec.effect, refined, 0.05):.4f}")

# --- retrospective, Monte Carlo --------------------------------------------
print("\nMonte-Carlo power curve (normal differences, mean 0.5, sd 1.0):")
curve = pc.retrospective_power_mc(mean=0.5, std_dev=1.0, test_id="t_test",
                                  alpha=0.05, sample_sizes=[10, 20, 34, 60, 100],
                                  trials=2000, seed=3)
for pt in curve.points:
    bar = "#" * int(round(40 * pt.power))
    print(f"  n={pt.sample_size:4d}  power={pt.power:.3f} +/- {pt.mc_stderr:.3f}  {bar}")

# --- retrospective, bootstrap ----------------------------------------------
rng = np.random.default_rng(4)
observed = pc.eu_series_from_diffs(rng.normal(0.25, 1.0, 150))
print("\nbootstrap power curve from 150 observed differences:")
boot = pc.retrospective_power_bootstrap(observed, test_id="t_test", alpha=0.05,
                                        sample_sizes=[50, 100, 200, 400],
                                        trials=1000, seed=5)
for pt in boot.points:
    bar = "#" * int(round(40 * pt.power))
    print(f"  n={pt.sample_size:4d}  power={pt.power:.3f} +/- {pt.mc_stderr:.3f}  {bar}")

print("\nCSV export (for plotting):")
print(boot.to_csv())
