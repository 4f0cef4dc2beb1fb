"""Estimate practical significance with the four effect size indices.

A tiny p-value says a difference is unlikely under H0; the effect size says
how large the difference actually is. The demo also shows how the EU size
changes standardized indices: averaging within an EU shrinks the standard
deviation, so the same mean difference looks bigger.
"""
import numpy as np

import paircompare as pc

rng = np.random.default_rng(2)
w = rng.normal(0.02, 0.08, 200)
series = pc.eu_series_from_diffs(w)

print("difference sample: mean %.4f, sd %.4f, n=%d\n" % (w.mean(), w.std(ddof=1), len(w)))
for est in pc.estimate(series, pc.EFFECT_SIZE_INDICES):
    kind = "standardized" if est.standardized else "raw scale"
    print(f"{est.index:16s} = {est.value:+.4f}   ({kind}, n={est.n})")

# The printed small-sample correction for Hedges' g vanishes at n = 3.
tiny = pc.eu_series_from_diffs(np.array([0.5, 1.5, 2.5]))
print(f"\nat n=3: cohens_d = {pc.cohens_d(tiny).value:.2f} "
      f"but hedges_g = {pc.hedges_g(tiny).value:.2f} (correction factor is zero)")

# Hodges-Lehmann with and without the classical self-pairs.
skewed = pc.eu_series_from_diffs(np.array([0.0, 0.0, 10.0]))
print(f"HL excluding i=j pairs: {pc.hodges_lehmann(skewed).value}")
print(f"HL including i=j pairs: "
      f"{pc.hodges_lehmann(skewed, include_self_pairs=True).value}")

# EU size and standardized effect size.
print("\n|cohen's d| by EU size (same underlying scores):")
rng2 = np.random.default_rng(20)
a = rng2.normal(0.55, 0.30, 3000)
b = rng2.normal(0.50, 0.30, 3000)
scores = pc.PairedScores(a=a, b=b)
for m in (1, 5, 10, 25):
    series_m = pc.aggregate_to_eus(scores, pc.EuConfig(eu_size=m))
    d = pc.cohens_d(series_m).value
    print(f"  m={m:3d}: n={series_m.n:5d}, d = {d:+.3f}")
