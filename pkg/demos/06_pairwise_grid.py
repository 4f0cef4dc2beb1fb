"""All-pairs comparison of several systems with Bonferroni correction.

Six synthetic systems share the same evaluation units; two of them are
genuinely better. Every unordered pair is tested, the p-values are jointly
Bonferroni-adjusted (k = 15 pairs here), and the significance matrix is
ready for heatmap rendering.
"""
import numpy as np

import paircompare as pc

rng = np.random.default_rng(6)
n = 200
difficulty = rng.normal(0.0, 1.0, n)  # shared per-EU difficulty

systems = {}
for name, lift in [("base", 0.0), ("tuned", 0.05), ("big", 0.45),
                   ("bigger", 0.50), ("rerank", 0.02), ("ablate", -0.03)]:
    systems[name] = difficulty + lift + rng.normal(0.0, 0.25, n)

config = pc.TestConfig(test_id="wilcoxon_signed_rank", alpha2=0.05, seed=0)
grid = pc.pairwise_grid(systems, config)
print(f"{len(systems)} systems -> {grid.n_comparisons} comparisons, "
      f"Bonferroni family k = {grid.n_comparisons}\n")

names = grid.system_names
width = max(len(s) for s in names)
print(" " * width, "  ".join(f"{s:>8s}" for s in names))
for i, row_name in enumerate(names):
    cells = []
    for j in range(len(names)):
        if i == j:
            cells.append(" " * 8)
        else:
            mark = "*" if grid.significant[i, j] else " "
            cells.append(f"{grid.adjusted_p[i, j]:7.3f}{mark}")
    print(f"{row_name:>{width}s}", "  ".join(cells))
print("\n(* = significant at alpha2 = 0.05 after Bonferroni adjustment)")

print("\nheatmap-ready rows (first five):")
for row in grid.cell_rows()[:5]:
    print(" ", row)
