"""How p-values behave as the sample grows.

With equal populations (H0 true) p-values stay spread over (0,1) no matter
how large n gets. With any real difference (H0 false) they collapse toward
zero — eventually everything is "significant", which is exactly why effect
size matters. A low-variance beta pair collapses much faster than a noisy
normal pair even though its median gap is tiny.
"""
import paircompare as pc

SIZES = (30, 100, 500, 2500, 10000)


def show(table: pc.SweepTable):
    print(f"  generator {table.generator}, test {table.test_id}, "
          f"{table.iterations} iterations per size")
    print(f"  {'n':>6s} {'p_min':>9s} {'p_mean':>9s} {'p_max':>9s}")
    for row in table.rows:
        print(f"  {row.sample_size:6d} {row.p_min:9.4f} {row.p_mean:9.4f} {row.p_max:9.4f}")
    print()


print("H0 true: identical normal marginals")
show(pc.pvalue_sweep(pc.NormalPairSpec(0.5, 1.0, 0.5, 1.0),
                     test_id="t_test", sample_sizes=SIZES, iterations=20, seed=10))

print("H0 false: means differ by 0.05, noisy (variance of w is 2)")
show(pc.pvalue_sweep(pc.NormalPairSpec(0.5, 1.0, 0.45, 1.0),
                     test_id="t_test", sample_sizes=SIZES, iterations=20, seed=11))

print("H0 false, low variance: Beta(5,5) vs Beta(5.2,4.8) "
      "(median gap ~0.02, Var(a-b) ~0.045)")
show(pc.pvalue_sweep(pc.BetaPairSpec(5.0, 5.0, 5.2, 4.8),
                     test_id="wilcoxon_signed_rank",
                     sample_sizes=SIZES, iterations=20, seed=12))
