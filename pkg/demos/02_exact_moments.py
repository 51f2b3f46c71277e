"""Exact moment sequences and their Monte Carlo confirmation.

From a zero start, the mean, variance and martingale second moments of an
INAR(p) process have closed forms in the scalar companion-power weights.
This script tabulates them for the unit-root model with coefficients
(0.5, 0.5) and Poisson(1) innovations, checks the per-step mean limit
mu/phi'(1) = 2/3, and compares everything against a simulated ensemble.
"""

import numpy as np

import inarlab as il

spec = il.validate([0.5, 0.5], il.Poisson(1.0))
table = il.moment_table(spec, 100)

print("k     E X_k      Var X_k    E M_k^2")
for k in (1, 2, 3, 5, 10, 50, 100):
    print(f"{k:<4d}  {table.mean[k - 1]:<9.4f}  {table.variance[k - 1]:<9.4f}  {table.m2[k - 1]:.4f}")

lim = il.mean_limit(spec)
print(f"\nper-step mean limit: {lim.value:.6f} (= mu / phi'(1) = 1/1.5)")
print(f"E X_k / k at k=10000: {il.mean_exact(spec, 10_000)[-1] / 10_000:.6f}")

report = il.growth_check(spec, 10_000)
print(f"growth orders: max E X_k / k = {report.max_mean_over_k:.4f}, "
      f"max E X_k^2 / k^2 = {report.max_second_moment_over_k2:.4f}, "
      f"max E M_k^2 / k = {report.max_m2_over_k:.4f}")

print("\nMonte Carlo agreement (20000 paths, 4-standard-error flags):")
for row in il.moment_mc_check(spec, [1, 5, 20], reps=20_000, base_seed=42):
    print(
        f"  k={row.k:<3d} mean {row.sample_mean:.4f} vs {row.exact_mean:.4f} "
        f"[{'ok' if row.mean_ok else 'OFF'}]  variance {row.sample_variance:.3f} "
        f"vs {row.exact_variance:.3f} [{'ok' if row.variance_ok else 'OFF'}]"
    )

# The two variance derivations are algebraically equal; verify numerically.
gap = np.max(np.abs(il.var_exact(spec, 200) - il.var_from_martingale_sums(spec, 200)))
print(f"\nmax gap between the two variance formulations (k <= 200): {gap:.2e}")
