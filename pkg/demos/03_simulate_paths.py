"""Simulate integer paths by binomial thinning with reproducible streams.

Every path is a deterministic function of (spec, horizon, stream); streams
are keyed by (base_seed, stream_index), which is what makes ensembles
reproducible regardless of scheduling. The martingale differences
M_k = X_k - E(X_k | past) can be recorded alongside the counts; they are
the driving noise of the regression representation of the process.
"""

import numpy as np

import inarlab as il

spec = il.validate([0.5, 0.5], il.Poisson(1.0))

path = il.simulate_path(spec, 30, il.RngStream(base_seed=7, stream_index=0), record_mdiffs=True)
print("first 30 counts:", path.counts.tolist())
print("martingale differences:", np.array_str(path.mdiffs[:10], precision=3))

again = il.simulate_path(spec, 30, il.RngStream(7, 0))
print("bit-identical replay:", bool(np.array_equal(path.counts, again.counts)))

# Unit-root paths grow linearly on average; scaled views X_{floor(nt)}/n
# are what converge to the squared Bessel limit.
long_path = il.simulate_path(spec, 5000, il.RngStream(7, 1))
for t in (0.25, 0.5, 1.0):
    print(f"scaled value at t={t}: {il.scaled_value(long_path, 5000, t):.4f}")

# The one-step conditional mean is linear in the last p counts.
estimate = il.conditional_mean_check(spec, history=[10, 20], reps=50_000, rng=il.RngStream(7, 2))
print(f"conditional mean from history (10, 20): {estimate:.4f} (exact 16.0)")

# Ensembles parallelize across replicates with identical output.
values = il.simulate_ensemble(spec, n=200, t_grid=[1.0], reps=500, base_seed=7, workers=2)
print(f"ensemble mean of X^n_1 at n=200: {values[:, 0].mean():.4f} (limit mean 2/3)")
