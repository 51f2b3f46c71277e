"""Classify INAR(p) models and inspect the companion-matrix eigenstructure.

The stability regime of an INAR(p) model is read off the coefficient sum:
below 1 the mean settles to a constant, at 1 it grows linearly, above 1 it
grows geometrically. Equivalently, the Perron root of the companion matrix
sits below, at, or above 1. This script classifies a few models, prints the
closed-form dominant eigenvectors, and shows the geometric convergence of
scaled matrix powers to the rank-one projection.
"""

import numpy as np

import inarlab as il

for alphas in ([0.3, 0.2], [0.5, 0.5], [0.3, 0.9], [0.0, 0.5, 0.0, 0.5]):
    spec = il.validate(alphas)
    cls = il.classify(spec)
    print(
        f"alphas={alphas}: {cls.regime.value:9s} sum={cls.alpha_sum:.3f} "
        f"rho={cls.rho:.6f} d={cls.d} primitive={cls.primitive}"
    )

print()
spec = il.validate([0.5, 0.5])
data = il.spectral_data(spec)
print("unit-root pair alphas=(0.5, 0.5):")
print("  u =", data.u, " (right eigenvector, sums to 1)")
print("  v =", data.v, " (left eigenvector, u.v = 1)")
print("  projection Pi = u v^T =")
print(np.array_str(data.pi, precision=6))
print("  second eigenvalue modulus:", data.lambda2_mod)

# The distance |rho^-n A^n - Pi| shrinks geometrically at rate |lambda_2|/rho.
profile = il.convergence_profile(spec, N=20)
print("\nconvergence of scaled powers (rate fitted:", f"{profile.r:.4f})")
for n in (1, 2, 5, 10, 20):
    print(f"  n={n:2d}  |rho^-n A^n - Pi| = {profile.norms[n - 1]:.3e}")

# An imprimitive model splits into independent primitive submodels.
subs = il.decompose(il.validate([0.0, 0.5, 0.0, 0.5]))
print("\nalphas=(0, 0.5, 0, 0.5) decomposes into", len(subs), "copies of", subs[0].alphas)
