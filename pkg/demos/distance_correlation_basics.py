"""
Distance correlation in a few lines
===================================

Pearson correlation only sees linear trends. Distance correlation is zero
only under independence, so it also picks up a parabola.
"""

import numpy as np

from dpmnet.dcov import dcor, double_center, pairwise_distances, permutation_pvalue

rng = np.random.default_rng(0)
x = rng.uniform(-1, 1, 300)
y = x**2 + 0.05 * rng.standard_normal(300)

print(f"Pearson r      = {np.corrcoef(x, y)[0, 1]:+.3f}")
print(f"distance corr. = {dcor(x, y):.3f}")
print(f"permutation p  = {permutation_pvalue(x, y, B=199, seed=1):.3f}")

###############################################################################
# The double-centered distance matrix has zero row and column sums; its
# flattening is the "V-vector". Squared distance correlation is the plain
# Pearson correlation of two V-vectors.

A = double_center(pairwise_distances(x))
B = double_center(pairwise_distances(y))
print("max |row sum| of A:", np.abs(A.sum(axis=1)).max())
r_v = np.corrcoef(A.ravel(), B.ravel())[0, 1]
print(f"dcor^2 = {dcor(x, y) ** 2:.12f}, corr(V_A, V_B) = {r_v:.12f}")
