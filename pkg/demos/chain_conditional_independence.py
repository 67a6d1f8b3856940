"""
Indirect edges on a chain
=========================

For X -> Y -> Z every pair is correlated, so marginal scores report a
spurious X-Z edge. Partial scores (pcor, and the distance precision
matrix dpm) condition on the rest of the network and shrink it.
"""

import numpy as np

from dpmnet.data import Dataset
from dpmnet.methods import score_methods

rng = np.random.default_rng(3)
n = 1000
x = rng.standard_normal(n)
y = 0.8 * x + rng.standard_normal(n)
z = 0.8 * y + rng.standard_normal(n)
d = Dataset(np.column_stack([x, y, z]), ("X", "Y", "Z"))

print(f"{'method':<10}{'X-Y':>8}{'Y-Z':>8}{'X-Z':>8}")
for method, m in score_methods(d, ("cor", "pcor", "reg-pcor", "dcor", "dpm", "reg-dpm")).items():
    s = np.abs(m.scores)
    print(f"{method:<10}{s[0, 1]:8.3f}{s[1, 2]:8.3f}{s[0, 2]:8.3f}")

###############################################################################
# The same holds when the links are nonlinear, where pcor loses the signal
# but dpm does not.

y2 = np.sin(2 * x) + 0.3 * rng.standard_normal(n)
z2 = y2**2 + 0.3 * rng.standard_normal(n)
d2 = Dataset(np.column_stack([x, y2, z2]), ("X", "Y", "Z"))
print()
for method, m in score_methods(d2, ("pcor", "dpm")).items():
    s = np.abs(m.scores)
    print(f"{method:<10}{s[0, 1]:8.3f}{s[1, 2]:8.3f}{s[0, 2]:8.3f}")
