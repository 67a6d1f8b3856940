"""Small data generators shared by the tests."""
import numpy as np

from dpmnet.data import Dataset


def gaussian_chain(n, seed, coef=0.8):
    """X -> Y -> Z with unit-variance noise."""
    r = np.random.default_rng(seed)
    x = r.standard_normal(n)
    y = coef * x + r.standard_normal(n)
    z = coef * y + r.standard_normal(n)
    return Dataset(np.column_stack([x, y, z]), ("X", "Y", "Z"))
