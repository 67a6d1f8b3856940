"""
Baseline scorers outside the correlation family: ARACNE and network deconvolution.
"""
from __future__ import annotations

import math

import numpy as np

from .data import Dataset, ScoreMatrix, symmetrize
from .dcov import _vector
from .exceptions import DimensionError
from .precision import correlation_gram

DEFAULT_ND_BETA = 0.9
DEFAULT_DPI_EPSILON = 0.0


def default_bins(n: int) -> int:
    """Equal-width bin count ``ceil(sqrt(n / 5))``, at least 2."""
    return max(2, math.ceil(math.sqrt(n / 5)))


def mutual_information(x, y, bins: int | None = None) -> float:
    """Plug-in mutual information (nats) of an equal-width 2-D histogram.

    The sum over cells is taken in sorted order, so swapping ``x`` and
    ``y`` gives a bit-identical result.
    """
    x, y = _vector(x), _vector(y)
    if x.shape != y.shape:
        raise DimensionError(f"samples differ in length: {x.size} vs {y.size}")
    n = x.size
    bins = default_bins(n) if bins is None else int(bins)
    if bins < 2:
        raise ValueError(f"need at least 2 bins, got {bins}")
    if n < bins:
        raise DimensionError(f"need at least as many samples as bins ({n} < {bins})")
    counts, _, _ = np.histogram2d(x, y, bins=bins)
    px = counts.sum(axis=1) / n
    py = counts.sum(axis=0) / n
    pxy = counts / n
    i, j = np.nonzero(counts)
    p = pxy[i, j]
    terms = p * np.log(p / (px[i] * py[j]))
    mi = float(np.sum(np.sort(terms)))
    return max(mi, 0.0)


def mi_matrix(d: Dataset, bins: int | None = None) -> np.ndarray:
    """Symmetric matrix of pairwise mutual information with zero diagonal."""
    bins = default_bins(d.n) if bins is None else bins
    p = d.p
    mi = np.zeros((p, p))
    for i in range(p):
        for j in range(i + 1, p):
            mi[i, j] = mi[j, i] = mutual_information(d.values[:, i], d.values[:, j], bins)
    return mi


def dpi_prune(mi: np.ndarray, dpi_epsilon: float = DEFAULT_DPI_EPSILON) -> np.ndarray:
    """Zero every edge that is the weakest of some triangle (data processing inequality).

    Edge ``(i, j)`` is removed when ``mi[i, j] <= min(mi[i, k], mi[j, k]) - eps``
    for some third node ``k``; tied edges are all removed.
    """
    mi = np.asarray(mi, dtype=float)
    if dpi_epsilon < 0:
        raise ValueError("dpi_epsilon must be nonnegative")
    p = mi.shape[0]
    out = mi.copy()
    if p < 3:
        return out
    # weakest[i, j, k] = min(mi[i, k], mi[j, k])
    weakest = np.minimum(mi[:, None, :], mi[None, :, :])
    idx = np.arange(p)
    weakest[idx, :, idx] = -np.inf
    weakest[:, idx, idx] = -np.inf
    strongest_path = weakest.max(axis=2)
    remove = mi <= strongest_path - dpi_epsilon
    np.fill_diagonal(remove, False)
    out[remove] = 0.0
    return out


def aracne_matrix(d: Dataset, bins: int | None = None, dpi_epsilon: float = DEFAULT_DPI_EPSILON) -> ScoreMatrix:
    """ARACNE scores: mutual information with DPI pruning."""
    bins = default_bins(d.n) if bins is None else int(bins)
    if bins < 2:
        raise ValueError(f"need at least 2 bins, got {bins}")
    scores = dpi_prune(mi_matrix(d, bins), dpi_epsilon)
    return ScoreMatrix(scores, d.names, "aracne", {"bins": bins, "dpi_epsilon": float(dpi_epsilon)})


def deconvolution_scale(eigenvalues: np.ndarray, beta: float = DEFAULT_ND_BETA) -> float:
    """Scale ``gamma`` that maps the extreme eigenvalue to magnitude ``beta``.

    The largest ``gamma`` with ``max |gamma l / (1 + gamma l)| <= beta``;
    returns 1 for an all-zero spectrum.
    """
    if not 0 < beta < 1:
        raise ValueError(f"beta must lie in (0, 1), got {beta}")
    lam_pos = max(float(np.max(eigenvalues)), 0.0)
    lam_neg = -min(float(np.min(eigenvalues)), 0.0)
    m = max(lam_pos * (1 - beta) / beta, lam_neg * (1 + beta) / beta)
    return 1.0 if m == 0 else 1.0 / m


def deconvolve(s: np.ndarray, beta: float = DEFAULT_ND_BETA) -> np.ndarray:
    """Network deconvolution of a symmetric similarity matrix (diagonal kept).

    Eigenvalues ``l`` of ``s`` map to ``gamma l / (1 + gamma l)``.
    """
    s = symmetrize(s)
    if not np.any(s):
        return np.zeros_like(s)
    lam, U = np.linalg.eigh(s)
    gamma = deconvolution_scale(lam, beta)
    mapped = gamma * lam / (1.0 + gamma * lam)
    return symmetrize((U * mapped) @ U.T)


def nd_matrix(d: Dataset, beta: float = DEFAULT_ND_BETA) -> ScoreMatrix:
    """Network deconvolution of the correlation matrix (diagonal zeroed before and after)."""
    s = correlation_gram(d).entries.copy()
    np.fill_diagonal(s, 0.0)
    out = deconvolve(s, beta)
    np.fill_diagonal(out, 0.0)
    return ScoreMatrix(out, d.names, "nd", {"nd_beta": float(beta), "nd_input": "correlation matrix, zero diagonal"})
