"""
Sample distance covariance and distance correlation.

Distance matrices, double centering and the V-statistic estimators, plus
the U-centered (bias corrected) variants used by the Székely-Rizzo partial
distance correlation, and a permutation test.

Distance matrices and their centered forms are plain ``(n, n)`` float
arrays. The flattening of a double-centered matrix (its "V-vector") has
exactly zero mean, which is why ``dcor**2`` equals the Pearson correlation
of two V-vectors.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .data import Dataset, ScoreMatrix
from .exceptions import DimensionError, NumericalError

#: dcov2 values in ``(-NEGATIVE_CLAMP, 0)`` are round-off and clamp to 0.
NEGATIVE_CLAMP = 1e-12


def _vector(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionError(f"expected a 1-D sample vector, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("sample vector contains non-finite values")
    return x


def pairwise_distances(x) -> np.ndarray:
    """Absolute differences ``|x_i - x_j|`` of a univariate sample."""
    x = _vector(x)
    return np.abs(x[:, None] - x[None, :])


def euclidean_distances(z) -> np.ndarray:
    """Euclidean distances between the rows of ``z`` (a 1-D ``z`` is one column).

    Columns are put into a canonical order first, so the result does not
    depend on how the columns of ``z`` were arranged.
    """
    z = np.asarray(z, dtype=float)
    if z.ndim == 1:
        return pairwise_distances(z)
    if z.ndim != 2:
        raise DimensionError(f"expected a 2-D sample block, got shape {z.shape}")
    z = np.ascontiguousarray(z[:, np.lexsort(z[::-1])])
    return squareform(pdist(z, "euclidean"))


def double_center(a: np.ndarray) -> np.ndarray:
    """Subtract row and column means of ``a`` and add back its grand mean."""
    a = np.asarray(a, dtype=float)
    row = a.mean(axis=1)
    # reuse row means for symmetric input so the result is exactly symmetric
    col = row if np.array_equal(a, a.T) else a.mean(axis=0)
    return a - row[:, None] - col[None, :] + a.mean()


def dcov2(ahat: np.ndarray, bhat: np.ndarray) -> float:
    """Squared sample distance covariance of two double-centered matrices."""
    ahat = np.asarray(ahat, dtype=float)
    bhat = np.asarray(bhat, dtype=float)
    if ahat.shape != bhat.shape or ahat.ndim != 2:
        raise DimensionError(f"mismatched centered matrices {ahat.shape} and {bhat.shape}")
    n = ahat.shape[0]
    value = float(np.vdot(ahat, bhat)) / (n * n)
    if value < 0:
        if value < -NEGATIVE_CLAMP:
            raise NumericalError(f"squared distance covariance is negative ({value:.3g})")
        value = 0.0
    return value


def _dcor_centered(ahat: np.ndarray, bhat: np.ndarray) -> float:
    vxy = dcov2(ahat, bhat)
    vxx = dcov2(ahat, ahat)
    vyy = dcov2(bhat, bhat)
    if vxx <= 0 or vyy <= 0:
        return 0.0
    r2 = vxy / np.sqrt(vxx * vyy)
    return float(np.sqrt(min(r2, 1.0)))


def dcor(x, y) -> float:
    """Sample distance correlation in ``[0, 1]``; 0 when either input is constant."""
    x, y = _vector(x), _vector(y)
    if x.shape != y.shape:
        raise DimensionError(f"samples differ in length: {x.size} vs {y.size}")
    if x.size < 2:
        raise DimensionError("need at least 2 samples")
    return _dcor_centered(double_center(pairwise_distances(x)), double_center(pairwise_distances(y)))


def _pair_indices(p: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(p) for j in range(i + 1, p)]


def centered_inner_products(values: np.ndarray, squares: bool = False, threads: int = 1):
    """Inner products of double-centered distance matrices of every column pair.

    Returns ``S`` with ``S[i, j] = sum(Ahat_i * Ahat_j)`` and, if
    ``squares``, ``Q`` with ``Q[i, j] = sum(Ahat_i**2 * Ahat_j**2)``.
    Each task holds at most two centered matrices, so memory stays
    ``O(n**2)`` whatever ``p`` is.
    """
    values = np.asarray(values, dtype=float)
    p = values.shape[1]
    S = np.zeros((p, p))
    Q = np.zeros((p, p)) if squares else None

    def row(i):
        a = double_center(pairwise_distances(values[:, i]))
        a2 = a * a if squares else None
        out = [(i, i, float(np.vdot(a, a)), 0.0)]
        for j in range(i + 1, p):
            b = double_center(pairwise_distances(values[:, j]))
            q = float(np.vdot(a2, b * b)) if squares else 0.0
            out.append((i, j, float(np.vdot(a, b)), q))
        return out

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(row, range(p)))
    else:
        results = [row(i) for i in range(p)]
    for chunk in results:
        for i, j, s, q in chunk:
            S[i, j] = S[j, i] = s
            if squares:
                Q[i, j] = Q[j, i] = q
    return (S, Q) if squares else S


def dcor_matrix(d: Dataset, threads: int = 1) -> ScoreMatrix:
    """Distance correlation of every pair of columns; constant columns score 0."""
    S = centered_inner_products(d.values, threads=threads)
    n2 = d.n * d.n
    v = S / n2
    diag = np.diag(v).copy()
    out = np.zeros_like(v)
    for i, j in _pair_indices(d.p):
        vxy = v[i, j] if v[i, j] > 0 else 0.0
        if diag[i] <= 0 or diag[j] <= 0:
            continue
        out[i, j] = out[j, i] = np.sqrt(min(vxy / np.sqrt(diag[i] * diag[j]), 1.0))
    return ScoreMatrix(out, d.names, "dcor")


def u_center(a: np.ndarray) -> np.ndarray:
    """U-centered distance matrix (zero diagonal); requires ``n >= 4``."""
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if n < 4:
        raise DimensionError(f"U-centering needs n >= 4, got n={n}")
    row = a.sum(axis=1) / (n - 2)
    col = row if np.array_equal(a, a.T) else a.sum(axis=0) / (n - 2)
    total = a.sum() / ((n - 1) * (n - 2))
    out = a - row[:, None] - col[None, :] + total
    np.fill_diagonal(out, 0.0)
    return out


def u_product(atil: np.ndarray, btil: np.ndarray) -> float:
    """Unbiased inner product ``sum(A * B) / (n (n - 3))`` of U-centered matrices."""
    atil = np.asarray(atil, dtype=float)
    btil = np.asarray(btil, dtype=float)
    if atil.shape != btil.shape or atil.ndim != 2:
        raise DimensionError(f"mismatched U-centered matrices {atil.shape} and {btil.shape}")
    n = atil.shape[0]
    if n < 4:
        raise DimensionError(f"U-centered products need n >= 4, got n={n}")
    return float(np.vdot(atil, btil)) / (n * (n - 3))


def bias_corrected_dcor2(atil: np.ndarray, btil: np.ndarray) -> float:
    """Bias corrected squared distance correlation R*; may be negative.

    Returns 0 when either self product is not positive.
    """
    ab = u_product(atil, btil)
    aa = u_product(atil, atil)
    bb = u_product(btil, btil)
    if aa <= 0 or bb <= 0:
        return 0.0
    return ab / np.sqrt(aa * bb)


def permutation_pvalue(x, y, B: int = 199, seed: int = 0) -> float:
    """Add-one permutation p-value for ``dcor(x, y)``.

    Permutation ``b`` draws from its own generator spawned from ``seed``,
    so the result is independent of evaluation order.
    """
    x, y = _vector(x), _vector(y)
    if x.shape != y.shape:
        raise DimensionError(f"samples differ in length: {x.size} vs {y.size}")
    if B < 1:
        raise ValueError("need at least one permutation")
    a = double_center(pairwise_distances(x))
    b = double_center(pairwise_distances(y))
    # relabelling the samples of y permutes rows and columns of its centered matrix
    observed = _dcor_centered(a, b)
    hits = 0
    for child in np.random.SeedSequence(seed).spawn(B):
        perm = np.random.default_rng(child).permutation(x.size)
        if _dcor_centered(a, b[np.ix_(perm, perm)]) >= observed:
            hits += 1
    return (1 + hits) / (B + 1)
