"""
Partial distance correlation.

Two variants are provided:

``residual``
    Regress the V-vectors of ``x`` and ``y`` on the V-vector of the
    conditioning block ``z`` (least squares with intercept) and correlate
    the residuals.
``sr``
    The Székely-Rizzo projection formula on bias corrected distance
    correlations of U-centered matrices.

For network scoring, each pair is conditioned on the block of all
remaining variables taken as one multivariate variable (Euclidean
distances between its rows).
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Literal

import numpy as np

from .data import Dataset, ScoreMatrix
from .dcov import (
    _vector,
    bias_corrected_dcor2,
    double_center,
    euclidean_distances,
    pairwise_distances,
    u_center,
)
from .exceptions import DimensionError

Variant = Literal["residual", "sr"]
VARIANTS = ("residual", "sr")

#: Residual vectors shorter than this fraction of their input count as zero.
ZERO_RESIDUAL = 1e-12
#: Projection denominators at or below this value yield a score of 0.
SR_DENOMINATOR_EPS = 1e-12

CONDITIONING_NOTE = (
    "each pair conditioned on all remaining variables as one multivariate "
    "block (Euclidean row distances); full-order analog chosen by dpmnet"
)


def _block(z, n: int) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.ndim == 1:
        z = z[:, None]
    if z.ndim != 2 or z.shape[0] != n:
        raise DimensionError(f"conditioning block must have {n} rows, got shape {z.shape}")
    if z.shape[1] < 1:
        raise DimensionError("conditioning block has no columns")
    if not np.all(np.isfinite(z)):
        raise ValueError("conditioning block contains non-finite values")
    return z


def _check_pair(x, y):
    x, y = _vector(x), _vector(y)
    if x.shape != y.shape:
        raise DimensionError(f"samples differ in length: {x.size} vs {y.size}")
    return x, y


def regression_residual(v: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Residual of the least squares fit ``v ~ 1 + c`` via the 2x2 normal equations."""
    m = v.size
    sc, scc = c.sum(), float(np.dot(c, c))
    sv, scv = v.sum(), float(np.dot(c, v))
    det = m * scc - sc * sc
    if det <= 0:
        # c is constant: only the intercept is identifiable
        return v - sv / m
    slope = (m * scv - sc * sv) / det
    intercept = (sv - slope * sc) / m
    return v - intercept - slope * c


def _residual_correlation(ahat, bhat, chat) -> float:
    va, vb, vc = ahat.ravel(order="F"), bhat.ravel(order="F"), chat.ravel(order="F")
    ra = regression_residual(va, vc)
    rb = regression_residual(vb, vc)
    na, nb = np.linalg.norm(ra), np.linalg.norm(rb)
    if na <= ZERO_RESIDUAL * np.linalg.norm(va) or nb <= ZERO_RESIDUAL * np.linalg.norm(vb):
        return 0.0
    ra = ra - ra.mean()
    rb = rb - rb.mean()
    denom = np.linalg.norm(ra) * np.linalg.norm(rb)
    if denom == 0:
        return 0.0
    return float(np.clip(np.dot(ra, rb) / denom, -1.0, 1.0))


def pdcor_residual(x, y, z) -> float:
    """Correlation of the V-vector residuals of ``x`` and ``y`` after regression on ``z``.

    Parameters
    ----------
    x, y : array_like, shape (n,)
    z : array_like, shape (n,) or (n, k)
        Conditioning block; rows are samples.

    Returns
    -------
    float in ``[-1, 1]``; 0 if either residual vector vanishes.
    """
    x, y = _check_pair(x, y)
    z = _block(z, x.size)
    if x.size < 3:
        raise DimensionError(f"need at least 3 samples, got n={x.size}")
    return _residual_correlation(
        double_center(pairwise_distances(x)),
        double_center(pairwise_distances(y)),
        double_center(euclidean_distances(z)),
    )


def _sr_from_u(atil, btil, ctil) -> float:
    rxy = bias_corrected_dcor2(atil, btil)
    rxz = bias_corrected_dcor2(atil, ctil)
    ryz = bias_corrected_dcor2(btil, ctil)
    fx = 1.0 - rxz * rxz
    fy = 1.0 - ryz * ryz
    if fx <= SR_DENOMINATOR_EPS or fy <= SR_DENOMINATOR_EPS:
        return 0.0
    return float(np.clip((rxy - rxz * ryz) / np.sqrt(fx * fy), -1.0, 1.0))


def pdcor_sr(x, y, z) -> float:
    """Székely-Rizzo partial distance correlation of ``x`` and ``y`` given ``z``.

    ``(R*(x,y) - R*(x,z) R*(y,z)) / sqrt((1 - R*(x,z)**2) (1 - R*(y,z)**2))``
    with ``R*`` the bias corrected squared distance correlation. ``z`` is
    treated as a single (possibly multivariate) variable.
    """
    x, y = _check_pair(x, y)
    z = _block(z, x.size)
    return _sr_from_u(
        u_center(pairwise_distances(x)),
        u_center(pairwise_distances(y)),
        u_center(euclidean_distances(z)),
    )


def pdcor_matrix(d: Dataset, variant: Variant = "residual", threads: int = 1) -> ScoreMatrix:
    """Partial distance correlation of every pair given all other variables."""
    return pdcor_matrices(d, (variant,), threads=threads)[variant]


def pdcor_matrices(d: Dataset, variants=VARIANTS, threads: int = 1) -> dict[str, ScoreMatrix]:
    """Score matrices for several variants, sharing the conditioning distances.

    Every entry equals the corresponding scalar function applied to the
    column pair and the remaining columns.
    """
    variants = tuple(variants)
    for v in variants:
        if v not in VARIANTS:
            raise ValueError(f"unknown pdcor variant {v!r}; expected one of {VARIANTS}")
    p, n = d.p, d.n
    if p < 3:
        raise DimensionError(f"partial distance correlation needs p >= 3, got p={p}")
    if "sr" in variants and n < 4:
        raise DimensionError(f"Székely-Rizzo variant needs n >= 4, got n={n}")
    x = d.values
    dist = [pairwise_distances(x[:, i]) for i in range(p)]
    want_res, want_sr = "residual" in variants, "sr" in variants
    hat = [double_center(a) for a in dist] if want_res else None
    til = [u_center(a) for a in dist] if want_sr else None

    def pair(ij):
        i, j = ij
        cz = euclidean_distances(np.delete(x, (i, j), axis=1))
        res = _residual_correlation(hat[i], hat[j], double_center(cz)) if want_res else 0.0
        sr = _sr_from_u(til[i], til[j], u_center(cz)) if want_sr else 0.0
        return i, j, res, sr

    pairs = [(i, j) for i in range(p) for j in range(i + 1, p)]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(pair, pairs))
    else:
        results = [pair(ij) for ij in pairs]
    out = {v: np.zeros((p, p)) for v in variants}
    for i, j, res, sr in results:
        for v, val in (("residual", res), ("sr", sr)):
            if v in out:
                out[v][i, j] = out[v][j, i] = val
    meta = {"conditioning": CONDITIONING_NOTE}
    return {v: ScoreMatrix(out[v], d.names, f"pdcor-{v}", meta) for v in variants}
