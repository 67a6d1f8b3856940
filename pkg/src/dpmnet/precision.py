"""
Correlation and distance Gram matrices, shrinkage, and precision scores.

The Distance Precision Matrix (DPM) inverts the Gram matrix of the
unit-normalized V-vectors of all variables, which is exactly the matrix of
squared distance correlations. Its regularized form shrinks that matrix
towards the identity with the Schäfer-Strimmer intensity before
inversion. Partial scores are ``-L_ij / sqrt(L_ii L_jj)`` of the inverse.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy import linalg

from .data import Dataset, ScoreMatrix, symmetrize
from .dcov import centered_inner_products
from .exceptions import ConstantVariableError, SingularMatrixError

GramSource = Literal["correlation", "dcor2"]
InvertMode = Literal["naive", "shrinkage"]

#: Naive inversion requires the smallest eigenvalue to exceed this.
MIN_EIGENVALUE = 1e-10

PRECISION_METHODS = ("cor", "pcor", "reg-pcor", "dpm", "reg-dpm")


@dataclass(frozen=True)
class GramMatrix:
    """Unit-diagonal similarity matrix plus what shrinkage needs to know.

    ``cross_var[i, j]`` is the mean squared deviation of the per-observation
    cross products ``w_k = u_ki u_kj`` of the standardized observation
    columns ``u`` (rows of the data for ``correlation``, entries of the
    centered distance matrices for ``dcor2``), and ``n_obs`` is the number
    of those observations.
    """

    entries: np.ndarray
    names: tuple[str, ...]
    source: GramSource
    n_obs: int
    cross_var: np.ndarray | None = None

    @property
    def p(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class PrecisionMatrix:
    entries: np.ndarray
    names: tuple[str, ...]
    regularized: bool = False
    shrinkage_intensity: float | None = None
    source: str = ""
    metadata: dict = field(default_factory=dict)


def correlation_gram(d: Dataset) -> GramMatrix:
    """Pearson correlation matrix of the columns of ``d``."""
    x = d.values
    n = d.n
    sd = x.std(axis=0, ddof=1)
    for name, s in zip(d.names, sd):
        if not s > 0:
            raise ConstantVariableError(name)
    u = (x - x.mean(axis=0)) / sd
    r = symmetrize(u.T @ u / (n - 1))
    np.fill_diagonal(r, 1.0)
    # w_kij = u_ki u_kj has mean (n - 1) r_ij / n
    u2 = u * u
    wbar = r * (n - 1) / n
    cross_var = np.maximum(symmetrize(u2.T @ u2 / n) - wbar * wbar, 0.0)
    return GramMatrix(r, d.names, "correlation", n, cross_var)


def dcor2_gram(d: Dataset, threads: int = 1) -> GramMatrix:
    """Matrix of squared distance correlations (Gram of unit-normalized V-vectors).

    Pairs are accumulated from two centered matrices at a time, so the
    ``n**2``-long V-vectors of all variables are never held together.
    """
    n = d.n
    S, Q = centered_inner_products(d.values, squares=True, threads=threads)
    diag = np.diag(S).copy()
    for name, s in zip(d.names, diag):
        if not s > 0:
            raise ConstantVariableError(name, f"variable {name!r} has zero distance variance")
    norm = np.sqrt(diag)
    r = S / np.outer(norm, norm)
    r = np.clip(symmetrize(r), 0.0, 1.0)
    np.fill_diagonal(r, 1.0)
    # standardized V-vectors u_i = V_i / sqrt(|V_i|^2 / (N - 1)) with N = n^2 entries
    N = n * n
    wbar = r * (N - 1) / N
    mean_w2 = (N - 1) ** 2 * Q / np.outer(diag, diag) / N
    cross_var = np.maximum(symmetrize(mean_w2) - wbar * wbar, 0.0)
    return GramMatrix(r, d.names, "dcor2", N, cross_var)


def shrinkage_intensity(g: GramMatrix, effective_n: int | None = None) -> float:
    """Schäfer-Strimmer intensity for shrinking ``g`` towards the identity.

    ``sum Var(r_ij) / sum r_ij**2`` over off-diagonal entries, clipped to
    ``[0, 1]``, with ``Var(r_ij) = N**2 / (N - 1)**3 * cross_var_ij``.
    """
    if g.cross_var is None:
        raise ValueError("Gram matrix carries no cross-product variances")
    N = g.n_obs if effective_n is None else effective_n
    if N < 2:
        raise ValueError(f"effective sample count must be >= 2, got {N}")
    off = ~np.eye(g.p, dtype=bool)
    denom = float(np.sum(g.entries[off] ** 2))
    if denom == 0:
        return 0.0
    var_r = N * N / float(N - 1) ** 3 * g.cross_var[off]
    return float(np.clip(np.sum(var_r) / denom, 0.0, 1.0))


def shrink_gram(g: GramMatrix, effective_n: int | None = None) -> tuple[GramMatrix, float]:
    """Shrink off-diagonal entries by ``1 - lambda``; returns the new Gram and lambda."""
    lam = shrinkage_intensity(g, effective_n)
    if lam == 0:
        return g, 0.0
    shrunk = (1.0 - lam) * g.entries
    np.fill_diagonal(shrunk, 1.0)
    return GramMatrix(shrunk, g.names, g.source, g.n_obs, g.cross_var), lam


def _spd_inverse(a: np.ndarray) -> np.ndarray:
    try:
        factor = linalg.cho_factor(a, lower=True, check_finite=True)
    except linalg.LinAlgError as exc:
        raise SingularMatrixError(
            "Gram matrix is not positive definite; use a shrinkage (reg-) method"
        ) from exc
    return symmetrize(linalg.cho_solve(factor, np.eye(a.shape[0])))


def invert_gram(g: GramMatrix, mode: InvertMode = "naive", effective_n: int | None = None) -> PrecisionMatrix:
    """Invert a Gram matrix, directly or after shrinkage.

    Naive mode refuses matrices whose smallest eigenvalue is at most
    ``MIN_EIGENVALUE`` instead of pseudo-inverting them.
    """
    if mode not in ("naive", "shrinkage"):
        raise ValueError(f"mode must be 'naive' or 'shrinkage', got {mode!r}")
    lam = None
    target = g
    if mode == "shrinkage":
        target, lam = shrink_gram(g, effective_n)
    min_eig = float(np.linalg.eigvalsh(target.entries)[0])
    if not min_eig > MIN_EIGENVALUE:
        hint = (
            "use a shrinkage (reg-) method instead"
            if mode == "naive"
            else "the estimated shrinkage intensity is too small to regularize it"
        )
        raise SingularMatrixError(
            f"{g.source} Gram matrix is singular or ill-conditioned "
            f"(smallest eigenvalue {min_eig:.3g}); {hint}"
        )
    return PrecisionMatrix(
        _spd_inverse(target.entries),
        g.names,
        regularized=mode == "shrinkage",
        shrinkage_intensity=lam,
        source=g.source,
    )


def partial_scores(lam: PrecisionMatrix, method: str = "") -> ScoreMatrix:
    """Full-order partial correlations ``-L_ij / sqrt(L_ii L_jj)``; zero diagonal."""
    L = np.asarray(lam.entries, dtype=float)
    diag = np.diag(L)
    if not np.all(diag > 0):
        raise ValueError("precision matrix has a nonpositive diagonal entry")
    scale = np.sqrt(diag)
    scores = symmetrize(-L / np.outer(scale, scale))
    np.fill_diagonal(scores, 0.0)
    meta = {}
    if lam.regularized:
        meta["shrinkage_intensity"] = lam.shrinkage_intensity
    if lam.source == "dcor2":
        meta["gram_normalization"] = "unit-norm V-vectors (Gram = dcor^2 matrix)"
    return ScoreMatrix(scores, lam.names, method, meta)


def gram_to_scores(g: GramMatrix, method: str) -> ScoreMatrix:
    """Score matrix from any of the Gram-based methods given its Gram matrix."""
    if method == "cor":
        return ScoreMatrix(g.entries, g.names, "cor")
    mode = "shrinkage" if method.startswith("reg-") else "naive"
    return partial_scores(invert_gram(g, mode), method)


def method_matrix(d: Dataset, method: str, threads: int = 1) -> ScoreMatrix:
    """Scores for ``cor``, ``pcor``, ``reg-pcor``, ``dpm`` or ``reg-dpm``."""
    if method in ("cor", "pcor", "reg-pcor"):
        g = correlation_gram(d)
    elif method in ("dpm", "reg-dpm"):
        g = dcor2_gram(d, threads=threads)
    else:
        raise ValueError(f"unknown method {method!r}; expected one of {PRECISION_METHODS}")
    return gram_to_scores(g, method)
