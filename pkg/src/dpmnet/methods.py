"""
Registry of all network scoring methods by identifier.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .competitors import DEFAULT_DPI_EPSILON, DEFAULT_ND_BETA, aracne_matrix, nd_matrix
from .data import Dataset, ScoreMatrix
from .dcov import dcor_matrix
from .exceptions import DpmNetError
from .partial import pdcor_matrices
from .precision import correlation_gram, dcor2_gram, gram_to_scores

_RECOVERABLE = (DpmNetError, np.linalg.LinAlgError)

METHODS = (
    "cor",
    "pcor",
    "reg-pcor",
    "dcor",
    "pdcor-residual",
    "pdcor-sr",
    "dpm",
    "reg-dpm",
    "aracne",
    "nd",
)


@dataclass(frozen=True)
class MethodParams:
    """Tunable parameters of the baselines (``bins=None`` means ``ceil(sqrt(n/5))``)."""

    bins: int | None = None
    dpi_epsilon: float = DEFAULT_DPI_EPSILON
    nd_beta: float = DEFAULT_ND_BETA


def check_methods(methods) -> tuple[str, ...]:
    methods = tuple(methods)
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise ValueError(f"unknown method(s) {unknown}; valid identifiers: {', '.join(METHODS)}")
    if not methods:
        raise ValueError("no methods given")
    return methods


def score_methods(
    d: Dataset,
    methods=METHODS,
    params: MethodParams = MethodParams(),
    threads: int = 1,
    errors: str = "raise",
) -> dict[str, ScoreMatrix | Exception]:
    """Score ``d`` with several methods, sharing Gram matrices between them.

    With ``errors="collect"`` an exception raised by one method (e.g. a
    singular Gram matrix) is stored in place of its scores.
    """
    methods = check_methods(methods)
    out: dict[str, ScoreMatrix | Exception] = {}
    grams = {}

    def gram(kind):
        if kind not in grams:
            grams[kind] = correlation_gram(d) if kind == "correlation" else dcor2_gram(d, threads)
        return grams[kind]

    def run(method):
        if method in ("cor", "pcor", "reg-pcor"):
            return gram_to_scores(gram("correlation"), method)
        if method in ("dpm", "reg-dpm"):
            return gram_to_scores(gram("dcor2"), method)
        if method == "dcor":
            return dcor_matrix(d, threads)
        if method == "aracne":
            return aracne_matrix(d, params.bins, params.dpi_epsilon)
        if method == "nd":
            return nd_matrix(d, params.nd_beta)
        raise AssertionError(method)

    pd_variants = [m.split("-", 1)[1] for m in methods if m.startswith("pdcor-")]
    pd_results = {}
    if pd_variants:
        try:
            pd_results = {f"pdcor-{k}": v for k, v in pdcor_matrices(d, pd_variants, threads).items()}
        except _RECOVERABLE as exc:
            if errors == "raise":
                raise
            pd_results = {f"pdcor-{k}": exc for k in pd_variants}

    for method in methods:
        if method in pd_results:
            out[method] = pd_results[method]
            continue
        try:
            out[method] = run(method)
        except _RECOVERABLE as exc:
            if errors == "raise":
                raise
            out[method] = exc
    return out


def score_dataset(d: Dataset, method: str, params: MethodParams = MethodParams(), threads: int = 1) -> ScoreMatrix:
    """Score ``d`` with one method identifier."""
    return score_methods(d, (method,), params, threads)[method]
