"""
Edge ranking, ROC/PR curves and their areas, score densities, thresholds.

The network is grown from the highest ``|score|`` down. Edges with equal
``|score|`` enter together: curve vertices exist only at tie-block
boundaries, so AUROC counts tied positive/negative pairs as one half.
AUPRC is the step sum ``sum (R_k - R_{k-1}) P_k`` over those vertices.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .data import GoldStandard, ScoreMatrix, edge_order
from .exceptions import UndefinedMetricError

GRID_POINTS = 512


@dataclass(frozen=True)
class RankedEdges:
    """All unordered pairs by descending ``|score|`` (ties: sorted name pair)."""

    pairs: tuple[tuple[str, str], ...]
    scores: np.ndarray
    is_true: np.ndarray
    method: str = ""

    def __len__(self):
        return len(self.pairs)


@dataclass(frozen=True)
class EvalSummary:
    auroc: float
    auprc: float
    roc_points: list[tuple[float, float]]
    pr_points: list[tuple[float, float]]
    method: str = ""
    positives: int = 0
    negatives: int = 0
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "auroc": self.auroc,
            "auprc": self.auprc,
            "positives": self.positives,
            "negatives": self.negatives,
            "roc": {"fpr": [p[0] for p in self.roc_points], "tpr": [p[1] for p in self.roc_points]},
            "pr": {"recall": [p[0] for p in self.pr_points], "precision": [p[1] for p in self.pr_points]},
            "metadata": dict(self.metadata),
        }


def _check_names(m: ScoreMatrix, g: GoldStandard):
    a, b = set(m.names), set(g.nodes)
    if a != b:
        raise ValueError(
            f"score and gold standard node sets differ: only in scores {sorted(a - b)}, "
            f"only in gold standard {sorted(b - a)}"
        )


def rank_edges(m: ScoreMatrix, g: GoldStandard) -> RankedEdges:
    _check_names(m, g)
    names = m.names
    order = edge_order(m)
    pairs = tuple((names[i], names[j]) for i, j, _ in order)
    scores = np.array([abs(s) for _, _, s in order], dtype=float)
    truth = np.array([g.has_edge(a, b) for a, b in pairs], dtype=bool)
    return RankedEdges(pairs, scores, truth, m.method)


def _block_counts(r: RankedEdges):
    """Cumulative (TP, FP) at the end of every tie block."""
    s = r.scores
    tp = np.cumsum(r.is_true)
    fp = np.cumsum(~r.is_true)
    ends = np.flatnonzero(np.append(s[1:] != s[:-1], True))
    return tp[ends], fp[ends]


def roc_pr(r: RankedEdges) -> EvalSummary:
    """ROC and PR curves with AUROC (trapezoid) and AUPRC (step sum)."""
    P = int(np.sum(r.is_true))
    N = len(r) - P
    if P == 0 or N == 0:
        raise UndefinedMetricError(f"ranking has {P} positives and {N} negatives; need at least one of each")
    tp, fp = _block_counts(r)
    tpr = np.concatenate(([0.0], tp / P))
    fpr = np.concatenate(([0.0], fp / N))
    auroc = float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2.0))
    recall = tp / P
    precision = tp / (tp + fp)
    auprc = float(np.sum(np.diff(np.concatenate(([0.0], recall))) * precision))
    return EvalSummary(
        auroc=auroc,
        auprc=auprc,
        roc_points=[(float(a), float(b)) for a, b in zip(fpr, tpr)],
        pr_points=[(float(a), float(b)) for a, b in zip(recall, precision)],
        method=r.method,
        positives=P,
        negatives=N,
    )


def evaluate(m: ScoreMatrix, g: GoldStandard) -> EvalSummary:
    """``roc_pr(rank_edges(m, g))``."""
    return roc_pr(rank_edges(m, g))


def _offdiagonal_magnitudes(m: ScoreMatrix) -> np.ndarray:
    iu = np.triu_indices(m.p, k=1)
    return np.abs(m.scores[iu])


def silverman_bandwidth(values: np.ndarray) -> float:
    """``1.06 * sd * m**(-1/5)``."""
    return 1.06 * float(np.std(values, ddof=1)) * len(values) ** (-0.2)


def score_density(m: ScoreMatrix, bandwidth="auto", points: int = GRID_POINTS) -> list[tuple[float, float]]:
    """Gaussian kernel density of the off-diagonal ``|scores|``.

    The grid spans ``[0, 1.05 * max|score|]`` and is treated as the
    support: kernels are reflected at both ends so that no mass is lost
    outside it and the density integrates to one over the grid.
    """
    v = _offdiagonal_magnitudes(m)
    if np.unique(v).size < 2:
        raise ValueError("need at least two distinct scores for a density")
    h = silverman_bandwidth(v) if bandwidth == "auto" else float(bandwidth)
    if not h > 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    top = 1.05 * v.max()
    grid = np.linspace(0.0, top, points)
    dens = np.zeros(points)
    for centers in (v, -v, 2 * top - v):
        u = (grid[:, None] - centers[None, :]) / h
        dens += np.exp(-0.5 * u * u).sum(axis=1)
    dens /= v.size * h * np.sqrt(2 * np.pi)
    return [(float(a), float(b)) for a, b in zip(grid, dens)]


def apply_threshold(m: ScoreMatrix, t: float, g: GoldStandard | None = None) -> list[tuple[str, str, float, str]]:
    """Edges with ``|score| >= t`` as ``(a, b, score, label)``.

    With a gold standard, labels are ``TP``/``FP`` and the gold edges below
    the threshold are appended as ``FN``; without one, labels are empty.
    """
    if not t >= 0:
        raise ValueError(f"threshold must be nonnegative, got {t}")
    if g is not None:
        _check_names(m, g)
    names = m.names
    kept, missed = [], []
    for i, j, s in edge_order(m):
        a, b = names[i], names[j]
        true = g is not None and g.has_edge(a, b)
        if abs(s) >= t:
            kept.append((a, b, s, ("TP" if true else "FP") if g is not None else ""))
        elif true:
            missed.append((a, b, s, "FN"))
    return kept + missed
