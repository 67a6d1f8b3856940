"""Network reconstruction with the Distance Precision Matrix.

The main entry points are re-exported here; see the submodules for the
full API.
"""

__version__ = "0.1.0"

from .data import (
    Dataset,
    GoldStandard,
    ScoreMatrix,
    read_dataset,
    read_gold_standard,
    read_scores,
    standardize_columns,
    write_dataset,
    write_gold_standard,
    write_scores,
)
from .dcov import dcor, dcor_matrix, permutation_pvalue
from .evaluate import apply_threshold, evaluate, rank_edges, roc_pr, score_density
from .methods import METHODS, MethodParams, score_dataset, score_methods
from .partial import pdcor_matrix, pdcor_residual, pdcor_sr
from .precision import correlation_gram, dcor2_gram, invert_gram, method_matrix, partial_scores, shrink_gram
from .simulate import SimulationConfig, gs_topology, simulate_gaussian, simulate_gs

__all__ = [
    "Dataset", "GoldStandard", "ScoreMatrix", "read_dataset", "read_gold_standard", "read_scores",
    "standardize_columns", "write_dataset", "write_gold_standard", "write_scores",
    "dcor", "dcor_matrix", "permutation_pvalue",
    "apply_threshold", "evaluate", "rank_edges", "roc_pr", "score_density",
    "METHODS", "MethodParams", "score_dataset", "score_methods",
    "pdcor_matrix", "pdcor_residual", "pdcor_sr",
    "correlation_gram", "dcor2_gram", "invert_gram", "method_matrix", "partial_scores", "shrink_gram",
    "SimulationConfig", "gs_topology", "simulate_gaussian", "simulate_gs",
]
