"""
Data generators.

* Gaussian data whose precision matrix is zero exactly at the non-edges of
  a random DAG skeleton.
* The built-in 11-node nonlinear network ``GS`` containing a chain, a fork,
  a collider and a feed-forward loop.

Every generator is deterministic given its integer seed. Each generator
draws from its own stream, ``default_rng([seed, stream_id])``, so passing
the same seed to several generators does not correlate them.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .data import Dataset, GoldStandard

_STREAM_DAG = 1
_STREAM_WEIGHTS = 2
_STREAM_SAMPLES = 3
_STREAM_NOISE = 4
_STREAM_GS_FUNCTIONS = 5

DEFAULT_WEIGHT_RANGE = (0.2, 0.8)
DEFAULT_EXPECTED_PARENTS = 2.0
DIAGONAL_MARGIN = 0.1
#: The nonlinear function assignment of GS is fixed by this seed.
GS_FUNCTION_SEED = 2016


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), stream])


@dataclass(frozen=True)
class DagSpec:
    """Directed acyclic graph as parent lists over named nodes."""

    parents: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        parents = tuple(tuple(sorted(int(q) for q in ps)) for ps in self.parents)
        p = len(parents)
        names = tuple(self.names) if self.names else tuple(f"G{i + 1}" for i in range(p))
        if len(names) != p:
            raise ValueError(f"{len(names)} names for {p} nodes")
        for child, ps in enumerate(parents):
            for q in ps:
                if q == child:
                    raise ValueError(f"node {names[child]} is its own parent")
                if not 0 <= q < p:
                    raise ValueError(f"parent index {q} out of range")
        object.__setattr__(self, "parents", parents)
        object.__setattr__(self, "names", names)
        self.topological_order()

    @property
    def p(self) -> int:
        return len(self.parents)

    def topological_order(self) -> list[int]:
        """Kahn's algorithm; raises ``ValueError`` on a cycle."""
        children = [[] for _ in range(self.p)]
        indeg = [len(ps) for ps in self.parents]
        for c, ps in enumerate(self.parents):
            for q in ps:
                children[q].append(c)
        ready = [i for i in range(self.p) if indeg[i] == 0]
        order = []
        while ready:
            node = ready.pop(0)
            order.append(node)
            for c in children[node]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
        if len(order) != self.p:
            raise ValueError("graph contains a cycle")
        return order

    def edges(self) -> list[tuple[int, int]]:
        """Directed edges ``(parent, child)``."""
        return [(q, c) for c, ps in enumerate(self.parents) for q in ps]

    def skeleton(self) -> GoldStandard:
        return GoldStandard.from_pairs(self.names, [(self.names[a], self.names[b]) for a, b in self.edges()])


@dataclass(frozen=True)
class SimulationConfig:
    n: int = 200
    noise_sigma: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"need n >= 3, got {self.n}")
        if not self.noise_sigma >= 0:
            raise ValueError(f"noise_sigma must be nonnegative, got {self.noise_sigma}")


def random_dag(p: int, expected_parents: float = DEFAULT_EXPECTED_PARENTS, seed: int = 0) -> DagSpec:
    """Random DAG: random topological order, each forward edge with prob ``min(1, e / (p - 1))``."""
    if p < 2:
        raise ValueError(f"need p >= 2, got {p}")
    if not expected_parents > 0:
        raise ValueError("expected_parents must be positive")
    rng = _rng(seed, _STREAM_DAG)
    order = rng.permutation(p)
    prob = min(1.0, expected_parents / (p - 1))
    include = rng.random((p, p)) < prob
    parents = [[] for _ in range(p)]
    for a in range(p):
        for b in range(a + 1, p):
            if include[a, b]:
                parents[order[b]].append(int(order[a]))
    return DagSpec(tuple(tuple(ps) for ps in parents))


def dag_to_covariance(
    g: DagSpec, weight_range: Sequence[float] = DEFAULT_WEIGHT_RANGE, seed: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Covariance whose inverse has the zero pattern of the skeleton of ``g``.

    Returns ``(cov, precision)``. Skeleton entries of the precision are
    ``+-u`` with ``u ~ U[lo, hi]``; its diagonal is the absolute row sum
    plus 0.1, which makes it strictly diagonally dominant and hence
    positive definite.
    """
    lo, hi = map(float, weight_range)
    if not 0 < lo < hi:
        raise ValueError(f"weight range must satisfy 0 < lo < hi, got {weight_range}")
    rng = _rng(seed, _STREAM_WEIGHTS)
    p = g.p
    omega = np.zeros((p, p))
    for a, b in sorted(g.edges()):
        w = rng.uniform(lo, hi) * rng.choice((-1.0, 1.0))
        omega[a, b] = omega[b, a] = w
    np.fill_diagonal(omega, np.abs(omega).sum(axis=1) + DIAGONAL_MARGIN)
    cov = np.linalg.inv(omega)
    return (cov + cov.T) / 2.0, omega


def draw_gaussian(cov, n: int, seed: int = 0) -> np.ndarray:
    """``(n, p)`` array of draws ``L z`` with ``L`` the Cholesky factor of ``cov``.

    Raises ``numpy.linalg.LinAlgError`` if ``cov`` is not positive definite.
    """
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    L = np.linalg.cholesky(cov)
    z = _rng(seed, _STREAM_SAMPLES).standard_normal((n, cov.shape[0]))
    return z @ L.T


def sample_gaussian(cov, n: int, seed: int = 0, names: Sequence[str] = ()) -> Dataset:
    """Dataset of ``n`` zero-mean Gaussian draws with covariance ``cov``."""
    return Dataset(draw_gaussian(cov, n, seed), tuple(names))


def simulate_gaussian(
    p: int,
    cfg: SimulationConfig,
    expected_parents: float = DEFAULT_EXPECTED_PARENTS,
    weight_range: Sequence[float] = DEFAULT_WEIGHT_RANGE,
) -> tuple[Dataset, GoldStandard]:
    """Random DAG, its Gaussian model, ``cfg.n`` samples and additive ``N(0, sigma^2)`` noise."""
    g = random_dag(p, expected_parents, cfg.seed)
    cov, _ = dag_to_covariance(g, weight_range, cfg.seed)
    x = draw_gaussian(cov, cfg.n, cfg.seed)
    if cfg.noise_sigma > 0:
        x = x + cfg.noise_sigma * _rng(cfg.seed, _STREAM_NOISE).standard_normal(x.shape)
    return Dataset(x, g.names), g.skeleton()


# ---------------------------------------------------------------------------
# nonlinear network

NONLINEAR_FUNCTIONS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "square": np.square,
    "sin2": lambda v: np.sin(2 * v),
    "abs": np.abs,
    "tanh2": lambda v: np.tanh(2 * v),
    "cos2": lambda v: np.cos(2 * v),
}

# G1 -> G2 -> G3 chain, G3 <- G2 -> G4 fork, G3 -> G5 <- G4 collider,
# G1 -> G6 -> G7 with G1 -> G7 feed-forward loop, then G5 -> G8 -> {G9, G10} -> G11.
_GS_EDGES = (
    (1, 2), (2, 3), (2, 4), (3, 5), (4, 5),
    (1, 6), (6, 7), (1, 7),
    (5, 8), (7, 8), (8, 9), (8, 10), (9, 11),
)


def gs_topology() -> tuple[DagSpec, GoldStandard]:
    """The 11-node nonlinear test network and its undirected skeleton."""
    parents = [[] for _ in range(11)]
    for a, b in _GS_EDGES:
        parents[b - 1].append(a - 1)
    g = DagSpec(tuple(tuple(ps) for ps in parents))
    return g, g.skeleton()


def gs_functions(g: DagSpec | None = None, seed: int = GS_FUNCTION_SEED) -> dict[tuple[int, int], str]:
    """Nonlinear function name for every edge ``(parent, child)``, drawn once per seed."""
    g = gs_topology()[0] if g is None else g
    rng = _rng(seed, _STREAM_GS_FUNCTIONS)
    names = list(NONLINEAR_FUNCTIONS)
    return {e: names[int(rng.integers(len(names)))] for e in sorted(g.edges())}


def _unit_scale(v: np.ndarray) -> np.ndarray:
    sd = v.std(ddof=1)
    return v / sd if sd > 0 else v


def simulate_gs(
    cfg: SimulationConfig,
    functions: dict[tuple[int, int], str] | None = None,
    topology: DagSpec | None = None,
) -> tuple[Dataset, GoldStandard]:
    """Sample the nonlinear network.

    Roots are standard normal. A child is the sum of its parents' edge
    functions, each term and the sum scaled to unit sample variance, plus ``N(0, sigma^2)``
    noise; the result is scaled to unit sample variance again before the
    child feeds its own children. ``sigma^2`` is therefore the
    noise-to-signal variance ratio at every node.
    """
    g = gs_topology()[0] if topology is None else topology
    functions = gs_functions(g) if functions is None else functions
    n = cfg.n
    rng = _rng(cfg.seed, _STREAM_SAMPLES)
    roots = rng.standard_normal((n, g.p))
    noise = rng.standard_normal((n, g.p))
    x = np.zeros((n, g.p))
    for node in g.topological_order():
        ps = g.parents[node]
        if not ps:
            x[:, node] = roots[:, node]
            continue
        # equal-variance terms so no parent is drowned out by another
        signal = sum(_unit_scale(NONLINEAR_FUNCTIONS[functions[(q, node)]](x[:, q])) for q in ps)
        value = _unit_scale(signal)
        if cfg.noise_sigma > 0:
            value = _unit_scale(value + cfg.noise_sigma * noise[:, node])
        x[:, node] = value
    return Dataset(x, g.names), g.skeleton()
