import itertools

import numpy as np
import pytest

from dpmnet.dcov import dcor_matrix
from dpmnet.simulate import (
    DagSpec,
    SimulationConfig,
    dag_to_covariance,
    draw_gaussian,
    gs_functions,
    gs_topology,
    random_dag,
    sample_gaussian,
    simulate_gaussian,
    simulate_gs,
)


class TestDagSpec:
    def test_cycle_rejected(self):
        with pytest.raises(ValueError, match="cycle"):
            DagSpec(((1,), (0,)))

    def test_self_parent(self):
        with pytest.raises(ValueError):
            DagSpec(((0,),))

    def test_topological_order(self):
        g = DagSpec(((), (0, 2), (0,)))
        order = g.topological_order()
        for q, c in g.edges():
            assert order.index(q) < order.index(c)


class TestRandomDag:
    def test_two_nodes_full_probability(self):
        g = random_dag(2, expected_parents=1.0, seed=3)
        assert len(g.edges()) == 1

    def test_deterministic(self):
        assert random_dag(20, 2.0, 5) == random_dag(20, 2.0, 5)

    def test_mean_edge_count(self):
        mean = np.mean([len(random_dag(50, 2.0, s).edges()) for s in range(100)])
        assert 40 <= mean <= 60

    def test_acyclic(self):
        for s in range(20):
            random_dag(30, 3.0, s).topological_order()


class TestCovariance:
    def test_edgeless(self):
        cov, omega = dag_to_covariance(DagSpec(((), (), ())))
        np.testing.assert_array_equal(omega, 0.1 * np.eye(3))
        np.testing.assert_allclose(cov, 10 * np.eye(3))

    def test_precision_pd(self):
        for s in range(100):
            _, omega = dag_to_covariance(random_dag(50, 2.0, s), seed=s)
            assert np.linalg.eigvalsh(omega)[0] > 0

    @pytest.mark.parametrize("p", [10, 50])
    def test_zero_pattern(self, p):
        for s in range(20):
            g = random_dag(p, 2.0, s)
            cov, _ = dag_to_covariance(g, seed=s)
            inv = np.linalg.inv(cov)
            skeleton = np.eye(p, dtype=bool)
            for a, b in g.edges():
                skeleton[a, b] = skeleton[b, a] = True
            assert np.all(np.abs(inv[~skeleton]) < 1e-8)

    def test_weight_range(self):
        g = random_dag(20, 3.0, 1)
        _, omega = dag_to_covariance(g, (0.3, 0.4), 1)
        off = omega[~np.eye(20, dtype=bool)]
        nz = np.abs(off[off != 0])
        assert nz.size == 2 * len(g.edges())
        assert nz.min() >= 0.3 and nz.max() <= 0.4


class TestSampling:
    def test_identity(self):
        d = sample_gaussian(np.eye(3), 5000, seed=1)
        assert np.all(np.abs(np.cov(d.values, rowvar=False) - np.eye(3)) < 0.06)

    def test_deterministic(self):
        a = sample_gaussian(np.eye(2), 10, seed=4)
        b = sample_gaussian(np.eye(2), 10, seed=4)
        assert np.array_equal(a.values, b.values)

    def test_univariate_sd(self):
        x = draw_gaussian([[4.0]], 5000, seed=2)
        assert 1.9 <= x.std(ddof=1) <= 2.1

    def test_not_pd(self):
        with pytest.raises(np.linalg.LinAlgError):
            draw_gaussian([[1, 2], [2, 1]], 10)

    def test_gaussian_simulation_noise(self):
        clean, g = simulate_gaussian(10, SimulationConfig(n=50, noise_sigma=0.0, seed=3))
        noisy, g2 = simulate_gaussian(10, SimulationConfig(n=50, noise_sigma=1.0, seed=3))
        assert g == g2
        assert np.all(noisy.values.var(axis=0) > 0)
        assert not np.array_equal(clean.values, noisy.values)


def motifs(dag):
    """Return which of chain, fork, collider and feed-forward loop occur."""
    edges = set(dag.edges())
    adjacent = lambda a, b: (a, b) in edges or (b, a) in edges
    found = set()
    for a, b, c in itertools.permutations(range(dag.p), 3):
        if (a, b) in edges and (b, c) in edges:
            found.add("ffl" if (a, c) in edges else "chain")
        if (b, a) in edges and (b, c) in edges and not adjacent(a, c):
            found.add("fork")
        if (a, c) in edges and (b, c) in edges and not adjacent(a, b):
            found.add("collider")
    return found


class TestGS:
    def test_node_count(self):
        g, gold = gs_topology()
        assert g.p == 11 and len(gold.nodes) == 11

    def test_motifs(self):
        g, gold = gs_topology()
        assert motifs(g) == {"chain", "fork", "collider", "ffl"}
        assert 11 <= len(gold.edges) <= 20

    def test_triangle(self):
        _, gold = gs_topology()
        nodes = gold.nodes
        assert any(
            gold.has_edge(a, b) and gold.has_edge(b, c) and gold.has_edge(a, c)
            for a, b, c in itertools.combinations(nodes, 3)
        )

    def test_functions_fixed(self):
        assert gs_functions() == gs_functions()

    def test_zero_noise_square(self):
        g = DagSpec(((), (0,)), ("P", "C"))
        d, _ = simulate_gs(SimulationConfig(n=50, noise_sigma=0.0, seed=1), {(0, 1): "square"}, g)
        parent = d.values[:, 0]
        expected = parent**2 / np.std(parent**2, ddof=1)
        np.testing.assert_array_equal(d.values[:, 1], expected)

    def test_unit_variance(self):
        d, _ = simulate_gs(SimulationConfig(n=100, noise_sigma=0.5, seed=2))
        g, _ = gs_topology()
        for node, ps in enumerate(g.parents):
            if ps:
                assert d.values[:, node].std(ddof=1) == pytest.approx(1.0, abs=1e-12)

    def test_deterministic(self):
        a, _ = simulate_gs(SimulationConfig(n=30, seed=9))
        b, _ = simulate_gs(SimulationConfig(n=30, seed=9))
        assert np.array_equal(a.values, b.values)

    @pytest.mark.slow
    def test_detectable_signal(self):
        # every true edge above the median non-edge dcor
        hits = 0
        for seed in range(20):
            d, gold = simulate_gs(SimulationConfig(n=200, noise_sigma=1.0, seed=seed))
            s = dcor_matrix(d).scores
            iu = np.triu_indices(d.p, 1)
            true = np.array([gold.has_edge(d.names[i], d.names[j]) for i, j in zip(*iu)])
            hits += bool(s[iu][true].min() > np.median(s[iu][~true]))
        assert hits >= 18
