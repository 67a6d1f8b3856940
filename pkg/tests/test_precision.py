import numpy as np
import pytest

from dpmnet.data import Dataset
from dpmnet.dcov import dcor
from dpmnet.exceptions import ConstantVariableError, SingularMatrixError
from dpmnet.precision import (
    GramMatrix,
    PrecisionMatrix,
    correlation_gram,
    dcor2_gram,
    invert_gram,
    method_matrix,
    partial_scores,
    shrink_gram,
    shrinkage_intensity,
)
from dpmnet.simulate import SimulationConfig, dag_to_covariance, random_dag, sample_gaussian, simulate_gs

from helpers import gaussian_chain
from oracles import schafer_strimmer_lambda, v_vector


def gram(entries, source="correlation", n_obs=100):
    entries = np.asarray(entries, float)
    return GramMatrix(entries, tuple(f"v{i}" for i in range(len(entries))), source, n_obs, np.zeros_like(entries))


def random_gaussian_20x10(seed=5):
    # correlated columns: with independent ones the estimate sits at the clip value 1
    r = np.random.default_rng(seed)
    return Dataset(r.standard_normal((20, 10)) @ r.standard_normal((10, 10)))


def standardize(a):
    return (a - a.mean(axis=0)) / a.std(axis=0, ddof=1)


class TestCorrelationGram:
    def test_duplicate(self, rng):
        x = rng.standard_normal(10)
        assert correlation_gram(Dataset(np.column_stack([x, x]))).entries[0, 1] == pytest.approx(1.0)

    def test_negation(self, rng):
        x = rng.standard_normal(10)
        assert correlation_gram(Dataset(np.column_stack([x, -x]))).entries[0, 1] == pytest.approx(-1.0)

    def test_textbook(self, rng):
        v = rng.standard_normal((100, 5))
        g = correlation_gram(Dataset(v))
        n = 100
        for i in range(5):
            for j in range(5):
                xi, xj = v[:, i], v[:, j]
                num = sum((a - xi.mean()) * (b - xj.mean()) for a, b in zip(xi, xj))
                expected = num / ((n - 1) * xi.std(ddof=1) * xj.std(ddof=1))
                assert g.entries[i, j] == pytest.approx(expected, abs=1e-12)
        assert g.source == "correlation"

    def test_constant(self):
        with pytest.raises(ConstantVariableError, match="'b'"):
            correlation_gram(Dataset([[1, 0], [2, 0], [3, 0]], ("a", "b")))


class TestDcor2Gram:
    def test_gram_identity(self):
        v = np.random.default_rng(4).standard_normal((20, 4))
        v[:, 1] += v[:, 0] ** 2
        g = dcor2_gram(Dataset(v))
        V = np.column_stack([v_vector(v[:, i]) for i in range(4)])
        V = V / np.linalg.norm(V, axis=0)
        np.testing.assert_allclose(g.entries, V.T @ V, atol=1e-10, rtol=0)
        for i in range(4):
            for j in range(i + 1, 4):
                assert g.entries[i, j] == pytest.approx(dcor(v[:, i], v[:, j]) ** 2, abs=1e-10)
        assert g.source == "dcor2"

    def test_duplicate(self, rng):
        x = rng.standard_normal(12)
        assert dcor2_gram(Dataset(np.column_stack([x, x, rng.standard_normal(12)]))).entries[0, 1] == pytest.approx(1.0)

    def test_independent(self):
        g = dcor2_gram(Dataset(np.random.default_rng(9).standard_normal((500, 4))))
        assert np.all(g.entries[~np.eye(4, dtype=bool)] < 0.1)

    def test_constant(self):
        with pytest.raises(ConstantVariableError, match="'b'"):
            dcor2_gram(Dataset([[1, 0], [2, 0], [3, 0]], ("a", "b")))

    def test_psd(self, rng):
        g = dcor2_gram(Dataset(rng.standard_normal((30, 8))))
        assert np.linalg.eigvalsh(g.entries)[0] > -1e-8
        assert np.all((g.entries >= 0) & (g.entries <= 1))

    def test_threads(self, rng):
        d = Dataset(rng.standard_normal((30, 6)))
        assert np.array_equal(dcor2_gram(d, 1).entries, dcor2_gram(d, 4).entries)


class TestShrinkage:
    def test_full_shrinkage(self):
        v = np.random.default_rng(0).standard_normal((200, 4))
        g = correlation_gram(Dataset(v))
        shrunk, lam = shrink_gram(g, effective_n=3)
        assert lam == 1.0
        np.testing.assert_array_equal(shrunk.entries, np.eye(4))

    def test_no_shrinkage(self):
        x = np.array([1.0, -1.0, 1.0, -1.0, 1.0, -1.0])
        g = correlation_gram(Dataset(np.column_stack([x, x, -x])))
        shrunk, lam = shrink_gram(g)
        assert lam == 0.0
        np.testing.assert_array_equal(shrunk.entries, g.entries)

    def test_zero_offdiagonal(self):
        g = gram(np.eye(3))
        shrunk, lam = shrink_gram(g)
        assert lam == 0.0 and np.array_equal(shrunk.entries, np.eye(3))

    def test_random_20x10(self):
        g = correlation_gram(random_gaussian_20x10())
        shrunk, lam = shrink_gram(g)
        assert 0 < lam < 1
        assert np.linalg.eigvalsh(shrunk.entries)[0] > 0

    def test_matches_oracle_correlation(self, rng):
        v = rng.standard_normal((25, 6))
        v[:, 1] += v[:, 0]
        expected = schafer_strimmer_lambda(standardize(v))
        assert shrinkage_intensity(correlation_gram(Dataset(v))) == pytest.approx(expected, rel=1e-10)

    def test_matches_oracle_dcor2(self):
        v = np.random.default_rng(6).standard_normal((8, 4))
        v[:, 2] += np.abs(v[:, 3])
        U = standardize(np.column_stack([v_vector(v[:, i]) for i in range(4)]))
        expected = schafer_strimmer_lambda(U)
        assert shrinkage_intensity(dcor2_gram(Dataset(v))) == pytest.approx(expected, rel=1e-9)

    def test_reg_dpm_reports_intensity(self):
        d, _ = simulate_gs(SimulationConfig(n=50, seed=1))
        m = method_matrix(d, "reg-dpm")
        assert 0 <= m.metadata["shrinkage_intensity"] <= 1


class TestInvert:
    def test_identity(self):
        lam = invert_gram(gram(np.eye(4)))
        np.testing.assert_allclose(lam.entries, np.eye(4), atol=1e-15)
        assert not lam.regularized

    def test_two_by_two(self):
        lam = invert_gram(gram([[1, 0.5], [0.5, 1]]))
        np.testing.assert_allclose(lam.entries, np.array([[1, -0.5], [-0.5, 1]]) / 0.75, atol=1e-14)

    def test_residual(self, rng):
        a = rng.standard_normal((8, 8))
        spd = a @ a.T + 0.5 * np.eye(8)
        s = np.sqrt(np.diag(spd))
        g = gram(spd / np.outer(s, s))
        lam = invert_gram(g)
        np.testing.assert_allclose(lam.entries @ g.entries, np.eye(8), atol=1e-8)

    def test_singular(self):
        with pytest.raises(SingularMatrixError, match="shrinkage"):
            invert_gram(gram(np.ones((3, 3))))

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            invert_gram(gram(np.eye(2)), "pseudo")

    def test_shrinkage_mode_flags(self):
        g = correlation_gram(random_gaussian_20x10())
        lam = invert_gram(g, "shrinkage")
        assert lam.regularized and 0 < lam.shrinkage_intensity < 1


class TestPartialScores:
    def test_bivariate(self):
        m = partial_scores(invert_gram(gram([[1, 0.5], [0.5, 1]])))
        assert m.scores[0, 1] == pytest.approx(0.5, abs=1e-14)

    def test_diagonal(self):
        m = partial_scores(PrecisionMatrix(np.diag([1.0, 2.0, 3.0]), ("a", "b", "c")))
        assert not m.scores.any()

    def test_nonpositive_diagonal(self):
        with pytest.raises(ValueError):
            partial_scores(PrecisionMatrix(np.diag([1.0, 0.0]), ("a", "b")))

    def test_chain(self):
        hits = 0
        for seed in range(20):
            s = method_matrix(gaussian_chain(1000, seed), "pcor").scores
            hits += abs(s[0, 2]) < 0.1 and abs(s[0, 1]) > 0.2 and abs(s[1, 2]) > 0.2
        assert hits >= 18


class TestMethodMatrix:
    def test_pcor_equals_cor_for_two_variables(self, rng):
        d = Dataset(rng.standard_normal((30, 2)) @ [[1, 0.4], [0, 1]])
        assert method_matrix(d, "pcor").scores[0, 1] == pytest.approx(method_matrix(d, "cor").scores[0, 1], abs=1e-12)

    def test_duplicate_column(self, rng):
        v = rng.standard_normal((30, 3))
        d = Dataset(np.column_stack([v, v[:, 0]]))
        with pytest.raises(SingularMatrixError):
            method_matrix(d, "dpm")
        m = method_matrix(d, "reg-dpm")
        assert np.all(np.isfinite(m.scores))

    def test_unknown(self, rng):
        with pytest.raises(ValueError):
            method_matrix(Dataset(rng.standard_normal((5, 2))), "dcor")

    def test_dpm_scale_invariance(self, rng):
        v = rng.standard_normal((40, 5))
        a = method_matrix(Dataset(v), "dpm").scores
        b = method_matrix(Dataset(v * [1, 3, 0.1, 7, 2]), "dpm").scores
        np.testing.assert_allclose(a, b, atol=1e-10, rtol=0)

    @pytest.mark.slow
    def test_reg_dpm_top_edge_on_gs(self):
        from dpmnet.evaluate import rank_edges
        from dpmnet.simulate import gs_topology

        _, gold = gs_topology()
        hits = 0
        for seed in range(20):
            d, g = simulate_gs(SimulationConfig(n=200, seed=seed))
            hits += bool(rank_edges(method_matrix(d, "reg-dpm"), g).is_true[0])
        assert hits >= 15

    @pytest.mark.slow
    def test_reg_pcor_zero_pattern(self):
        dag = random_dag(15, 2.0, seed=3)
        cov, omega = dag_to_covariance(dag, seed=3)
        true = np.abs(omega) > 0
        off = ~np.eye(15, dtype=bool)
        on_edges, off_edges = [], []
        for seed in range(20):
            s = np.abs(method_matrix(sample_gaussian(cov, 500, seed), "reg-pcor").scores)
            on_edges.append(s[true & off].mean())
            off_edges.append(s[~true & off].mean())
        assert np.mean(off_edges) < np.mean(on_edges)
