import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from dpmnet.data import Dataset
from dpmnet.dcov import (
    bias_corrected_dcor2,
    dcor,
    dcor_matrix,
    dcov2,
    double_center,
    pairwise_distances,
    permutation_pvalue,
    u_center,
)
from dpmnet.exceptions import DimensionError

from oracles import literal_dcor, literal_dcov2, literal_u_center, pearson, v_vector

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


class TestDistances:
    def test_example(self):
        np.testing.assert_array_equal(pairwise_distances([0, 1, 3]), [[0, 1, 3], [1, 0, 2], [3, 2, 0]])

    def test_constant(self):
        assert not pairwise_distances([2.5] * 4).any()

    @given(arrays(float, st.integers(3, 20), elements=finite), finite)
    def test_translation_invariant_and_metric(self, x, c):
        a = pairwise_distances(x)
        np.testing.assert_allclose(pairwise_distances(x + c), a, atol=1e-9)
        assert np.array_equal(a, a.T)
        assert not np.diag(a).any()
        assert (a >= 0).all()
        # triangle inequality a_ik <= a_ij + a_jk
        assert (a[:, None, :] <= a[:, :, None] + a[None, :, :] + 1e-9).all()


class TestDoubleCenter:
    def test_two_points(self):
        np.testing.assert_allclose(double_center([[0, 1], [1, 0]]), [[-0.5, 0.5], [0.5, -0.5]])

    def test_three_points(self):
        expected = np.array([[-4, 0, 4], [0, -2, 2], [4, 2, -6]]) / 3
        np.testing.assert_allclose(double_center(pairwise_distances([0, 1, 3])), expected, atol=1e-15)

    def test_zero(self):
        assert not double_center(np.zeros((4, 4))).any()

    @given(arrays(float, st.integers(3, 30), elements=finite))
    def test_sums_vanish(self, x):
        a = double_center(pairwise_distances(x))
        scale = max(1.0, np.abs(a).max()) * a.shape[0]
        assert np.array_equal(a, a.T) or np.allclose(a, a.T, atol=1e-12 * scale)
        assert np.all(np.abs(a.sum(axis=0)) <= 1e-10 * scale)
        assert np.all(np.abs(a.sum(axis=1)) <= 1e-10 * scale)
        assert abs(a.sum()) <= 1e-10 * scale * a.shape[0]


class TestDcov2:
    def test_hand_value(self):
        a = np.array([[-0.5, 0.5], [0.5, -0.5]])
        assert dcov2(a, a) == pytest.approx(0.25, abs=1e-15)

    def test_zero(self):
        a = double_center(pairwise_distances([0, 1, 3]))
        assert dcov2(a, np.zeros((3, 3))) == 0

    def test_brute_force(self, rng):
        x, y = rng.standard_normal(30), rng.standard_normal(30) + rng.standard_normal(30) ** 2
        got = dcov2(double_center(pairwise_distances(x)), double_center(pairwise_distances(y)))
        assert got == pytest.approx(literal_dcov2(list(x), list(y)), rel=1e-12)

    def test_mismatched(self):
        with pytest.raises(DimensionError):
            dcov2(np.zeros((3, 3)), np.zeros((4, 4)))

    @given(arrays(float, st.integers(3, 25), elements=finite))
    def test_self_nonnegative(self, x):
        a = double_center(pairwise_distances(x))
        assert dcov2(a, a) >= 0


class TestDcor:
    def test_affine(self):
        assert dcor([0, 1], [1, 3]) == pytest.approx(1.0, abs=1e-15)

    def test_constant(self, rng):
        assert dcor(rng.standard_normal(10), np.full(10, 3.0)) == 0

    def test_sign_flip(self, rng):
        x = rng.standard_normal(20)
        assert dcor(x, -x) == pytest.approx(1.0, abs=1e-14)

    @settings(max_examples=50)
    @given(
        st.integers(3, 30).flatmap(
            lambda n: st.tuples(
                arrays(float, n, elements=finite, unique=True), arrays(float, n, elements=finite)
            )
        ),
        st.floats(0.01, 100) | st.floats(-100, -0.01),
        finite,
    )
    def test_range_and_affine_invariance(self, xy, a, b):
        x, y = xy
        r = dcor(x, y)
        assert 0 <= r <= 1
        assert dcor(a * x + b, y) == pytest.approx(r, abs=1e-10)

    def test_v_vector_identity(self, rng):
        x, y = rng.standard_normal(12), np.sin(rng.standard_normal(12))
        assert dcor(x, y) ** 2 == pytest.approx(pearson(v_vector(x), v_vector(y)), abs=1e-12)

    def test_literal(self, rng):
        x, y = rng.standard_normal(15), rng.standard_normal(15)
        assert dcor(x, y) == pytest.approx(literal_dcor(list(x), list(y)), rel=1e-12)


class TestDcorMatrix:
    def test_affine_pair(self):
        x = np.array([0.0, 1.0, 2.5, 4.0])
        m = dcor_matrix(Dataset(np.column_stack([x, 2 * x + 1])))
        assert m.scores[0, 1] == pytest.approx(1.0, abs=1e-14)

    def test_shifted_copies(self, rng):
        x = rng.standard_normal(10)
        m = dcor_matrix(Dataset(np.column_stack([x, x + 1, x - 3])))
        np.testing.assert_allclose(m.scores[np.triu_indices(3, 1)], 1.0, atol=1e-14)

    @pytest.mark.parametrize("threads", [1, 3])
    def test_matches_scalar(self, rng, threads):
        d = Dataset(rng.standard_normal((30, 4)))
        m = dcor_matrix(d, threads=threads)
        for i in range(4):
            for j in range(4):
                if i != j:
                    assert m.scores[i, j] == pytest.approx(dcor(d.values[:, i], d.values[:, j]), abs=1e-14)
        assert m.method == "dcor"

    def test_constant_column_scores_zero(self, rng):
        v = rng.standard_normal((10, 3))
        v[:, 1] = 4.0
        m = dcor_matrix(Dataset(v))
        assert not m.scores[1].any()


class TestUCenter:
    def test_zero(self):
        assert not u_center(np.zeros((5, 5))).any()

    def test_row_sums(self, rng):
        a = pairwise_distances(rng.standard_normal(10))
        u = u_center(a)
        assert np.all(np.abs(u.sum(axis=1)) < 1e-10)
        assert np.array_equal(u, u.T)
        assert not np.diag(u).any()

    def test_literal(self):
        a = pairwise_distances([0, 1, 2, 4])
        np.testing.assert_allclose(u_center(a), literal_u_center(a.tolist()), atol=1e-12, rtol=0)

    def test_small_n(self):
        with pytest.raises(DimensionError):
            u_center(np.zeros((3, 3)))


class TestBiasCorrected:
    def test_self(self, rng):
        a = u_center(pairwise_distances(rng.standard_normal(20)))
        assert bias_corrected_dcor2(a, a) == pytest.approx(1.0, abs=1e-14)

    def test_zero(self, rng):
        a = u_center(pairwise_distances(rng.standard_normal(20)))
        assert bias_corrected_dcor2(a, np.zeros_like(a)) == 0

    def test_independent_near_zero(self):
        for seed in range(20):
            r = np.random.default_rng(seed)
            x, y = r.standard_normal(200), r.standard_normal(200)
            value = bias_corrected_dcor2(u_center(pairwise_distances(x)), u_center(pairwise_distances(y)))
            assert abs(value) < 0.15

    def test_mismatched(self):
        with pytest.raises(DimensionError):
            bias_corrected_dcor2(np.zeros((4, 4)), np.zeros((5, 5)))


class TestPermutation:
    def test_identical(self, rng):
        x = rng.standard_normal(50)
        assert permutation_pvalue(x, x, B=99, seed=1) == pytest.approx(1 / 100)

    def test_deterministic(self, rng):
        x, y = rng.standard_normal(30), rng.standard_normal(30)
        assert permutation_pvalue(x, y, 49, 5) == permutation_pvalue(x, y, 49, 5)

    def test_null_roughly_uniform(self):
        ps = []
        for rep in range(50):
            r = np.random.default_rng(1000 + rep)
            ps.append(permutation_pvalue(r.standard_normal(100), r.standard_normal(100), B=199, seed=rep))
        assert 0.35 <= np.mean(ps) <= 0.65
        assert all(0 < p <= 1 for p in ps)


def test_bivariate_normal_dcov_below_cov():
    r = np.random.default_rng(3)
    z = r.standard_normal((2000, 2))
    x = z[:, 0]
    y = 0.5 * z[:, 0] + np.sqrt(0.75) * z[:, 1]
    x, y = (x - x.mean()) / x.std(ddof=1), (y - y.mean()) / y.std(ddof=1)
    dc = np.sqrt(dcov2(double_center(pairwise_distances(x)), double_center(pairwise_distances(y))))
    assert dc <= abs(np.cov(x, y)[0, 1]) + 0.02
