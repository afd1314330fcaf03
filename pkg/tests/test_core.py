import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lrsylv.core import (
    FactoredRhs,
    LowRankFactors,
    compress,
    concat_factors,
    dense_svd,
    eps_rank,
    frob_norm,
    materialize,
    read_bundle,
    write_bundle,
    zero_factors,
)

rng = np.random.default_rng(42)


def random_factors(m, n, t, seed=0, complex_=True):
    g = np.random.default_rng(seed)
    left = g.standard_normal((m, t))
    right = g.standard_normal((n, t))
    if complex_:
        left = left + 1j * g.standard_normal((m, t))
        right = right + 1j * g.standard_normal((n, t))
    middle = np.diag(g.uniform(0.5, 2.0, t))
    return LowRankFactors(left, middle, right)


class TestMaterialize:
    def test_identity(self):
        eye = np.eye(4)
        f = LowRankFactors(eye, eye, eye)
        assert np.array_equal(materialize(f), eye)

    def test_rank_one_outer(self):
        u = np.array([[1.0], [0.0], [0.0]])
        v = np.array([[0.0], [1.0]])
        f = LowRankFactors(u, np.array([[2.0]]), v)
        M = materialize(f)
        assert np.linalg.norm(M, 2) == pytest.approx(2.0)
        assert M[0, 1] == pytest.approx(2.0)

    def test_matches_dense_triple_product(self):
        f = random_factors(8, 8, 3, seed=1)
        expected = f.left @ f.middle @ f.right.conj().T
        assert np.allclose(materialize(f), expected, rtol=0, atol=1e-14)

    def test_rank_zero_is_zero_matrix(self):
        assert np.array_equal(materialize(zero_factors(3, 5)), np.zeros((3, 5)))


class TestCompress:
    def test_truncates_below_tolerance(self):
        left = np.linalg.qr(rng.standard_normal((6, 2)))[0]
        right = np.linalg.qr(rng.standard_normal((5, 2)))[0]
        f = LowRankFactors(left, np.diag([1.0, 1e-12]), right)
        g = compress(f, 1e-8)
        assert g.rank == 1
        err = np.linalg.norm(materialize(f) - materialize(g), 2)
        assert err <= 1.1e-12

    def test_duplicate_column_removed(self):
        f = random_factors(7, 7, 3, seed=2)
        left = np.concatenate([f.left, f.left[:, -1:]], axis=1)
        right = np.concatenate([f.right, f.right[:, -1:]], axis=1)
        middle = np.zeros((4, 4), dtype=complex)
        middle[:3, :3] = f.middle
        middle[3, 3] = 0.5
        padded = LowRankFactors(left, middle, right)
        g = compress(padded, 1e-13)
        assert g.rank == 3

    def test_tol_zero_roundtrip(self):
        f = random_factors(20, 20, 8, seed=3)
        g = compress(f, 0.0)
        a, b = materialize(f), materialize(g)
        assert np.linalg.norm(a - b) <= 1e-13 * np.linalg.norm(a)

    def test_idempotent(self):
        f = random_factors(15, 12, 6, seed=4)
        g1 = compress(f, 1e-6)
        g2 = compress(g1, 1e-6)
        assert g2.rank == g1.rank
        a, b = materialize(g1), materialize(g2)
        assert np.linalg.norm(a - b) <= 1e-13 * np.linalg.norm(a)

    def test_output_orthonormal_and_sorted(self):
        g = compress(random_factors(10, 9, 5, seed=5), 1e-10)
        assert np.allclose(g.left.conj().T @ g.left, np.eye(g.rank), atol=1e-12)
        assert np.allclose(g.right.conj().T @ g.right, np.eye(g.rank), atol=1e-12)
        d = np.diag(g.middle).real
        assert np.all(d[:-1] >= d[1:]) and np.all(d > 0)


class TestDenseSvd:
    def test_diagonal(self):
        s, _, _ = dense_svd(np.diag([3.0, 1.0, 2.0]))
        assert np.allclose(s, [3.0, 2.0, 1.0])

    def test_zero_matrix(self):
        s, _, _ = dense_svd(np.zeros((4, 3)))
        assert np.all(s == 0.0)

    def test_orthonormal_and_reconstructs(self):
        M = rng.standard_normal((16, 12))
        s, U, V = dense_svd(M)
        assert np.allclose(U.conj().T @ U, np.eye(12), atol=1e-13)
        assert np.allclose(V.conj().T @ V, np.eye(12), atol=1e-13)
        assert np.allclose(U @ np.diag(s) @ V.conj().T, M, atol=1e-12)

    def test_transpose_invariance(self):
        M = rng.standard_normal((9, 13)) + 1j * rng.standard_normal((9, 13))
        s1, _, _ = dense_svd(M)
        s2, _, _ = dense_svd(M.conj().T)
        assert np.allclose(s1, s2, rtol=1e-12)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            dense_svd(np.array([[1.0, np.nan], [0.0, 1.0]]))


class TestEpsRank:
    def test_direct_from_definition(self):
        assert eps_rank([1.0, 0.5, 1e-9], 1e-8) == 2

    def test_values_past_end_are_zero(self):
        assert eps_rank([1.0], 0.5) == 1

    def test_epsilon_validation(self):
        with pytest.raises(ValueError):
            eps_rank([1.0], 0.0)
        with pytest.raises(ValueError):
            eps_rank([1.0], 1.0)

    @given(st.floats(min_value=1e-12, max_value=0.5), st.floats(min_value=1e-12, max_value=0.5))
    @settings(max_examples=30, deadline=None)
    def test_monotone_in_epsilon(self, e1, e2):
        s = np.sort(np.abs(np.random.default_rng(0).standard_normal(20)))[::-1]
        lo, hi = min(e1, e2), max(e1, e2)
        assert eps_rank(s, lo) >= eps_rank(s, hi)


class TestFrobNorm:
    def test_rank_one(self):
        u = np.array([[0.6], [0.8]])
        v = np.array([[1.0], [0.0], [0.0]])
        f = LowRankFactors(u, np.array([[-2.5]]), v)
        assert frob_norm(f) == pytest.approx(2.5)

    def test_three_four_five(self):
        left = np.linalg.qr(rng.standard_normal((6, 2)))[0]
        right = np.linalg.qr(rng.standard_normal((6, 2)))[0]
        f = LowRankFactors(left, np.diag([3.0, 4.0]), right)
        assert frob_norm(f) == pytest.approx(5.0)

    def test_matches_materialization(self):
        f = random_factors(30, 30, 5, seed=6)
        assert frob_norm(f) == pytest.approx(
            np.linalg.norm(materialize(f)), rel=1e-12
        )

    def test_rank_zero(self):
        assert frob_norm(zero_factors(4, 4)) == 0.0


class TestFactoredRhs:
    def test_weights_must_be_nonincreasing(self):
        u = np.ones((3, 2)) / np.sqrt(3)
        with pytest.raises(ValueError):
            FactoredRhs(u, np.array([1.0, 2.0]), u)

    def test_unit_outer_products_enforced(self):
        u = np.ones((3, 1))  # norm sqrt(3), not unit
        with pytest.raises(ValueError):
            FactoredRhs(3.0 * u, np.array([1.0]), u)

    def test_dense_reconstruction(self):
        g = np.random.default_rng(7)
        U = np.linalg.qr(g.standard_normal((6, 3)))[0]
        V = np.linalg.qr(g.standard_normal((5, 3)))[0]
        w = np.array([2.0, 1.0, 0.25])
        rhs = FactoredRhs(U, w, V)
        assert np.allclose(rhs.dense(), U @ np.diag(w) @ V.conj().T)
        assert rhs.rho == 3


class TestConcat:
    def test_sum_of_materializations(self):
        f = random_factors(8, 6, 2, seed=8)
        g = random_factors(8, 6, 3, seed=9)
        h = concat_factors(f, g)
        assert h.rank == 5
        assert np.allclose(materialize(h), materialize(f) + materialize(g))


class TestBundleIO(object):
    def test_roundtrip(self, tmp_path):
        f = random_factors(7, 5, 3, seed=10)
        write_bundle(str(tmp_path / "b"), f)
        g = read_bundle(str(tmp_path / "b"))
        assert np.allclose(materialize(f), materialize(g), atol=1e-14)

    def test_real_roundtrip(self, tmp_path):
        f = random_factors(4, 4, 2, seed=11, complex_=False)
        write_bundle(str(tmp_path / "r"), f)
        g = read_bundle(str(tmp_path / "r"))
        assert np.allclose(materialize(f), materialize(g), atol=1e-14)


@given(
    st.integers(min_value=1, max_value=6),
    st.integers(min_value=3, max_value=12),
    st.floats(min_value=1e-12, max_value=1e-2),
)
@settings(max_examples=40, deadline=None)
def test_compress_error_contract(t, m, tol):
    f = random_factors(m + 2, m, min(t, m), seed=t * 100 + m)
    g = compress(f, tol)
    err = np.linalg.norm(materialize(f) - materialize(g), 2)
    largest = np.max(np.diag(g.middle).real) if g.rank else 0.0
    # discarded part is bounded by tol times the largest retained weight
    assert err <= tol * largest + 1e-13 * max(largest, 1.0)
    assert g.rank <= f.rank
