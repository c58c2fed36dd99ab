import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skewgibbs.errors import IndexOutOfRange, NotPositiveDefinite
from skewgibbs.numerics import (
    BlockPartition,
    SpdMatrix,
    cholesky,
    partition_at,
    reassemble_at,
    spd_inverse,
    spd_logdet,
    spd_solve,
    symmetrize,
)


def random_spd(n, rng, scale=1.0):
    a = rng.standard_normal((n, n))
    return a @ a.T + scale * np.eye(n)


class TestCholesky:
    def test_identity(self):
        assert np.allclose(cholesky(np.eye(3)), np.eye(3))

    def test_hand_case(self):
        lower = cholesky(np.array([[4.0, 2.0], [2.0, 3.0]]))
        expected = np.array([[2.0, 0.0], [1.0, np.sqrt(2.0)]])
        assert np.allclose(lower, expected, atol=1e-12)
        assert np.allclose(lower @ lower.T, [[4, 2], [2, 3]], rtol=1e-10)

    def test_indefinite_raises(self):
        with pytest.raises(NotPositiveDefinite):
            cholesky(np.array([[1.0, 2.0], [2.0, 1.0]]))

    def test_reconstruction_random(self):
        rng = np.random.default_rng(0)
        for n in (1, 2, 5, 20):
            a = random_spd(n, rng)
            lower = cholesky(a)
            assert np.tril(lower).tolist() == lower.tolist()
            assert np.all(np.diag(lower) > 0)
            rel = np.abs(lower @ lower.T - a).max() / np.abs(a).max()
            assert rel < 1e-10


class TestSpdSolve:
    def test_identity(self):
        assert np.allclose(spd_solve(np.eye(2), [3.0, -1.0]), [3.0, -1.0])

    def test_diagonal(self):
        x = spd_solve(np.diag([2.0, 4.0]), np.array([2.0, 8.0]))
        assert np.allclose(x, [1.0, 2.0])

    def test_residual_oracle(self):
        rng = np.random.default_rng(1)
        a = random_spd(5, rng)
        b = rng.standard_normal(5)
        x = spd_solve(a, b)
        assert np.linalg.norm(a @ x - b) / np.linalg.norm(b) <= 1e-10

    def test_logdet_matches_slogdet(self):
        rng = np.random.default_rng(2)
        a = random_spd(6, rng)
        assert spd_logdet(a) == pytest.approx(np.linalg.slogdet(a)[1], rel=1e-10)

    def test_inverse(self):
        rng = np.random.default_rng(3)
        a = random_spd(4, rng)
        assert np.allclose(spd_inverse(a) @ a, np.eye(4), atol=1e-10)


class TestSpdMatrix:
    def test_symmetrizes_roundoff(self):
        a = np.array([[2.0, 1.0 + 1e-15], [1.0, 2.0]])
        m = SpdMatrix(a)
        assert np.array_equal(m.entries, m.entries.T)
        assert m.dim == 2

    def test_rejects_asymmetric(self):
        with pytest.raises(NotPositiveDefinite):
            SpdMatrix(np.array([[2.0, 0.5], [0.0, 2.0]]))

    def test_rejects_indefinite(self):
        with pytest.raises(NotPositiveDefinite):
            SpdMatrix(np.array([[1.0, 2.0], [2.0, 1.0]]))


class TestPartition:
    def test_identity_any_pivot(self):
        for j in range(3):
            part = partition_at(np.eye(3), np.eye(3), j)
            assert part.scalar_diag == 1.0
            assert np.array_equal(part.off_col, np.zeros(2))
            assert np.array_equal(part.rest, np.eye(2))

    def test_hand_permutation(self):
        omega = np.array([[2.0, 1.0], [1.0, 3.0]])
        part = partition_at(omega, np.eye(2), 1)
        assert part.scalar_diag == 3.0
        assert np.array_equal(part.off_col, [1.0])
        assert np.array_equal(part.rest, [[2.0]])

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            partition_at(np.eye(2), np.eye(2), 2)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=5),
           st.integers(min_value=0, max_value=2**32 - 1))
    def test_roundtrip_exact(self, n, j, seed):
        j = j % n
        rng = np.random.default_rng(seed)
        omega = random_spd(n, rng)
        s = random_spd(n, rng)
        part = partition_at(omega, s, j)
        back_omega, back_s = part.reassemble()
        assert np.array_equal(back_omega, omega)
        assert np.array_equal(back_s, s)

    def test_reassemble_standalone(self):
        rng = np.random.default_rng(4)
        omega = random_spd(4, rng)
        part = partition_at(omega, omega, 2)
        back = reassemble_at(part.scalar_diag, part.off_col, part.rest, 2)
        assert np.array_equal(back, omega)

    def test_trace_identity(self):
        rng = np.random.default_rng(5)
        omega = random_spd(5, rng)
        s = random_spd(5, rng)
        full = np.trace(omega @ s)
        for j in range(5):
            part = partition_at(omega, s, j)
            split = (
                part.s_scalar * part.scalar_diag
                + 2.0 * part.s_col @ part.off_col
                + np.trace(part.rest @ part.s_rest)
            )
            assert split == pytest.approx(full, rel=1e-10)


def test_symmetrize_halves_asymmetry():
    a = np.array([[1.0, 2.0], [0.0, 1.0]])
    assert np.array_equal(symmetrize(a), np.array([[1.0, 1.0], [1.0, 1.0]]))


def test_block_partition_is_dataclass_with_order():
    part = partition_at(np.eye(3), np.eye(3), 1)
    assert isinstance(part, BlockPartition)
    assert part.order.tolist() == [1, 0, 2]
