import numpy as np
import pytest

from specreg._backend import kernels
from specreg.linalg import (
    RankDeficiencyError,
    SingularMatrixError,
    back_substitute,
    cumulative_op,
    fft_radix2,
    jacobi_svd,
    qr_mgs,
)


def direct_dft(series, M):
    """O(M^2) reference with the t-from-1 indexing convention."""
    r = np.zeros(M)
    r[: len(series)] = series
    t = np.arange(1, M + 1)
    j = np.arange(M)[:, None]
    return (r * np.exp(-2j * np.pi * j * t / M)).sum(axis=1)


class TestQr:
    def test_identity_passthrough(self):
        qr = qr_mgs(np.eye(4))
        assert np.array_equal(qr.Q, np.eye(4))
        assert np.array_equal(qr.R, np.eye(4))

    def test_already_triangular(self):
        P = np.array([[1.0, 1.0], [0.0, 1.0]])
        qr = qr_mgs(P)
        assert np.allclose(qr.Q, np.eye(2), atol=1e-15)
        assert np.allclose(qr.R, P, atol=1e-15)

    def test_random_rectangular_invariants(self):
        rng = np.random.default_rng(3)
        P = rng.uniform(-1.0, 1.0, (250, 90))
        qr = qr_mgs(P)
        assert np.max(np.abs(qr.Q.T @ qr.Q - np.eye(90))) <= 1e-10
        assert np.max(np.abs(qr.Q @ qr.R - P)) <= 1e-10 * np.max(np.abs(P))
        assert np.all(np.diag(qr.R) > 0)
        assert np.array_equal(qr.R, np.triu(qr.R))

    def test_rank_deficiency_names_the_column(self):
        P = np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 1.0], [0.0, 0.0, 0.0],
                      [1.0, 1.0, 2.0]])
        with pytest.raises(RankDeficiencyError, match="column 3"):
            qr_mgs(P)

    def test_wide_matrix_rejected(self):
        with pytest.raises(ValueError):
            qr_mgs(np.ones((2, 3)))

    def test_column_scaling_does_not_change_the_verdict(self):
        rng = np.random.default_rng(4)
        P = rng.standard_normal((30, 6))
        P[:, 4] *= 1e-9  # tiny but independent column must survive
        qr = qr_mgs(P)
        assert np.max(np.abs(qr.Q @ qr.R - P)) <= 1e-10 * np.max(np.abs(P))


class TestBackSubstitute:
    def test_identity(self):
        assert np.array_equal(back_substitute(np.eye(2), np.array([3.0, 1.0])),
                              np.array([3.0, 1.0]))

    def test_hand_solved_system(self):
        R = np.array([[2.0, 1.0], [0.0, 1.0]])
        got = back_substitute(R, np.array([3.0, 1.0]))
        assert np.allclose(got, [1.0, 1.0], atol=1e-15)

    def test_round_trip(self):
        rng = np.random.default_rng(5)
        R = np.triu(rng.uniform(0.5, 2.0, (40, 40)))
        xi = rng.standard_normal(40)
        y = R @ xi
        got = back_substitute(R, y)
        assert np.max(np.abs(got - xi)) <= 1e-12 * np.max(np.abs(xi))

    def test_zero_diagonal_is_named(self):
        R = np.array([[1.0, 2.0], [0.0, 0.0]])
        with pytest.raises(SingularMatrixError, match="2"):
            back_substitute(R, np.array([1.0, 1.0]))


class TestJacobiSvd:
    def test_diagonal_matrix(self):
        f = jacobi_svd(np.diag([3.0, 2.0]))
        assert np.allclose(f.sigma, [3.0, 2.0], atol=1e-14)
        assert np.max(np.abs(np.abs(f.U) - np.eye(2))) <= 1e-14
        assert np.max(np.abs(np.abs(f.V) - np.eye(2))) <= 1e-14

    def test_rank_one_matrix(self):
        f = jacobi_svd(np.array([[1.0, 1.0], [1.0, 1.0]]))
        assert f.sigma[0] == pytest.approx(2.0, rel=1e-14)
        assert abs(f.sigma[1]) <= 1e-12

    def test_reconstruction_and_orthogonality(self):
        rng = np.random.default_rng(6)
        M = rng.standard_normal((50, 50))
        f = jacobi_svd(M)
        assert np.max(np.abs(f.U @ np.diag(f.sigma) @ f.V.T - M)) \
            <= 1e-8 * np.max(np.abs(M))
        assert np.max(np.abs(f.U.T @ f.U - np.eye(50))) <= 1e-10
        assert np.max(np.abs(f.V.T @ f.V - np.eye(50))) <= 1e-10
        assert np.all(np.diff(f.sigma) <= 0) and np.all(f.sigma >= 0)

    def test_values_match_numpy(self):
        rng = np.random.default_rng(7)
        M = rng.standard_normal((30, 30))
        f = jacobi_svd(M)
        ref = np.linalg.svd(M, compute_uv=False)
        assert np.max(np.abs(f.sigma - ref)) <= 1e-8 * ref[0]

    def test_scaled_cumulative_operator(self):
        L, _ = cumulative_op(50, 0.02)
        M = L / 0.05
        f = jacobi_svd(M)
        assert np.max(np.abs(f.U @ np.diag(f.sigma) @ f.V.T - M)) \
            <= 1e-8 * np.max(np.abs(M))

    def test_wide_sigma_spread_keeps_u_orthogonal(self):
        # inverting through U is only as good as U's orthogonality, so the
        # sweep tolerance must not go slack on small singular-value pairs
        L, _ = cumulative_op(300, 1.0 / 300.0)
        f = jacobi_svd(L)
        assert np.max(np.abs(f.U.T @ f.U - np.eye(300))) <= 1e-11

    def test_nonsquare_rejected(self):
        with pytest.raises(ValueError):
            jacobi_svd(np.ones((3, 2)))

    def test_sweep_budget_sentinel(self):
        # kernel-level: a single sweep cannot orthogonalize this, and the
        # failure comes back as a sentinel instead of an exception
        rng = np.random.default_rng(8)
        M = rng.standard_normal((8, 8))
        _, _, sweeps = kernels().jacobi_svd_sweeps(M, 1, 0.0)
        assert sweeps == -1


class TestCumulativeOp:
    def test_inverse_is_exact(self):
        L, L_inv = cumulative_op(3, 0.5)
        assert np.array_equal(L @ L_inv, np.eye(3))
        assert np.array_equal(L_inv @ L, np.eye(3))

    def test_difference_structure(self):
        _, L_inv = cumulative_op(3, 0.25)
        g = np.array([1.0, 5.0, 4.0])
        assert np.allclose(L_inv @ g, np.array([1.0, 4.0, -1.0]) / 0.25,
                           atol=1e-14)

    def test_single_point(self):
        L, L_inv = cumulative_op(1, 0.1)
        assert L.shape == (1, 1) and L[0, 0] == 0.1
        assert L_inv[0, 0] == pytest.approx(10.0, rel=1e-15)

    def test_large_size_round_trip(self):
        L, L_inv = cumulative_op(1000, 1e-3)
        rng = np.random.default_rng(9)
        g = rng.standard_normal(1000)
        assert np.max(np.abs(L @ (L_inv @ g) - g)) <= 1e-13 * np.max(np.abs(g))

    def test_validation(self):
        with pytest.raises(ValueError):
            cumulative_op(0, 0.1)
        with pytest.raises(ValueError):
            cumulative_op(5, 0.0)


class TestFft:
    def test_impulse_spectrum_is_flat(self):
        z = np.zeros(8)
        z[0] = 1.0
        spec = fft_radix2(z, 8)
        assert np.max(np.abs(np.abs(spec) - 1.0)) <= 1e-14

    def test_constant_series_concentrates_at_zero(self):
        spec = fft_radix2(np.ones(16), 16)
        assert abs(spec[0]) == pytest.approx(16.0, rel=1e-14)
        assert np.max(np.abs(spec[1:])) <= 1e-12

    def test_parseval(self):
        rng = np.random.default_rng(10)
        r = rng.standard_normal(250)
        spec = fft_radix2(r, 256)
        assert np.sum(np.abs(spec) ** 2) / 256 == pytest.approx(
            np.sum(r * r), abs=1e-10 * np.sum(r * r))

    @pytest.mark.parametrize("m,M", [(5, 8), (16, 16), (33, 64), (64, 64)])
    def test_matches_direct_sum(self, m, M):
        rng = np.random.default_rng(11 + m)
        r = rng.standard_normal(m)
        assert np.max(np.abs(fft_radix2(r, M) - direct_dft(r, M))) <= 1e-10

    def test_default_padding_is_next_power_of_two(self):
        assert fft_radix2(np.ones(5)).shape == (8,)
        assert fft_radix2(np.ones(8)).shape == (8,)

    def test_validation(self):
        with pytest.raises(ValueError):
            fft_radix2(np.ones(5), 6)  # not a power of two
        with pytest.raises(ValueError):
            fft_radix2(np.ones(9), 8)  # shorter than the series
