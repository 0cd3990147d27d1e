import numpy as np
import pytest
from numpy.testing import assert_allclose

import graphscatter as gs
from graphscatter.core import (
    weighted_frobenius_norm,
    weighted_operator_norm,
    _spectral_order,
)
from graphscatter.errors import (
    AsymmetricAdjacency,
    DegenerateGraph,
    NegativeWeight,
    NormalizedNeedsUnitWeights,
    IsolatedVertexInNormalized,
    NotNormal,
    SizeMismatch,
    SpaceMismatch,
    WeightBelowOne,
)


def random_normal_operator(space, rng):
    """Random normal matrix U diag(z) U* via a Haar-ish unitary."""
    n = space.size
    q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return gs.ShiftOperator(space, q @ np.diag(z) @ q.conj().T)


class TestSpaces:
    def test_default_weights(self):
        space = gs.build_space(3)
        assert_allclose(space.weights, np.ones(3))

    def test_weighted_space(self):
        space = gs.build_space(6, (1, 1, 1, 1, 1, 2))
        assert space.mu_total == 7

    def test_weight_below_one(self):
        with pytest.raises(WeightBelowOne):
            gs.build_space(2, (0.5, 1))

    def test_weight_escape_hatch(self):
        space = gs.build_space(2, (0.5, 1), min_weight=0.1)
        assert space.weights[0] == 0.5

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatch):
            gs.build_space(3, (1, 1))

    def test_signal_length_checked(self):
        space = gs.build_space(3)
        with pytest.raises(SizeMismatch):
            gs.Signal(space, np.ones(2))

    def test_immutability(self):
        space = gs.build_space(3)
        f = gs.Signal(space, np.ones(3))
        with pytest.raises(ValueError):
            f.values[0] = 2.0
        with pytest.raises(ValueError):
            space.weights[0] = 2.0
        op = gs.ShiftOperator(space, np.eye(3))
        with pytest.raises(ValueError):
            op.matrix[0, 0] = 5.0


class TestAdjacencyAndDegree:
    def test_adjacency_operator(self):
        a = np.array([[0.0, 1], [1, 0]])
        op = gs.adjacency_operator(a, gs.build_space(2))
        assert_allclose(np.sort(op.spectrum.real), [-1, 1], atol=1e-12)
        assert op.kind == "adjacency"

    def test_degree_operator(self):
        a = np.ones((3, 3)) - np.eye(3)
        op = gs.degree_operator(a, gs.build_space(3))
        assert_allclose(op.matrix.real, 2 * np.eye(3))


class TestInnerProduct:
    def test_basis_vector(self):
        space = gs.build_space(3)
        f = gs.Signal(space, [1, 0, 0])
        assert gs.inner_product(f, f) == pytest.approx(1)

    def test_weighted_sum(self):
        # oracle: direct summation 1*1*1 + 1*1*2 = 3
        space = gs.build_space(2, (1, 2))
        f = gs.Signal(space, [1, 1])
        assert gs.inner_product(f, f) == pytest.approx(3)

    def test_orthogonal_complex(self):
        space = gs.build_space(2)
        f = gs.Signal(space, [1j, 0])
        g = gs.Signal(space, [0, 1])
        assert gs.inner_product(f, g) == 0

    def test_conjugate_linear_first(self):
        space = gs.build_space(2)
        f = gs.Signal(space, [1j, 2])
        g = gs.Signal(space, [3, -1j])
        assert gs.inner_product(f, g) == pytest.approx(np.conj(gs.inner_product(g, f)))

    def test_space_mismatch(self):
        f = gs.Signal(gs.build_space(2), [1, 1])
        g = gs.Signal(gs.build_space(2, (1, 2)), [1, 1])
        with pytest.raises(SpaceMismatch):
            gs.inner_product(f, g)

    def test_norm_positive_definite(self):
        space = gs.build_space(4, (1, 2, 3, 1))
        rng = np.random.default_rng(0)
        v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        assert gs.Signal(space, v).norm() > 0
        assert gs.Signal(space, np.zeros(4)).norm() == 0


class TestLaplacian:
    def test_path_two(self):
        space = gs.build_space(2)
        op = gs.laplacian(np.array([[0, 1], [1, 0]]), space)
        assert_allclose(op.matrix.real, [[1, -1], [-1, 1]])

    def test_weighted_row_rescaling(self):
        space = gs.build_space(6, (1, 1, 1, 1, 1, 2))
        a = np.zeros((6, 6))
        a[0, 5] = a[5, 0] = 1
        a[4, 5] = a[5, 4] = 1
        op = gs.laplacian(a, space)
        unit = gs.laplacian(a, gs.build_space(6))
        assert_allclose(op.matrix[5], unit.matrix[5] / 2)
        assert_allclose(op.matrix[:5], unit.matrix[:5])

    def test_k3_eigenvalues(self):
        # oracle: brute-force eigensolve of D - W for K3
        a = np.ones((3, 3)) - np.eye(3)
        oracle = np.sort(np.linalg.eigvalsh(np.diag(a.sum(1)) - a))
        op = gs.laplacian(a, gs.build_space(3))
        assert_allclose(op.spectrum.real, oracle, atol=1e-12)
        assert_allclose(oracle, [0, 3, 3], atol=1e-12)

    def test_asymmetric_rejected(self):
        with pytest.raises(AsymmetricAdjacency):
            gs.laplacian(np.array([[0, 1], [0, 0]]), gs.build_space(2))

    def test_negative_rejected(self):
        with pytest.raises(NegativeWeight):
            gs.laplacian(np.array([[0, -1], [-1, 0]]), gs.build_space(2))

    def test_normalized_unit_weights_only(self):
        a = np.array([[0.0, 1], [1, 0]])
        with pytest.raises(NormalizedNeedsUnitWeights):
            gs.laplacian(a, gs.build_space(2, (1, 2)), normalized=True)

    def test_normalized_isolated_vertex(self):
        a = np.zeros((2, 2))
        with pytest.raises(IsolatedVertexInNormalized):
            gs.laplacian(a, gs.build_space(2), normalized=True)

    def test_normalized_matrix(self):
        a = np.array([[0.0, 1], [1, 0]])
        op = gs.laplacian(a, gs.build_space(2), normalized=True)
        assert_allclose(op.matrix.real, [[1, -1], [-1, 1]], atol=1e-12)

    def test_spectrum_real_nonnegative(self):
        from graphscatter.datasets import random_connected_adjacency

        rng = np.random.default_rng(17)
        for _ in range(10):
            n = int(rng.integers(3, 20))
            a = random_connected_adjacency(n, rng, weighted=True)
            spec = gs.laplacian(a, gs.build_space(n)).spectrum
            assert np.abs(spec.imag).max() <= 1e-10
            assert spec.real.min() >= -gs.EIGEN_TOLERANCE


class TestRescaledLaplacian:
    def test_path_two(self):
        # oracle: {0, 2} / 2
        op = gs.rescaled_laplacian(np.array([[0, 1], [1, 0]]), gs.build_space(2))
        assert_allclose(op.spectrum.real, [0, 1], atol=1e-12)

    def test_k3(self):
        # oracle: {0, 3, 3} / 3
        a = np.ones((3, 3)) - np.eye(3)
        op = gs.rescaled_laplacian(a, gs.build_space(3))
        assert_allclose(op.spectrum.real, [0, 1, 1], atol=1e-12)

    def test_edgeless_graph(self):
        with pytest.raises(DegenerateGraph):
            gs.rescaled_laplacian(np.zeros((3, 3)), gs.build_space(3))

    def test_spectrum_in_unit_interval(self):
        rng = np.random.default_rng(7)
        from graphscatter.datasets import random_connected_adjacency

        for _ in range(10):
            n = int(rng.integers(3, 20))
            a = random_connected_adjacency(n, rng, weighted=True)
            op = gs.rescaled_laplacian(a, gs.build_space(n))
            assert op.spectrum.real.min() >= -1e-8
            assert op.spectrum.real.max() <= 1 + 1e-8


class TestDecompose:
    def test_identity_invariants(self):
        op = gs.ShiftOperator(gs.build_space(3), np.eye(3))
        dec = gs.decompose(op)
        assert_allclose(dec.eigenvalues, np.ones(3))
        assert dec.gram_defect <= 1e-8

    def test_p2_hand_solve(self):
        # oracle: hand eigensolve, phi_0 = (1, 1)/sqrt(2)
        op = gs.rescaled_laplacian(np.array([[0, 1], [1, 0]]), gs.build_space(2))
        dec = gs.decompose(op)
        assert_allclose(dec.eigenvalues.real, [0, 1], atol=1e-12)
        assert_allclose(dec.eigenvectors[:, 0].real, np.ones(2) / np.sqrt(2), atol=1e-12)

    def test_rotation_not_self_adjoint(self):
        # oracle: characteristic polynomial x^2 + 1 = 0
        op = gs.ShiftOperator(gs.build_space(2), np.array([[0, -1], [1, 0]]))
        assert not op.self_adjoint
        assert_allclose(op.spectrum, [-1j, 1j], atol=1e-12)

    def test_not_normal_rejected(self):
        with pytest.raises(NotNormal):
            gs.ShiftOperator(gs.build_space(2), np.array([[0.0, 1], [0, 0]]))

    def test_cached(self):
        op = gs.ShiftOperator(gs.build_space(3), np.diag([1.0, 2.0, 3.0]))
        assert gs.decompose(op) is gs.decompose(op)

    def test_cache_safe_under_concurrency(self):
        # concurrent readers see one complete decomposition
        import concurrent.futures

        rng = np.random.default_rng(41)
        op = random_normal_operator(gs.build_space(12), rng)
        with concurrent.futures.ThreadPoolExecutor(max_workers=8) as pool:
            results = list(pool.map(lambda _: gs.decompose(op), range(16)))
        assert all(r is results[0] for r in results)

    def test_weighted_orthonormality(self):
        rng = np.random.default_rng(3)
        space = gs.build_space(5, rng.uniform(1, 3, 5))
        sym = rng.standard_normal((5, 5))
        op = gs.laplacian(np.triu(abs(sym), 1) + np.triu(abs(sym), 1).T, space)
        dec = gs.decompose(op)
        gram = dec.eigenvectors.conj().T @ (space.weights[:, None] * dec.eigenvectors)
        assert_allclose(gram, np.eye(5), atol=1e-10)

    def test_constant_function_roundtrip(self):
        # constant-1 functional calculus reproduces the identity
        rng = np.random.default_rng(11)
        space = gs.build_space(6)
        op = random_normal_operator(space, rng)
        one = gs.FilterKernel("constant")
        v = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        assert_allclose(op.filter_values(one, v), v, atol=1e-8)

    def test_ordering_deterministic(self):
        vals = np.array([1 + 1j, 1 - 1j, 0.5, 1 + 5e-17])
        order = _spectral_order(vals)
        assert_allclose(vals[order], [0.5, 1 - 1j, 1 + 5e-17, 1 + 1j])


class TestFrobenius:
    def test_zero_distance(self):
        space = gs.build_space(2)
        a = gs.ShiftOperator(space, np.diag([1.0, 2.0]))
        assert gs.frobenius_distance(a, a) == 0

    def test_identity_vs_zero(self):
        space = gs.build_space(2)
        a = gs.ShiftOperator(space, np.eye(2))
        b = gs.ShiftOperator(space, np.zeros((2, 2)))
        assert gs.frobenius_distance(a, b) == pytest.approx(np.sqrt(2))

    def test_entrywise(self):
        # oracle: || diag(0, 2) ||_F = 2
        space = gs.build_space(2)
        a = gs.ShiftOperator(space, np.diag([1.0, 2.0]))
        b = gs.ShiftOperator(space, np.diag([1.0, 0.0]))
        assert gs.frobenius_distance(a, b) == pytest.approx(2.0)

    def test_space_mismatch(self):
        a = gs.ShiftOperator(gs.build_space(2), np.eye(2))
        b = gs.ShiftOperator(gs.build_space(2, (1, 2)), np.eye(2))
        with pytest.raises(SpaceMismatch):
            gs.frobenius_distance(a, b)

    def test_operator_norm_dominated(self):
        rng = np.random.default_rng(5)
        space = gs.build_space(6, rng.uniform(1, 2, 6))
        for _ in range(20):
            m = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
            assert weighted_operator_norm(m, space, space) <= \
                weighted_frobenius_norm(m, space) + 1e-10

    def test_unitary_invariance(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            m = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
            u, _ = np.linalg.qr(rng.standard_normal((5, 5))
                                + 1j * rng.standard_normal((5, 5)))
            v, _ = np.linalg.qr(rng.standard_normal((5, 5))
                                + 1j * rng.standard_normal((5, 5)))
            assert np.linalg.norm(u @ m @ v, "fro") == pytest.approx(
                np.linalg.norm(m, "fro"), abs=1e-8)


def random_self_adjoint_operator(space, rng):
    n = space.size
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return gs.ShiftOperator(space, 0.5 * (m + m.conj().T))


class TestLipschitzTransfer:
    def test_transfer_real_spectra(self):
        # || g(X) - g(Y) ||_F <= D_g || X - Y ||_F; sin(a.) has constant a on
        # the real line, which covers self-adjoint pairs
        rng = np.random.default_rng(21)
        space = gs.build_space(6)
        for _ in range(25):
            x = random_self_adjoint_operator(space, rng)
            y = random_self_adjoint_operator(space, rng)
            scale = rng.uniform(0.3, 3.0)
            g = gs.FilterKernel("sin_scaled", scale=scale)
            lhs = weighted_frobenius_norm(x.kernel_matrix(g) - y.kernel_matrix(g), space)
            assert lhs <= scale * gs.frobenius_distance(x, y) + 1e-8

    def test_transfer_complex_spectra(self):
        # linear kernels are globally Lipschitz on C, so general normal
        # pairs are fair game
        rng = np.random.default_rng(22)
        space = gs.build_space(6)
        for _ in range(25):
            x = random_normal_operator(space, rng)
            y = random_normal_operator(space, rng)
            c1 = complex(rng.standard_normal(), rng.standard_normal())
            g = gs.FilterKernel("polynomial", coeffs=(0.3, c1), lipschitz_bound=abs(c1))
            lhs = weighted_frobenius_norm(x.kernel_matrix(g) - y.kernel_matrix(g), space)
            assert lhs <= abs(c1) * gs.frobenius_distance(x, y) + 1e-8
