import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

import graphscatter as gs
from graphscatter.datasets import random_connected_adjacency
from graphscatter.errors import EmptySpectrum, SampleOutOfRange, SpaceMismatch
from graphscatter.kernels import PRESET_BANKS


class TestEvaluate:
    def test_delta_zero(self):
        k = gs.FilterKernel("delta_zero")
        assert gs.evaluate_kernel(k, 0) == 1
        assert gs.evaluate_kernel(k, 0.3) == 0

    def test_cosbar(self):
        k = gs.FilterKernel("cosbar_scaled", scale=math.pi)
        assert gs.evaluate_kernel(k, 0) == 0
        assert gs.evaluate_kernel(k, 1) == pytest.approx(-1)

    def test_sin(self):
        k = gs.FilterKernel("sin_scaled", scale=math.pi / 2)
        assert gs.evaluate_kernel(k, 1) == pytest.approx(1)

    def test_identity_and_amplitude(self):
        k = gs.FilterKernel("identity_fn", amplitude=2.0)
        assert gs.evaluate_kernel(k, 0.25) == pytest.approx(0.5)

    def test_zero_tolerance_window(self):
        k = gs.FilterKernel("delta_zero")
        assert gs.evaluate_kernel(k, 1e-12, zero_tol=1e-9) == 1
        assert gs.evaluate_kernel(k, 1e-6, zero_tol=1e-9) == 0

    def test_polynomial(self):
        k = gs.FilterKernel("polynomial", coeffs=(1, 0, 2))  # 1 + 2 x^2
        assert gs.evaluate_kernel(k, 3) == pytest.approx(19)

    def test_custom_samples(self):
        k = gs.FilterKernel("custom_samples", samples=((0.0, 1.0), (1.0, -1.0)))
        assert gs.evaluate_kernel(k, 1.0) == -1
        with pytest.raises(SampleOutOfRange):
            gs.evaluate_kernel(k, 0.5)

    def test_holomorphic_flags(self):
        assert gs.FilterKernel("sin_scaled").is_holomorphic
        assert not gs.FilterKernel("delta_zero").is_holomorphic
        assert not gs.FilterKernel("cosbar_scaled").is_holomorphic
        with pytest.raises(ValueError):
            gs.FilterKernel("delta_zero", holomorphic=True)


@pytest.fixture
def p2():
    space = gs.build_space(2)
    op = gs.rescaled_laplacian(np.array([[0, 1], [1, 0]]), space)
    return space, op


class TestApplyFilter:
    def test_constant_is_identity(self, p2):
        space, op = p2
        rng = np.random.default_rng(0)
        f = gs.Signal(space, rng.standard_normal(2) + 1j * rng.standard_normal(2))
        out = gs.apply_filter(gs.FilterKernel("constant"), op, f)
        assert_allclose(out.values, f.values, atol=1e-8)

    def test_identity_kernel_multiplies_by_eigenvalue(self, p2):
        space, op = p2
        phi1 = gs.decompose(op).eigenvectors[:, 1]
        out = gs.apply_filter(gs.FilterKernel("identity_fn"), op, gs.Signal(space, phi1))
        assert_allclose(out.values, 1.0 * phi1, atol=1e-10)

    def test_delta_zero_projects_onto_constants(self):
        # oracle: spectral projector onto lambda = 0 of a connected Laplacian
        rng = np.random.default_rng(1)
        n = 7
        a = random_connected_adjacency(n, rng)
        space = gs.build_space(n)
        op = gs.rescaled_laplacian(a, space)
        f = gs.Signal(space, rng.standard_normal(n))
        out = gs.apply_filter(gs.FilterKernel("delta_zero"), op, f)
        proj = np.full(n, f.values.mean())
        assert_allclose(out.values, proj, atol=1e-8)

    def test_space_mismatch(self, p2):
        _, op = p2
        f = gs.Signal(gs.build_space(3), np.ones(3))
        with pytest.raises(SpaceMismatch):
            gs.apply_filter(gs.FilterKernel("constant"), op, f)

    def test_custom_samples_on_operator(self):
        # a sample table keyed to the operator's own eigenvalues acts like
        # any other kernel through the functional calculus
        rng = np.random.default_rng(30)
        n = 5
        a = random_connected_adjacency(n, rng)
        op = gs.rescaled_laplacian(a, gs.build_space(n))
        lam = op.spectrum.real
        table = tuple((complex(x), complex(np.sin(x))) for x in lam)
        custom = gs.FilterKernel("custom_samples", samples=table)
        reference = gs.FilterKernel("sin_scaled")
        f = gs.Signal(op.space, rng.standard_normal(n))
        assert_allclose(gs.apply_filter(custom, op, f).values,
                        gs.apply_filter(reference, op, f).values, atol=1e-10)

    def test_homomorphism_polynomials(self):
        # g(Delta) h(Delta) f == (g*h)(Delta) f for polynomial kernels
        rng = np.random.default_rng(4)
        n = 6
        a = random_connected_adjacency(n, rng)
        op = gs.rescaled_laplacian(a, gs.build_space(n))
        space = op.space
        g = gs.FilterKernel("polynomial", coeffs=(0.5, 1.0))
        h = gs.FilterKernel("polynomial", coeffs=(0.0, -2.0, 1.0))
        gh = gs.FilterKernel("polynomial",
                             coeffs=tuple(np.polynomial.polynomial.polymul(
                                 (0.5, 1.0), (0.0, -2.0, 1.0))))
        f = gs.Signal(space, rng.standard_normal(n) + 1j * rng.standard_normal(n))
        lhs = gs.apply_filter(g, op, gs.apply_filter(h, op, f))
        rhs = gs.apply_filter(gh, op, f)
        assert_allclose(lhs.values, rhs.values, atol=1e-8)


class TestFrameBounds:
    def test_architecture_ii_grid(self):
        a, b = gs.frame_bounds_on_interval(gs.architecture_ii_bank(), (0, 1), 10_000)
        # oracle: grid minimum of 2 + x^2 at x = 0, maximum at x = 1
        assert a == pytest.approx(2.0, abs=1e-8)
        assert b == pytest.approx(3.0, abs=1e-8)

    def test_architecture_i_grid(self):
        a, b = gs.frame_bounds_on_interval(gs.architecture_i_bank(), (0, 1), 10_000)
        assert a == pytest.approx(0.5, abs=1e-8)
        assert b == pytest.approx(0.5, abs=1e-8)

    def test_empty_spectrum(self):
        with pytest.raises(EmptySpectrum):
            gs.frame_bounds(gs.architecture_i_bank(), np.array([]))

    def test_zero_bank_lower_bound(self):
        bank = gs.FilterBank(gs.FilterKernel("constant", amplitude=0.0),
                             (gs.FilterKernel("constant", amplitude=0.0),))
        a, _ = gs.frame_bounds(bank, np.array([0.0, 0.5, 1.0]))
        assert a == 0.0

    def test_bounds_stored(self):
        bank = gs.architecture_ii_bank()
        assert bank.frame_bounds is None
        gs.frame_bounds(bank, np.array([0.0, 1.0]))
        assert bank.frame_bounds == (2.0, pytest.approx(3.0))

    def test_pythagorean_identity(self):
        # S(c) == 2 + c^2 exactly for the full-amplitude trig bank
        bank = gs.architecture_ii_bank()
        grid = np.linspace(0.0, 1.0, 10_000)
        s = bank.frame_sum(grid)
        assert np.abs(s - (2.0 + grid**2)).max() <= 1e-12

    def test_half_frame_is_flat(self):
        bank = gs.architecture_i_bank()
        grid = np.append(np.linspace(0.0, 1.0, 10_000), 0.0)
        s = bank.frame_sum(grid)
        assert np.abs(s - 0.5).max() <= 1e-12


class TestFrameInequality:
    def test_tight_ratio_half(self):
        rng = np.random.default_rng(5)
        n = 9
        a = random_connected_adjacency(n, rng)
        op = gs.rescaled_laplacian(a, gs.build_space(n))
        bank = gs.architecture_i_bank()
        gs.frame_bounds(bank, op.spectrum)
        f = gs.Signal(op.space, rng.standard_normal(n) + 1j * rng.standard_normal(n))
        check = gs.frame_inequality_check(bank, op, f)
        assert check.lower_ok and check.upper_ok
        assert check.energy_ratio == pytest.approx(0.5, abs=1e-8)

    def test_zero_signal(self, p2):
        _, op = p2
        check = gs.frame_inequality_check(gs.architecture_i_bank(), op,
                                          gs.Signal(op.space, np.zeros(2)))
        assert check.lower_ok and check.upper_ok
        assert check.energy_ratio == 0.0

    def test_eigenvector_ratio_three(self, p2):
        # oracle: sin^2(pi/2) + cos^2(pi/2) + sin^2(pi) + cos^2(pi) + 1 = 3
        space, op = p2
        phi1 = gs.decompose(op).eigenvectors[:, 1]
        check = gs.frame_inequality_check(gs.architecture_ii_bank(), op,
                                          gs.Signal(space, phi1))
        assert check.energy_ratio == pytest.approx(3.0, abs=1e-8)

    def test_frame_sandwich_random(self):
        # both preset banks satisfy the frame inequality for 100 random
        # signals on 100 random graphs
        rng = np.random.default_rng(6)
        for _ in range(100):
            n = int(rng.integers(3, 16))
            a = random_connected_adjacency(n, rng, weighted=True)
            op = gs.rescaled_laplacian(a, gs.build_space(n))
            f = gs.Signal(op.space,
                          rng.standard_normal(n) + 1j * rng.standard_normal(n))
            for preset in PRESET_BANKS.values():
                check = gs.frame_inequality_check(preset(), op, f)
                assert check.lower_ok and check.upper_ok

    def test_shared_zero_projector_transfer(self):
        # two rescaled Laplacians on the same connected vertex set: the
        # delta_zero filters agree exactly and cosbar transfers like cos
        rng = np.random.default_rng(8)
        n = 8
        space = gs.build_space(n)
        a1 = random_connected_adjacency(n, rng, weighted=True)
        a2 = a1 * rng.uniform(0.9, 1.1, size=a1.shape)
        a2 = np.triu(a2, 1) + np.triu(a2, 1).T
        op1 = gs.rescaled_laplacian(a1, space)
        op2 = gs.rescaled_laplacian(a2, space)
        from graphscatter.core import weighted_frobenius_norm

        dz = gs.FilterKernel("delta_zero")
        diff = weighted_frobenius_norm(op1.kernel_matrix(dz) - op2.kernel_matrix(dz),
                                       space)
        assert diff <= 1e-8
        cb = gs.FilterKernel("cosbar_scaled", scale=math.pi)
        diff = weighted_frobenius_norm(op1.kernel_matrix(cb) - op2.kernel_matrix(cb),
                                       space)
        assert diff <= math.pi * gs.frobenius_distance(op1, op2) + 1e-8


class TestPresets:
    def test_architecture_ii_shape(self):
        bank = gs.architecture_ii_bank()
        assert len(bank.filters) == 4
        assert bank.output_kernel.kind == "identity_fn"

    def test_architecture_i_shape(self):
        bank = gs.architecture_i_bank()
        assert len(bank.filters) == 4
        assert bank.output_kernel.kind == "delta_zero"
        assert bank.output_kernel.amplitude == pytest.approx(1 / math.sqrt(2))

    def test_bounds_by_construction(self):
        for factory in PRESET_BANKS.values():
            bank = factory()
            a, _ = gs.frame_bounds_on_interval(bank)
            assert float(bank.frame_sum(np.array([0.5]))[0]) >= a - 1e-12

    def test_lipschitz_budget(self):
        # Architecture II filters alone: sqrt(2 (pi/2)^2 + 2 pi^2) = pi sqrt(10) / 2
        bank = gs.architecture_ii_bank()
        filters_only = math.sqrt(sum(k.lipschitz**2 for k in bank.filters))
        assert filters_only == pytest.approx(math.pi * math.sqrt(10) / 2)
        # the full budget also counts the identity output kernel
        assert bank.lipschitz_budget() == pytest.approx(
            math.sqrt(1 + (math.pi * math.sqrt(10) / 2) ** 2))
