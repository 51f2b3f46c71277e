import math

import numpy as np
import pytest

from inarlab import (
    char_roots,
    companion,
    convergence_profile,
    perron_root,
    perron_vectors,
    power_weights,
    projection,
    second_eigen_modulus,
    spectral_data,
    validate,
)
from inarlab.errors import DegenerateModel, NotPrimitive
from inarlab.spectral import operator_norm

from oracles import weights_from_dense_powers


def random_primitive_spec(rng, pmax=8, unit_root=False):
    while True:
        p = int(rng.integers(1, pmax + 1))
        alphas = rng.random(p) * 0.98 + 0.01
        if unit_root:
            alphas = alphas / alphas.sum()
        spec = validate(alphas)
        if spec.p == p:
            return spec


class TestCompanion:
    def test_two_lags(self):
        assert np.array_equal(companion(validate([0.5, 0.5])), [[0.5, 0.5], [1.0, 0.0]])

    def test_one_lag(self):
        assert np.array_equal(companion(validate([1.0])), [[1.0]])

    def test_three_lags(self):
        a = companion(validate([0.2, 0.3, 0.5]))
        assert np.array_equal(a[0], [0.2, 0.3, 0.5])
        assert np.array_equal(a[1:], [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])

    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateModel):
            companion(validate([0.0]))


class TestPerronRoot:
    def test_unit_root_pair(self):
        assert perron_root(validate([0.5, 0.5])) == pytest.approx(1.0, abs=1e-12)

    def test_single_lag(self):
        assert perron_root(validate([0.5])) == pytest.approx(0.5, abs=1e-12)

    def test_explosive_quadratic(self):
        # root of x^2 - 0.3 x - 0.9 by the quadratic formula
        expected = (0.3 + math.sqrt(0.09 + 3.6)) / 2.0
        assert perron_root(validate([0.3, 0.9])) == pytest.approx(expected, abs=1e-12)

    def test_char_identity_on_random_specs(self):
        rng = np.random.default_rng(3)
        for _ in range(300):
            spec = random_primitive_spec(rng)
            rho = perron_root(spec)
            value = math.fsum(a * rho ** -(k + 1) for k, a in enumerate(spec.alphas))
            assert abs(value - 1.0) < 1e-10


class TestPerronVectors:
    def test_unit_root_two_lags(self):
        u, v = perron_vectors(validate([0.5, 0.5]))
        assert u == pytest.approx([0.5, 0.5], abs=1e-12)
        assert v == pytest.approx([4.0 / 3.0, 2.0 / 3.0], abs=1e-12)

    def test_single_lag(self):
        u, v = perron_vectors(validate([1.0]))
        assert u == pytest.approx([1.0]) and v == pytest.approx([1.0])

    def test_asymmetric_unit_root(self):
        u, v = perron_vectors(validate([0.2, 0.8]))
        assert u == pytest.approx([0.5, 0.5], abs=1e-12)
        assert v == pytest.approx([10.0 / 9.0, 8.0 / 9.0], abs=1e-12)
        assert float(u @ v) == pytest.approx(1.0, abs=1e-12)

    def test_imprimitive_rejected(self):
        with pytest.raises(NotPrimitive):
            perron_vectors(validate([0.0, 1.0]))

    def test_eigen_identities_on_random_specs(self):
        rng = np.random.default_rng(5)
        for _ in range(300):
            spec = random_primitive_spec(rng)
            rho = perron_root(spec)
            u, v = perron_vectors(spec, rho)
            a = companion(spec)
            assert np.all(u > 0) and np.all(v > 0)
            assert np.max(np.abs(a @ u - rho * u)) < 1e-10
            assert np.max(np.abs(a.T @ v - rho * v)) < 1e-10
            assert abs(u.sum() - 1.0) < 1e-10
            assert abs(float(u @ v) - 1.0) < 1e-10


class TestProjection:
    def test_outer_product(self):
        pi = projection(np.array([0.5, 0.5]), np.array([4.0 / 3.0, 2.0 / 3.0]))
        assert pi == pytest.approx(np.array([[2.0 / 3.0, 1.0 / 3.0], [2.0 / 3.0, 1.0 / 3.0]]))

    def test_scalar_case(self):
        assert projection(np.array([1.0]), np.array([1.0])) == pytest.approx(np.array([[1.0]]))

    def test_idempotent_and_commutes(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            spec = random_primitive_spec(rng)
            rho = perron_root(spec)
            u, v = perron_vectors(spec, rho)
            pi = projection(u, v)
            a = companion(spec)
            assert np.max(np.abs(pi @ pi - pi)) < 1e-9
            assert np.max(np.abs(a @ pi - rho * pi)) < 1e-9
            assert np.max(np.abs(pi @ a - rho * pi)) < 1e-9

    def test_unit_root_corner_entry(self):
        rng = np.random.default_rng(21)
        for _ in range(100):
            spec = random_primitive_spec(rng, unit_root=True)
            u, v = perron_vectors(spec)
            pi = projection(u, v)
            assert abs(pi[0, 0] - 1.0 / spec.phi_prime_at_one) < 1e-10
            assert abs(perron_root(spec) - 1.0) < 1e-10


class TestPowerWeights:
    def test_geometric(self):
        assert power_weights(validate([0.5]), 3) == pytest.approx([1.0, 0.5, 0.25, 0.125])

    def test_hand_recurrence(self):
        assert power_weights(validate([0.5, 0.5]), 4) == pytest.approx([1.0, 0.5, 0.75, 0.625, 0.6875])

    def test_matches_dense_powers(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            spec = random_primitive_spec(rng)
            w = power_weights(spec, 50)
            dense = weights_from_dense_powers(spec.alphas, 50)
            # explosive specs reach 1e40 by j = 50, so compare relatively
            assert np.max(np.abs(w - dense) / np.maximum(1.0, np.abs(dense))) < 1e-12
            assert np.all(w >= 0.0)


class TestCharRoots:
    def test_unit_root_factorization(self):
        # x^2 - 0.5x - 0.5 = (x - 1)(x + 0.5)
        roots = sorted(char_roots(validate([0.5, 0.5])).real)
        assert roots == pytest.approx([-0.5, 1.0], abs=1e-10)
        assert second_eigen_modulus(validate([0.5, 0.5])) == pytest.approx(0.5, abs=1e-10)

    def test_single_lag_convention(self):
        assert second_eigen_modulus(validate([0.7])) == 0.0

    def test_imprimitive_shares_dominant_modulus(self):
        # x^4 - 0.5 x^2 - 0.5 = (x^2 - 1)(x^2 + 0.5)
        spec = validate([0.0, 0.5, 0.0, 0.5])
        assert second_eigen_modulus(spec) == pytest.approx(1.0, abs=1e-10)

    def test_agrees_with_numpy_roots(self):
        rng = np.random.default_rng(23)
        for _ in range(200):
            spec = random_primitive_spec(rng)
            mine = char_roots(spec)
            coeffs = np.concatenate(([1.0], -np.asarray(spec.alphas)))
            ref = np.sort(np.roots(coeffs))
            # match each reference root to its nearest computed root
            dist = np.abs(mine[:, None] - ref[None, :])
            assert np.max(np.min(dist, axis=0)) < 1e-6
            assert np.max(np.abs(np.sort(np.abs(mine)) - np.sort(np.abs(ref)))) < 1e-7

    def test_max_real_root_matches_bisection(self):
        rng = np.random.default_rng(29)
        for _ in range(300):
            spec = random_primitive_spec(rng)
            roots = char_roots(spec)
            real = roots.real[np.abs(roots.imag) < 1e-8]
            assert abs(np.max(real) - perron_root(spec)) < 1e-9


class TestOperatorNorm:
    def test_matches_svd(self):
        rng = np.random.default_rng(31)
        for _ in range(100):
            mat = rng.standard_normal((int(rng.integers(1, 9)),) * 2)
            assert operator_norm(mat) == pytest.approx(np.linalg.norm(mat, 2), rel=1e-8)

    def test_zero_matrix(self):
        assert operator_norm(np.zeros((3, 3))) == 0.0


class TestConvergenceProfile:
    def test_flagship_ratio(self):
        spec = validate([0.5, 0.5])
        profile = convergence_profile(spec, 40)
        ratios = profile.norms[10:40] / profile.norms[9:39]
        assert np.all(np.abs(ratios - 0.5) < 0.02)
        assert abs(profile.r - 0.5) < 0.05
        assert np.all(np.diff(profile.norms) <= 0.0)

    def test_envelope_bound(self):
        rng = np.random.default_rng(37)
        for _ in range(50):
            spec = random_primitive_spec(rng, pmax=5)
            if spec.p < 2:
                continue
            profile = convergence_profile(spec, 40)
            ns = np.arange(1, 41)
            floor = 1e-13 * max(profile.norms.max(), 1.0)
            resolvable = profile.norms > floor
            assert np.all(profile.norms[resolvable] <= profile.c * profile.r ** ns[resolvable] + 1e-12)
            lam2 = second_eigen_modulus(spec)
            rho = perron_root(spec)
            if np.count_nonzero(resolvable & (ns >= 20)) >= 2:
                assert abs(profile.r - lam2 / rho) <= 0.1 * (lam2 / rho)

    def test_identity_case_is_degenerate(self):
        profile = convergence_profile(validate([1.0]), 10)
        assert np.max(profile.norms) < 1e-12
        assert profile.c == 0.0 and profile.r == 0.0

    def test_imprimitive_rejected(self):
        with pytest.raises(NotPrimitive):
            convergence_profile(validate([0.0, 1.0]), 10)


class TestSpectralDataBundle:
    def test_lambda2_strictly_below_rho_for_primitive(self):
        rng = np.random.default_rng(41)
        for _ in range(200):
            spec = random_primitive_spec(rng)
            if spec.p < 2:
                continue
            data = spectral_data(spec)
            assert data.lambda2_mod < data.rho
