import numpy as np
import pytest
from scipy import special

from strichartz import Field, Grid, ParameterError
from strichartz.angular import (
    AngularSpectrum,
    lambda_omega,
    radial_l2_norm,
    radial_projection,
    rotation_vector_field,
    sphere_area,
    spherical_grid,
    spherical_l2_average,
    to_polar,
)


def gaussian(grid, centre=None, sigma=1.0):
    centre = np.zeros(grid.n) if centre is None else np.asarray(centre)

    def f(*x):
        r2 = sum((xi - c) ** 2 for xi, c in zip(x, centre))
        return np.exp(-r2 / (2 * sigma**2))
    return Field.from_function(grid, f)


def random_spectrum(rng, sg):
    c = rng.standard_normal((sg.n_shells, sg.n_harmonics)) + 1j * rng.standard_normal((sg.n_shells, sg.n_harmonics))
    if sg.n == 2:
        c[:, sg.degrees > sg.K] = 0   # drop the Nyquist mode
    return AngularSpectrum(sg, c)


class TestSphericalGrid:
    @pytest.mark.parametrize("n", [2, 3])
    def test_total_weight(self, n):
        sg = spherical_grid(n, 1.0, 4, 9)
        assert sg.angular_weights.sum() == pytest.approx(sphere_area(n), rel=1e-12)
        assert sphere_area(2) == pytest.approx(2 * np.pi)
        assert sphere_area(3) == pytest.approx(4 * np.pi)

    def test_radial_weights(self):
        sg = spherical_grid(3, 2.0, 12, 3)
        # int_0^2 r^2 r^2 dr = 32/5
        assert np.dot(sg.radial_weights, sg.radii**2) == pytest.approx(32 / 5, rel=1e-12)
        sg = spherical_grid(2, 3.0, 5, 3, r_min=1.0, panels=4)
        assert sg.radial_weights.sum() == pytest.approx((9 - 1) / 2, rel=1e-12)

    def test_orthonormality_n3(self):
        sg = spherical_grid(3, 1.0, 1, 8)
        gram = sg.harmonics.conj().T @ (sg.angular_weights[:, None] * sg.harmonics)
        np.testing.assert_allclose(gram, np.eye(sg.n_harmonics), atol=1e-10)
        assert sg.n_harmonics == 81

    def test_orthonormality_n2(self):
        sg = spherical_grid(2, 1.0, 1, 12)
        theta = np.arctan2(sg.nodes[:, 1], sg.nodes[:, 0])
        m = np.arange(-sg.K, sg.K + 1)
        Y = np.exp(1j * np.outer(theta, m)) / np.sqrt(2 * np.pi)
        gram = Y.conj().T @ (sg.angular_weights[:, None] * Y)
        np.testing.assert_allclose(gram, np.eye(len(m)), atol=1e-12)

    def test_eigenvalues(self):
        sg = spherical_grid(3, 1.0, 1, 4)
        assert set(zip(sg.degrees.tolist(), sg.eigenvalues.tolist())) == {(l, l * (l + 1)) for l in range(5)}
        sg = spherical_grid(2, 1.0, 1, 4)
        np.testing.assert_array_equal(sg.eigenvalues, sg.orders.astype(float) ** 2)

    def test_invalid(self):
        with pytest.raises(ParameterError):
            spherical_grid(4, 1.0, 4, 4)
        with pytest.raises(ParameterError):
            spherical_grid(2, 1.0, 4, 4, r_min=2.0)


class TestToPolar:
    @pytest.mark.parametrize("n,M,L,K", [(2, 64, 8.0, 16), (3, 32, 8.0, 6)])
    def test_radial_gaussian_is_constant_harmonic(self, n, M, L, K):
        g = Grid(n, M, L)
        sg = spherical_grid(n, 5.0, 8, K)
        a = to_polar(gaussian(g), sg)
        const = sg.degrees == 0
        scale = np.abs(a.coeffs[:, const]).max()
        assert np.abs(a.coeffs[:, ~const]).max() < 1e-8 * scale
        # constant harmonic of exp(-r^2/2) on shell r is |S|^{1/2} exp(-r^2/2)
        np.testing.assert_allclose(a.coeffs[:, const].ravel().real,
                                   np.sqrt(sphere_area(n)) * np.exp(-sg.radii**2 / 2), atol=1e-9)

    @pytest.mark.parametrize("n", [2, 3])
    def test_degree_one(self, n):
        g = Grid(n, 32, 8.0)
        f = Field.from_function(g, lambda *x: x[0] * np.exp(-sum(xi**2 for xi in x) / 2))
        sg = spherical_grid(n, 4.0, 6, 6)
        a = to_polar(f, sg)
        one = sg.degrees == 1
        assert np.abs(a.coeffs[:, ~one]).max() < 1e-8 * np.abs(a.coeffs[:, one]).max()

    @pytest.mark.parametrize("n", [2, 3])
    def test_synthesis_round_trip(self, rng, n):
        sg = spherical_grid(n, 2.0, 3, 10)
        a = random_spectrum(rng, sg)
        back = to_polar(lambda pts: a.synthesise().ravel(), sg)
        np.testing.assert_allclose(back.coeffs, a.coeffs, atol=1e-8)

    def test_band_limited_field_round_trip(self, rng):
        g = Grid(2, 16, 4.0)
        c = np.zeros(g.shape, complex)
        c[6:11, 6:11] = rng.standard_normal((5, 5))
        f = Field(g, c, "frequency")
        sg = spherical_grid(2, 3.5, 6, 24)
        a = to_polar(f, sg)
        again = to_polar(lambda pts: a.synthesise().ravel(), sg)
        np.testing.assert_allclose(again.coeffs, a.coeffs, atol=1e-8 * np.abs(a.coeffs).max())

    def test_point_outside_box(self):
        from strichartz import DomainError
        g = Grid(2, 16, 2.0)
        with pytest.raises(DomainError):
            to_polar(gaussian(g), spherical_grid(2, 2.5, 3, 4))


class TestAverages:
    @pytest.mark.parametrize("n", [2, 3])
    def test_constant(self, n):
        sg = spherical_grid(n, 1.0, 2, 6)
        a = to_polar(lambda pts: np.ones(len(pts)), sg)
        assert spherical_l2_average(a, 0) == pytest.approx(np.sqrt(sphere_area(n)), rel=1e-12)

    def test_unit_harmonic(self):
        sg = spherical_grid(3, 1.0, 1, 6)

        def y32(pts):
            polar = np.arccos(np.clip(pts[:, 2] / np.linalg.norm(pts, axis=1), -1, 1))
            azim = np.arctan2(pts[:, 1], pts[:, 0])
            return special.sph_harm_y(3, 2, polar, azim)
        assert spherical_l2_average(to_polar(y32, sg), 0) == pytest.approx(1.0, rel=1e-12)

    def test_random_shell_matches_quadrature(self, rng):
        sg = spherical_grid(2, 1.0, 3, 20)
        samples = rng.standard_normal((3, len(sg.nodes))) + 1j * rng.standard_normal((3, len(sg.nodes)))
        a = to_polar(lambda pts: samples.ravel(), sg)
        for j in range(3):
            direct = np.sqrt(np.sum(sg.angular_weights * np.abs(samples[j]) ** 2))
            assert spherical_l2_average(a, j) == pytest.approx(direct, rel=1e-10)

    def test_parseval_band_limited_n3(self, rng):
        sg = spherical_grid(3, 1.0, 2, 7)
        a = random_spectrum(rng, sg)
        samples = a.synthesise()
        direct = np.sqrt(np.sum(sg.angular_weights * np.abs(samples) ** 2, axis=1))
        np.testing.assert_allclose(a.shell_norms(), direct, rtol=1e-10)


class TestLambdaOmega:
    def test_identity(self, rng):
        a = random_spectrum(rng, spherical_grid(3, 1.0, 2, 4))
        np.testing.assert_array_equal(lambda_omega(a, 0.0).coeffs, a.coeffs)

    def test_degree_two_eigenvalue(self):
        sg = spherical_grid(3, 1.0, 1, 4)
        c = np.zeros((1, sg.n_harmonics), complex)
        c[0, (sg.degrees == 2) & (sg.orders == 1)] = 1.0
        out = lambda_omega(AngularSpectrum(sg, c), 2.0).coeffs
        assert out[0, (sg.degrees == 2) & (sg.orders == 1)][0] == pytest.approx(7.0)

    def test_semigroup_and_inverse(self, rng):
        a = random_spectrum(rng, spherical_grid(2, 1.0, 3, 16))
        np.testing.assert_allclose(lambda_omega(lambda_omega(a, 0.8), -0.8).coeffs, a.coeffs,
                                   rtol=1e-12, atol=1e-14)
        ab = lambda_omega(lambda_omega(a, 0.3), 1.1).coeffs
        ba = lambda_omega(lambda_omega(a, 1.1), 0.3).coeffs
        np.testing.assert_allclose(ab, lambda_omega(a, 1.4).coeffs, rtol=1e-12)
        np.testing.assert_allclose(ab, ba, rtol=1e-12)
        mult = lambda_omega(AngularSpectrum(a.grid, np.ones_like(a.coeffs)), 0.7).coeffs
        assert np.all(mult.real > 0) and np.all(mult.imag == 0)


def fd_derivative(u, h, axis):
    """Sixth-order central difference (periodic)."""
    c = [(1, 3 / 4), (2, -3 / 20), (3, 1 / 60)]
    return sum(w * (np.roll(u, -k, axis) - np.roll(u, k, axis)) for k, w in c) / h


class TestRotationField:
    def test_kills_radial(self):
        g = Grid(2, 64, 8.0)
        f = gaussian(g)
        assert np.abs(rotation_vector_field(f, 1, 2).values).max() < 1e-8

    def test_degree_one_rotates(self):
        g = Grid(3, 32, 8.0)
        f = Field.from_function(g, lambda x, y, z: x * np.exp(-(x**2 + y**2 + z**2) / 2))
        want = Field.from_function(g, lambda x, y, z: -y * np.exp(-(x**2 + y**2 + z**2) / 2))
        np.testing.assert_allclose(rotation_vector_field(f, 1, 2).values, want.values, atol=1e-7)

    def test_norm_matches_finite_differences(self):
        g = Grid(2, 128, 6.0)

        def f(x, y):
            return np.exp(-((x - 1.0) ** 2 + 2 * (y + 0.5) ** 2)) * (1 + 0.5j * x)
        spectral = rotation_vector_field(Field.from_function(g, f), 1, 2).l2_norm() ** 2
        fine = Grid(2, 1024, 6.0)
        x, y = fine.coordinates()
        u = f(x, y) * np.ones(fine.shape)
        om = x * fd_derivative(u, fine.h, 1) - y * fd_derivative(u, fine.h, 0)
        fd = np.sum(np.abs(om) ** 2) * fine.h**2
        assert spectral == pytest.approx(fd, rel=1e-6)

    def test_same_axis(self):
        g = Grid(2, 8, 1.0)
        with pytest.raises(ParameterError):
            rotation_vector_field(gaussian(g), 1, 1)

    def test_beltrami_identity_n2(self):
        g = Grid(2, 64, 10.0)
        f = gaussian(g, centre=(1.0, 0.5), sigma=1.0)
        lhs = rotation_vector_field(f, 1, 2).l2_norm() ** 2
        rhs = to_polar(f, spherical_grid(2, 9.0, 80, 48)).beltrami_energy()
        assert rhs == pytest.approx(lhs, rel=1e-6)


class TestRadialProjection:
    def test_radial_function(self):
        g = Grid(2, 64, 10.0)
        f = gaussian(g)
        sg = spherical_grid(2, 9.0, 60, 8)
        means = radial_projection(f, sg)
        np.testing.assert_allclose(means, np.exp(-sg.radii**2 / 2), atol=1e-10)
        assert radial_l2_norm(means, sg) == pytest.approx(f.l2_norm(), rel=1e-8)

    @pytest.mark.parametrize("n", [2, 3])
    def test_higher_harmonics_vanish(self, n):
        sg = spherical_grid(n, 1.0, 3, 6)
        means = radial_projection(lambda pts: pts[:, 0] * pts[:, 1] + pts[:, -1] ** 3, sg)
        assert np.abs(means).max() < 1e-10
