"""Polar resampling and multipliers on the sphere.

Functions on R^n are sampled on shells r_j * S^{n-1} and expanded in an
orthonormal harmonic basis: e^{i m theta} / sqrt(2 pi) on the circle, and
complex spherical harmonics Y_l^m on S^2. The basis diagonalises the
Laplace-Beltrami operator, with -Delta_omega eigenvalue m^2 (n = 2) or
l(l + 1) (n = 3).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import special

from strichartz.errors import ParameterError
from strichartz.grid import SPACE, Field, evaluate_at_points

# shells processed per batch in to_polar
_SAMPLE_BUDGET = 1 << 22


def sphere_area(n: int) -> float:
    """Surface measure of S^{n-1}."""
    return float(2 * np.pi ** (n / 2) / special.gamma(n / 2))


def gauss_legendre(a: float, b: float, n_nodes: int, panels: int = 1):
    """Composite Gauss-Legendre nodes and weights on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


@dataclass(frozen=True, eq=False)
class SphericalGrid:
    """Product quadrature for integrals over R^n in polar coordinates.

    ``radial_weights`` already contain the Jacobian r^{n-1}, so
    sum_j radial_weights[j] * sum_k angular_weights[k] * F(r_j w_k)
    approximates the integral of F over the annulus r_min <= |x| <= r_max.
    """

    n: int
    radii: np.ndarray
    radial_weights: np.ndarray
    nodes: np.ndarray
    angular_weights: np.ndarray
    K: int
    eigenvalues: np.ndarray
    degrees: np.ndarray
    orders: np.ndarray
    harmonics: np.ndarray | None = field(default=None, repr=False)

    @property
    def n_shells(self) -> int:
        return len(self.radii)

    @property
    def n_harmonics(self) -> int:
        return len(self.eigenvalues)

    def scaled(self, factor: float) -> SphericalGrid:
        """The same grid with all radii multiplied by ``factor``."""
        return SphericalGrid(
            self.n, self.radii * factor, self.radial_weights * factor**self.n,
            self.nodes, self.angular_weights, self.K, self.eigenvalues,
            self.degrees, self.orders, self.harmonics,
        )

    def points(self, shells=None) -> np.ndarray:
        r = self.radii if shells is None else self.radii[shells]
        return (r[:, None, None] * self.nodes[None, :, :]).reshape(-1, self.n)

    def analyse(self, samples: np.ndarray) -> np.ndarray:
        """Harmonic coefficients of shell samples, shape (..., n_nodes)."""
        if self.n == 2:
            n_theta = samples.shape[-1]
            return np.fft.fft(samples, axis=-1) * (np.sqrt(2 * np.pi) / n_theta)
        return samples @ (self.angular_weights[:, None] * np.conj(self.harmonics))

    def synthesise(self, coeffs: np.ndarray) -> np.ndarray:
        if self.n == 2:
            n_theta = coeffs.shape[-1]
            return np.fft.ifft(coeffs, axis=-1) * (n_theta / np.sqrt(2 * np.pi))
        return coeffs @ self.harmonics.T


def spherical_grid(n: int, r_max: float, n_radial: int, K: int, *,
                   r_min: float = 0.0, panels: int = 1) -> SphericalGrid:
    """Build a SphericalGrid.

    Radial nodes are composite Gauss-Legendre on [r_min, r_max]. For n = 2
    the angular rule is 2K + 2 equispaced points (the full discrete Fourier
    set of circular harmonics, Nyquist mode included). For n = 3 it is
    K + 1 Gauss-Legendre latitudes times 2K + 2 longitudes, exact for
    products of harmonics up to total degree 2K + 1, with harmonics l <= K.
    """
    if n not in (2, 3):
        raise ParameterError(f"spherical grids exist for n = 2, 3 only, got {n}")
    if K < 1 or n_radial < 1 or not r_max > r_min >= 0:
        raise ParameterError("need K >= 1, n_radial >= 1 and 0 <= r_min < r_max")
    r, w = gauss_legendre(r_min, r_max, n_radial, panels)
    w = w * r ** (n - 1)
    n_lon = 2 * K + 2
    if n == 2:
        theta = 2 * np.pi * np.arange(n_lon) / n_lon
        nodes = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        weights = np.full(n_lon, 2 * np.pi / n_lon)
        m = np.rint(np.fft.fftfreq(n_lon) * n_lon).astype(int)
        return SphericalGrid(2, r, w, nodes, weights, K, m.astype(float) ** 2,
                             np.abs(m), m)
    ct, wt = np.polynomial.legendre.leggauss(K + 1)
    polar = np.arccos(ct)
    azim = 2 * np.pi * np.arange(n_lon) / n_lon
    P, A = np.meshgrid(polar, azim, indexing="ij")
    P, A = P.ravel(), A.ravel()
    nodes = np.stack([np.sin(P) * np.cos(A), np.sin(P) * np.sin(A), np.cos(P)], axis=-1)
    weights = np.repeat(wt, n_lon) * (2 * np.pi / n_lon)
    ls = np.concatenate([np.full(2 * l + 1, l) for l in range(K + 1)])
    ms = np.concatenate([np.arange(-l, l + 1) for l in range(K + 1)])
    Y = special.sph_harm_y(ls[None, :], ms[None, :], P[:, None], A[:, None])
    return SphericalGrid(3, r, w, nodes, weights, K, (ls * (ls + 1)).astype(float),
                         ls, ms, Y)


@dataclass(frozen=True, eq=False)
class AngularSpectrum:
    """Harmonic coefficients c[j, k] of a function on the shells of ``grid``."""

    grid: SphericalGrid
    coeffs: np.ndarray

    def shell_norms(self) -> np.ndarray:
        """L^2(S^{n-1}) norm of every shell."""
        return np.sqrt(np.sum(np.abs(self.coeffs) ** 2, axis=-1))

    def synthesise(self) -> np.ndarray:
        """Samples on the angular nodes, shape (n_shells, n_nodes)."""
        return self.grid.synthesise(self.coeffs)

    def l2_norm(self) -> float:
        """L^2(R^n) norm over the radial range of the grid."""
        e = np.sum(np.abs(self.coeffs) ** 2, axis=-1)
        return float(np.sqrt(np.dot(self.grid.radial_weights, e)))

    def beltrami_energy(self) -> float:
        """||(-Delta_omega)^{1/2} f||^2 from the eigenvalues."""
        e = np.abs(self.coeffs) ** 2 @ self.grid.eigenvalues
        return float(np.dot(self.grid.radial_weights, e))


def sample(f, points: np.ndarray) -> np.ndarray:
    """Values of ``f`` at ``points``; ``f`` is a Field or a callable on (P, n) arrays."""
    if isinstance(f, Field):
        return evaluate_at_points(f, points)
    return np.asarray(f(points), dtype=complex)


def to_polar(f, sg: SphericalGrid) -> AngularSpectrum:
    """Resample ``f`` on the shells of ``sg`` and expand each shell in harmonics.

    ``f`` may be a Field (evaluated through its exact Fourier sum) or a
    callable taking an array of points of shape (P, n).
    """
    if isinstance(f, Field) and f.grid.n != sg.n:
        raise ParameterError("field and spherical grid have different dimensions")
    n_nodes = len(sg.nodes)
    batch = max(1, _SAMPLE_BUDGET // n_nodes)
    out = np.empty((sg.n_shells, sg.n_harmonics), dtype=complex)
    for start in range(0, sg.n_shells, batch):
        idx = slice(start, min(start + batch, sg.n_shells))
        vals = sample(f, sg.points(idx)).reshape(-1, n_nodes)
        out[idx] = sg.analyse(vals)
    return AngularSpectrum(sg, out)


def spherical_l2_average(a: AngularSpectrum, j: int) -> float:
    """(sum_k |c_{j,k}|^2)^{1/2}, the L^2 norm over the sphere of radius r_j."""
    return float(np.sqrt(np.sum(np.abs(a.coeffs[j]) ** 2)))


def lambda_omega(a: AngularSpectrum, alpha: float) -> AngularSpectrum:
    """Multiply by (1 + lambda_k)^(alpha/2), i.e. apply (1 - Delta_omega)^(alpha/2)."""
    mult = (1.0 + a.grid.eigenvalues) ** (alpha / 2)
    return AngularSpectrum(a.grid, a.coeffs * mult)


def rotation_vector_field(f: Field, i: int, j: int) -> Field:
    """Omega_ij f = x_i d_j f - x_j d_i f (axes numbered from 1).

    Derivatives are spectral; the coordinate factors are the periodic grid
    coordinates, so ``f`` must be negligible near the boundary of the box.
    """
    n = f.grid.n
    if i == j:
        raise ParameterError("Omega_ij needs i != j")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ParameterError(f"axes must lie in 1..{n}")
    c = f.to_frequency()
    xi = c.grid.wavenumbers()
    x = c.grid.coordinates()
    dj = Field(c.grid, 1j * xi[j - 1] * c.values, c.representation).to_space().values
    di = Field(c.grid, 1j * xi[i - 1] * c.values, c.representation).to_space().values
    return Field(c.grid, x[i - 1] * dj - x[j - 1] * di, SPACE)


def radial_projection(f, sg: SphericalGrid) -> np.ndarray:
    """Angular mean of ``f`` on every shell.

    Obtained from the constant-harmonic coefficient, c_0 / |S^{n-1}|^{1/2}.
    """
    a = to_polar(f, sg)
    zero = int(np.flatnonzero(sg.degrees == 0)[0])
    return a.coeffs[:, zero] / np.sqrt(sphere_area(sg.n))


def radial_l2_norm(means: np.ndarray, sg: SphericalGrid) -> float:
    """L^2(R^n) norm of the radial function whose shell values are ``means``."""
    return float(np.sqrt(sphere_area(sg.n) * np.dot(sg.radial_weights, np.abs(means) ** 2)))
