"""Periodic grids, fields and the unitary discrete Fourier pair.

The box [-L, L)^n is sampled at M points per axis, x_k = -L + k h with
h = 2L/M, and the dual lattice is xi_m = (pi/L) m for m = -M/2, ..., M/2 - 1.
Frequency coefficients are normalised as samples of the continuous transform

    f_hat(xi) = (2 pi)^(-n/2) int exp(-i x.xi) f(x) dx,

so that sum |f|^2 h^n == sum |f_hat|^2 (pi/L)^n exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.fft as sfft

from strichartz.errors import DomainError, ParameterError, RepresentationError

SPACE = "space"
FREQUENCY = "frequency"

# work budget (complex entries) for one chunk of the direct Fourier sum
_CHUNK_ENTRIES = 1 << 22


@dataclass(frozen=True)
class Grid:
    """Periodic Cartesian lattice on [-L, L)^n with M samples per axis."""

    n: int
    M: int
    L: float

    def __post_init__(self):
        if self.n not in (2, 3):
            raise ParameterError(f"dimension must be 2 or 3, got {self.n}")
        if self.M < 4 or self.M & (self.M - 1):
            raise ParameterError(f"M must be a power of two >= 4, got {self.M}")
        if not self.L > 0:
            raise ParameterError(f"L must be positive, got {self.L}")

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.M

    @property
    def dxi(self) -> float:
        return np.pi / self.L

    @property
    def shape(self) -> tuple:
        return (self.M,) * self.n

    @property
    def nyquist(self) -> float:
        return self.dxi * self.M / 2

    def axis(self) -> np.ndarray:
        return -self.L + self.h * np.arange(self.M)

    def frequency_axis(self) -> np.ndarray:
        return self.dxi * np.arange(-self.M // 2, self.M // 2)

    def coordinates(self) -> list:
        """Broadcastable coordinate arrays x_1, ..., x_n (sparse meshgrid)."""
        ax = self.axis()
        return np.meshgrid(*([ax] * self.n), indexing="ij", sparse=True)

    def wavenumbers(self) -> list:
        ax = self.frequency_axis()
        return np.meshgrid(*([ax] * self.n), indexing="ij", sparse=True)

    @cached_property
    def abs_xi(self) -> np.ndarray:
        xi = self.wavenumbers()
        return np.sqrt(sum(k**2 for k in xi))

    def contains(self, points) -> np.ndarray:
        points = np.atleast_2d(points)
        return np.all((points >= -self.L) & (points < self.L), axis=-1)


@dataclass(frozen=True, eq=False)
class Field:
    """Complex samples on a Grid, in space or frequency representation.

    Fields are treated as immutable; every operation returns a new Field.
    """

    grid: Grid
    values: np.ndarray
    representation: str = SPACE

    def __post_init__(self):
        if self.representation not in (SPACE, FREQUENCY):
            raise RepresentationError(f"unknown representation {self.representation!r}")
        if self.values.shape != self.grid.shape:
            raise ParameterError(
                f"values have shape {self.values.shape}, grid expects {self.grid.shape}"
            )

    @classmethod
    def from_function(cls, grid: Grid, func) -> Field:
        """Sample ``func(x_1, ..., x_n)`` on the spatial lattice."""
        vals = np.broadcast_to(func(*grid.coordinates()), grid.shape)
        return cls(grid, np.array(vals, dtype=complex), SPACE)

    @classmethod
    def from_spectrum(cls, grid: Grid, func) -> Field:
        """Sample ``func(xi_1, ..., xi_n)`` on the frequency lattice."""
        vals = np.broadcast_to(func(*grid.wavenumbers()), grid.shape)
        return cls(grid, np.array(vals, dtype=complex), FREQUENCY)

    def with_values(self, values) -> Field:
        return Field(self.grid, values, self.representation)

    def to_frequency(self) -> Field:
        return self if self.representation == FREQUENCY else forward_transform(self)

    def to_space(self) -> Field:
        return self if self.representation == SPACE else inverse_transform(self)

    def l2_norm(self) -> float:
        """L^2 norm with the quadrature weight of the current representation."""
        w = self.grid.h if self.representation == SPACE else self.grid.dxi
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * w**self.grid.n))


def _space_factor(grid):
    return (2 * np.pi) ** (-grid.n / 2) * grid.h**grid.n


def _frequency_factor(grid):
    return (2 * np.pi) ** (-grid.n / 2) * (grid.dxi * grid.M) ** grid.n


def forward_transform(f: Field) -> Field:
    """Space samples -> unitary-normalised Fourier coefficients."""
    if f.representation != SPACE:
        raise RepresentationError("forward_transform expects a space-representation field")
    out = sfft.fftshift(sfft.fftn(sfft.ifftshift(f.values)))
    out *= _space_factor(f.grid)
    return Field(f.grid, out, FREQUENCY)


def inverse_transform(f: Field) -> Field:
    """Fourier coefficients -> space samples; exact inverse of forward_transform."""
    if f.representation != FREQUENCY:
        raise RepresentationError("inverse_transform expects a frequency-representation field")
    out = sfft.fftshift(sfft.ifftn(sfft.ifftshift(f.values)))
    out *= _frequency_factor(f.grid)
    return Field(f.grid, out, SPACE)


def evaluate_at_points(f: Field, points) -> np.ndarray:
    """Evaluate the band-limited Fourier sum of ``f`` at arbitrary points.

    Computes u(x) = (2 pi)^(-n/2) (pi/L)^n sum_m c_m exp(i xi_m . x) by direct
    summation. The sum factorises over axes, so it is done as a chain of
    contractions; rows and columns of all-zero coefficients are skipped.

    Parameters
    ----------
    f : Field
        Any representation; space fields are transformed first.
    points : array_like, shape (P, n)

    Returns
    -------
    ndarray of complex, shape (P,)
    """
    grid = f.grid
    points = np.asarray(points, dtype=float).reshape(-1, grid.n)
    if points.size and not np.all(grid.contains(points)):
        raise DomainError(f"points must lie in [-{grid.L}, {grid.L})^{grid.n}")
    coeffs = f.to_frequency().values
    freq = grid.frequency_axis()

    # crop to the bounding box of the nonzero coefficients
    keep = []
    nz = coeffs != 0
    for d in range(grid.n):
        other = tuple(a for a in range(grid.n) if a != d)
        keep.append(np.flatnonzero(np.any(nz, axis=other)))
    if any(k.size == 0 for k in keep):
        return np.zeros(len(points), dtype=complex)
    c = coeffs[np.ix_(*keep)]
    sizes = c.shape

    scale = (2 * np.pi) ** (-grid.n / 2) * grid.dxi**grid.n
    out = np.empty(len(points), dtype=complex)
    inner = int(np.prod(sizes[1:]))
    step = max(1, _CHUNK_ENTRIES // max(inner, 1))
    c_flat = c.reshape(sizes[0], inner)
    for start in range(0, len(points), step):
        pts = points[start:start + step]
        e = [np.exp(1j * np.outer(pts[:, d], freq[keep[d]])) for d in range(grid.n)]
        t = (e[0] @ c_flat).reshape((len(pts),) + sizes[1:])
        if grid.n == 2:
            vals = np.einsum("pb,pb->p", t, e[1])
        else:
            vals = np.einsum("pbc,pb,pc->p", t, e[1], e[2])
        out[start:start + step] = vals
    return scale * out
