"""Frequency multipliers: the dispersive flow, D^s and Littlewood-Paley pieces.

The flow of i u_t + |D|^a u = 0 is realised with the multiplier
exp(-i t |xi|^a), the sign that goes with the plane-wave form
exp(i(x.xi - t|xi|^2)) used in the Knapp computation. Every norm computed in
this package is invariant under the opposite choice (complex conjugation).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from strichartz.bumps import dyadic_bump
from strichartz.errors import ParameterError, SingularMultiplierError
from strichartz.grid import FREQUENCY, Field, Grid


@dataclass(frozen=True)
class DispersionParams:
    """Dimension ``n`` and exponent ``a`` of phi(rho) = rho^a."""

    n: int
    a: float = 2.0

    def __post_init__(self):
        if self.n < 2:
            raise ParameterError(f"n must be >= 2, got {self.n}")
        if not self.a >= 1:
            raise ParameterError(f"dispersion exponent must be >= 1, got {self.a}")

    def group_velocity(self) -> tuple:
        """phi'(1) along the first axis, the speed of a packet at xi = e_1."""
        return (float(self.a),) + (0.0,) * (self.n - 1)


@lru_cache(maxsize=4)
def _phase_symbol(grid: Grid, a: float, v: tuple) -> np.ndarray:
    sym = grid.abs_xi**a
    if any(v):
        for vd, k in zip(v, grid.wavenumbers()):
            if vd:
                sym = sym - vd * k
    return sym


def _check(u0, params):
    if params.n != u0.grid.n:
        raise ParameterError(f"params.n = {params.n} but field dimension is {u0.grid.n}")


def propagate(u0: Field, t: float, params: DispersionParams) -> Field:
    """Solution at time ``t``: coefficients times exp(-i t |xi|^a)."""
    return propagate_comoving(u0, t, params, None)


def propagate_comoving(u0: Field, t: float, params: DispersionParams, v) -> Field:
    """Solution at time ``t`` seen from a frame moving with velocity ``v``.

    The multiplier is exp(-i t (|xi|^a - v.xi)), i.e. the output of
    ``propagate`` translated by -v t. Translation-invariant norms agree
    with the lab frame.
    """
    _check(u0, params)
    v = (0.0,) * params.n if v is None else tuple(float(c) for c in v)
    if len(v) != params.n:
        raise ParameterError(f"velocity must have {params.n} components")
    c = u0.to_frequency()
    if t == 0:
        return c
    sym = _phase_symbol(c.grid, float(params.a), v)
    return Field(c.grid, c.values * np.exp(-1j * t * sym), FREQUENCY)


def fractional_derivative(f: Field, s: float) -> Field:
    """Apply D^s = |xi|^s.

    For s > 0 the zero mode is annihilated. For s < 0 the zero mode must
    already vanish, otherwise SingularMultiplierError is raised.
    """
    c = f.to_frequency()
    if s == 0:
        return c
    rho = c.grid.abs_xi
    zero = rho == 0
    if s < 0:
        scale = max(1.0, float(np.max(np.abs(c.values))))
        if np.any(np.abs(c.values[zero]) > 1e-12 * scale):
            raise SingularMultiplierError("D^s with s < 0 needs a mean-zero field")
    mult = np.zeros_like(rho)
    mult[~zero] = rho[~zero] ** s
    return Field(c.grid, c.values * mult, FREQUENCY)


def is_dyadic(N) -> bool:
    if not N > 0:
        return False
    m, e = np.frexp(float(N))
    return m == 0.5


def littlewood_paley(f: Field, N: float) -> Field:
    """Smooth projection P_N onto |xi| ~ N (profile ``dyadic_bump(|xi|/N)``)."""
    if not is_dyadic(N):
        raise ParameterError(f"N must be a power of two, got {N}")
    c = f.to_frequency()
    return Field(c.grid, c.values * dyadic_bump(c.grid.abs_xi / N), FREQUENCY)


def rescaled_grid(grid: Grid, N: float) -> Grid:
    """Grid whose frequency lattice is N times that of ``grid``."""
    return Grid(grid.n, grid.M, grid.L / N)


def rescale_field(f: Field, N: float) -> Field:
    """L^2-preserving dilation: coefficients c(xi) -> N^(-n/2) c(xi / N).

    The result lives on ``rescaled_grid(f.grid, N)`` and carries the same
    coefficient array, so evaluations at rescaled points are exactly related.
    """
    c = f.to_frequency()
    g = rescaled_grid(c.grid, N)
    return Field(g, c.values * N ** (-c.grid.n / 2), FREQUENCY)
