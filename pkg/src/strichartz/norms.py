"""Norm functionals: L^p_x, L^q_t L^p_x, L^q_t L^p_r L^2_omega and H^{s,alpha}_omega."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from strichartz.angular import SphericalGrid, lambda_omega, to_polar
from strichartz.errors import ParameterError
from strichartz.grid import Field
from strichartz.propagator import (
    DispersionParams,
    fractional_derivative,
    propagate,
    propagate_comoving,
)


@dataclass(frozen=True)
class TimeSampling:
    """Composite midpoint rule with ``n_nodes`` cells on [-T, T]."""

    T: float
    n_nodes: int = 8

    def __post_init__(self):
        if not self.T > 0:
            raise ParameterError(f"T must be positive, got {self.T}")
        if self.n_nodes < 1:
            raise ParameterError("need at least one time node")

    @property
    def dt(self) -> float:
        return 2 * self.T / self.n_nodes

    @property
    def nodes(self) -> np.ndarray:
        return -self.T + self.dt * (np.arange(self.n_nodes) + 0.5)

    def refined(self) -> TimeSampling:
        return TimeSampling(self.T, 2 * self.n_nodes)


def _check_exponent(p, name="p", low=1.0):
    if not (p == np.inf or p >= low):
        raise ParameterError(f"{name} must be >= {low} or inf, got {p}")


def _lp_sum(values, weights, p):
    """(sum w |v|^p)^(1/p), or max |v| for p = inf. ``values`` are >= 0."""
    if p == np.inf:
        return float(np.max(values))
    return float(np.sum(weights * values**p) ** (1.0 / p))


def lebesgue_norm(f: Field, p: float) -> float:
    """Spatial L^p norm (sum |f(x_k)|^p h^n)^(1/p); max over nodes for p = inf."""
    _check_exponent(p)
    u = np.abs(f.to_space().values)
    if p == np.inf:
        return float(u.max())
    h_n = f.grid.h**f.grid.n
    if p == 2:
        return float(np.sqrt(np.vdot(u, u).real * h_n))
    return float((np.sum(u**p) * h_n) ** (1.0 / p))


def mixed_time_norm(u0: Field, params: DispersionParams, sampling: TimeSampling,
                    q: float, p: float, comoving: bool = False, velocity=None) -> float:
    """||e^{-it|D|^a} u0||_{L^q_t L^p_x} on [-T, T].

    With ``comoving`` the solution is viewed in the frame moving with
    ``velocity`` (default: the group velocity at xi = e_1), which keeps a
    Knapp packet centred in the box without changing any L^p_x norm.
    """
    _check_exponent(q, "q", 2.0)
    _check_exponent(p, "p", 2.0)
    v = None
    if comoving:
        v = params.group_velocity() if velocity is None else velocity
    c = u0.to_frequency()
    per_time = np.empty(sampling.n_nodes)
    for m, t in enumerate(sampling.nodes):
        u = propagate_comoving(c, t, params, v) if comoving else propagate(c, t, params)
        per_time[m] = lebesgue_norm(u, p)
    return _lp_sum(per_time, sampling.dt, q)


def shell_lp(shell_norms: np.ndarray, sg: SphericalGrid, p: float) -> float:
    """Radial L^p with weight r^{n-1} of the per-shell L^2_omega norms."""
    return _lp_sum(shell_norms, sg.radial_weights, p)


def spherically_averaged_norm(u0: Field, params: DispersionParams, sampling: TimeSampling,
                              sg: SphericalGrid, q: float, p: float) -> float:
    """||u||_{L^q_t L^p_r L^2_omega} with the radial measure r^{n-1} dr.

    The radial integral only covers the shells of ``sg``; choose r_max so the
    solution is negligible beyond it.
    """
    _check_exponent(q, "q", 2.0)
    _check_exponent(p, "p", 2.0)
    c = u0.to_frequency()
    per_time = np.empty(sampling.n_nodes)
    for m, t in enumerate(sampling.nodes):
        a = to_polar(propagate(c, t, params), sg)
        per_time[m] = shell_lp(a.shell_norms(), sg, p)
    return _lp_sum(per_time, sampling.dt, q)


def angular_sobolev_norm(f, s: float, alpha: float, sg: SphericalGrid) -> float:
    """||Lambda_omega^alpha D^s f||_{L^2} over the shells of ``sg``.

    ``f`` is a Field, or (only for s = 0) a callable on point arrays; the
    latter is how closed-form Fourier-side data such as a Knapp block is
    measured without a Cartesian grid.
    """
    if s != 0:
        if not isinstance(f, Field):
            raise ParameterError("D^s needs a Field")
        f = fractional_derivative(f, s)
    return lambda_omega(to_polar(f, sg), alpha).l2_norm()
