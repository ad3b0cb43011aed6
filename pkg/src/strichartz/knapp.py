"""Knapp-type sharpness experiment for angular regularity.

The datum is a thin block in frequency space,

    u0_hat(xi) = chi_(1-eps, 1+eps)(xi_1) * prod_{i>1} chi_(-eps, eps)(xi_i),

optionally with its edges mollified on the scale eps/10. The experiment
measures, as eps -> 0,

* the space-time norm ||u||_{L^q_t L^p_x} over |t| <= 0.1/eps^2, expected
  to scale like eps^(n - n/p - 2/q);
* the angular Sobolev norm ||u0||_{H^{0,alpha}_omega}, computed on the
  Fourier side (rotations commute with the Fourier transform), expected to
  scale like eps^(n/2 - alpha) for 0 <= alpha <= 1;
* the radial part of u0_hat, expected to scale like eps^(n - 1/2);

and fits power laws to the sweeps. Comparing the first two fitted
exponents gives the necessary regularity alpha >= 2/q + n/p - n/2.

Fixed choices: every "much smaller than" constant is 1/10; the box
half-length is 20 pi / eps so the frequency spacing is eps/20 and both the
block edges and xi = e_1 sit on the lattice, which makes the discretisation
exactly self-similar in eps.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from strichartz import bumps
from strichartz.admissibility import alpha_sharp, classify_schrodinger
from strichartz.angular import (
    SphericalGrid,
    gauss_legendre,
    lambda_omega,
    radial_l2_norm,
    radial_projection,
    spherical_grid,
    to_polar,
)
from strichartz.errors import (
    ClassificationError,
    FitError,
    ParameterError,
    PreconditionError,
    ResolutionError,
)
from strichartz.grid import Field, Grid, evaluate_at_points
from strichartz.norms import TimeSampling, angular_sobolev_norm, mixed_time_norm
from strichartz.propagator import DispersionParams, propagate_comoving

SMALL = 0.1            # the constant behind every "<<"
MOLLIFY = 0.1          # transition half-width, in units of eps
TIME_WINDOW = 0.1      # |t| <= TIME_WINDOW / eps^2
BOX_FACTOR = 20 * np.pi  # L = BOX_FACTOR / eps, frequency spacing eps/20
LOWER_BOUND_SLACK = 0.5  # c = slack * |u(0,0)| / eps^n
MAX_GRID_POINTS = 1 << 25

QUANTITIES = ("mixed", "angular", "radial", "omega")


@dataclass(frozen=True)
class KnappConfig:
    eps: float
    mollified: bool = True

    def __post_init__(self):
        if not 0 < self.eps <= 0.25:
            raise ParameterError(f"eps must lie in (0, 1/4], got {self.eps}")

    @property
    def width(self) -> float:
        """Half-width of the mollifier support, eps/10."""
        return MOLLIFY * self.eps

    def psi(self, x):
        """psi_eps: symmetric, unit mass, support (-eps/10, eps/10), psi(0) ~ 1/eps."""
        return bumps.mollifier(x, self.width)

    def intervals(self, n: int) -> list:
        return [(1 - self.eps, 1 + self.eps)] + [(-self.eps, self.eps)] * (n - 1)

    def factor(self, x, lo, hi):
        if self.mollified:
            return bumps.mollified_indicator(x, lo, hi, self.width)
        return bumps.sharp_indicator(x, lo, hi)

    def factor_derivative(self, x, lo, hi):
        if not self.mollified:
            raise ParameterError("the sharp block has no derivative")
        return self.psi(np.asarray(x) - lo) - self.psi(np.asarray(x) - hi)

    def block(self, *xi):
        """Tensor-product block evaluated on broadcastable coordinate arrays."""
        out = 1.0
        for x, (lo, hi) in zip(xi, self.intervals(len(xi))):
            out = out * self.factor(x, lo, hi)
        return out

    def profile(self, points):
        """Block values at an array of points of shape (P, n)."""
        points = np.asarray(points, dtype=float)
        n = points.shape[-1]
        out = np.ones(points.shape[0])
        for d, (lo, hi) in enumerate(self.intervals(n)):
            x = points[:, d]
            live = np.flatnonzero(out)
            out[live] *= self.factor(x[live], lo, hi)
        return out


def knapp_grid(eps: float, n: int) -> Grid:
    """Smallest lattice satisfying the resolution contract of ``knapp_data``."""
    L = BOX_FACTOR / eps
    top = 1 + eps + MOLLIFY * eps
    M = 4
    while (M / 2 - 1) * np.pi / L < top:
        M *= 2
    if M**n > MAX_GRID_POINTS:
        raise ResolutionError(
            f"eps = {eps:g} in n = {n} needs a {M}^{n} lattice, above the {MAX_GRID_POINTS} point budget"
        )
    return Grid(n, M, L)


def knapp_data(config: KnappConfig, grid: Grid) -> Field:
    """The (sharp or mollified) block as a frequency-representation field."""
    eps = config.eps
    if grid.dxi > eps / 20 * (1 + 1e-12):
        raise ResolutionError(
            f"frequency spacing {grid.dxi:.3g} exceeds eps/20 = {eps / 20:.3g}; use L >= 20 pi / eps"
        )
    top = 1 + eps + config.width
    if (grid.M / 2 - 1) * grid.dxi < top:
        raise ResolutionError(f"largest lattice frequency does not reach {top:.4g}; increase M")
    return Field.from_spectrum(grid, config.block)


def comoving_velocity(params: DispersionParams) -> tuple:
    return params.group_velocity()


@dataclass(frozen=True)
class RegionCheck:
    t: float
    fraction: float
    threshold: float
    calibration: float
    n_points: int
    min_value: float


def region_points(config: KnappConfig, n: int, n_side: int = 21) -> np.ndarray:
    """Uniform lattice on the co-moving box |x_i| <= 0.1/eps."""
    half = SMALL / config.eps
    ax = np.linspace(-half, half, n_side)
    return np.stack(np.meshgrid(*([ax] * n), indexing="ij"), axis=-1).reshape(-1, n)


def calibration_constant(u0: Field, config: KnappConfig) -> float:
    """c with |u| >= c eps^n: half the value at t = 0, x = 0, over eps^n."""
    n = u0.grid.n
    peak = abs(evaluate_at_points(u0, np.zeros((1, n)))[0])
    return float(LOWER_BOUND_SLACK * peak / config.eps**n)


def region_lower_bound_check(u0: Field, config: KnappConfig, params: DispersionParams,
                             t: float, n_side: int = 21) -> RegionCheck:
    """Fraction of the stationary region where |u(t, x)| >= c eps^n.

    The region is |x_1 - v t| <= 0.1/eps, |x_i| <= 0.1/eps, and is sampled
    in the frame moving with the group velocity v. Requires
    |t| <= 0.1/eps^2.
    """
    eps = config.eps
    if abs(t) > TIME_WINDOW / eps**2 * (1 + 1e-12):
        raise PreconditionError(f"|t| = {abs(t):.4g} exceeds 0.1/eps^2 = {TIME_WINDOW / eps**2:.4g}")
    n = u0.grid.n
    c = calibration_constant(u0, config)
    ut = propagate_comoving(u0, t, params, comoving_velocity(params))
    vals = np.abs(evaluate_at_points(ut, region_points(config, n, n_side)))
    thr = float(c * eps**n)
    return RegionCheck(t, float(np.mean(vals >= thr)), thr, c, vals.size, float(vals.min()))


@dataclass(frozen=True)
class PowerLawFit:
    """value ~ exp(intercept) * eps^exponent, fitted in log-log space."""

    exponent: float
    intercept: float
    r_squared: float
    residuals: tuple
    epsilons: tuple = ()
    values: tuple = ()


def fit_power_law(epsilons, values) -> PowerLawFit:
    eps = np.asarray(epsilons, dtype=float)
    vals = np.asarray(values, dtype=float)
    if eps.size < 2 or eps.size != vals.size:
        raise FitError("a power-law fit needs at least two (eps, value) pairs")
    if np.any(vals <= 0) or np.any(eps <= 0):
        raise FitError("power-law fit needs positive data")
    if np.unique(eps).size < 2:
        raise FitError("need at least two distinct eps values")
    lx, ly = np.log(eps), np.log(vals)
    res = stats.linregress(lx, ly)
    resid = ly - (res.intercept + res.slope * lx)
    r2 = float(res.rvalue**2) if np.isfinite(res.rvalue) else 1.0
    return PowerLawFit(float(res.slope), float(res.intercept), min(max(r2, 0.0), 1.0),
                       tuple(resid.tolist()), tuple(eps.tolist()), tuple(vals.tolist()))


# quantities ---------------------------------------------------------------

def mixed_norm(config: KnappConfig, pair, params: DispersionParams, n_time: int = 8,
               rtol: float = 5e-3, max_doublings: int = 3) -> tuple:
    """||u||_{L^q_t L^p_x} over |t| <= 0.1/eps^2 in the co-moving frame.

    The number of midpoint cells is doubled until the value changes by less
    than ``rtol``. Returns (value, number of cells used).
    """
    q, p = pair
    grid = knapp_grid(config.eps, params.n)
    u0 = knapp_data(config, grid)
    sampling = TimeSampling(TIME_WINDOW / config.eps**2, n_time)
    value = mixed_time_norm(u0, params, sampling, q, p, comoving=True)
    for _ in range(max_doublings):
        sampling = sampling.refined()
        new = mixed_time_norm(u0, params, sampling, q, p, comoving=True)
        done = abs(new - value) <= rtol * abs(new)
        value = new
        if done:
            break
    return value, sampling.n_nodes


def knapp_spherical_grid(eps: float, n: int = 2, nodes_per_panel: int = 8,
                         panels: int = 48, angular_oversampling: float = 50.0) -> SphericalGrid:
    """Polar grid resolving the Fourier-side block near |xi| = 1.

    Shells cover 1 - 1.5 eps <= r <= 1 + 1.5 eps, which contains the
    mollified block; the angular spacing is below eps / angular_oversampling.
    """
    if n != 2:
        raise ParameterError("Fourier-side angular quantities are implemented for n = 2")
    n_theta = 2 ** math.ceil(math.log2(2 * np.pi * angular_oversampling / eps))
    return spherical_grid(2, 1 + 1.5 * eps, nodes_per_panel, n_theta // 2 - 1,
                          r_min=1 - 1.5 * eps, panels=panels)


def angular_norm(config: KnappConfig, alpha: float, n: int = 2, sg=None) -> float:
    """||u0||_{H^{0,alpha}_omega}, measured on the Fourier side."""
    sg = knapp_spherical_grid(config.eps, n) if sg is None else sg
    return angular_sobolev_norm(config.profile, 0.0, alpha, sg)


def angular_norms(config: KnappConfig, alphas, n: int = 2, sg=None) -> list:
    """``angular_norm`` for several alpha from a single polar resampling."""
    sg = knapp_spherical_grid(config.eps, n) if sg is None else sg
    spectrum = to_polar(config.profile, sg)
    return [lambda_omega(spectrum, al).l2_norm() for al in alphas]


def radial_norm(config: KnappConfig, n: int = 2, sg=None) -> float:
    """L^2 norm of the radial part (angular average) of the Fourier-side block."""
    sg = knapp_spherical_grid(config.eps, n) if sg is None else sg
    return radial_l2_norm(radial_projection(config.profile, sg), sg)


def _axis_moments(config: KnappConfig, lo: float, hi: float, nodes: int = 24, panels: int = 16):
    """1-D integrals of the mollified factor on (lo, hi).

    Returns A = int chi^2, X2 = int x^2 chi^2, D = int chi'^2, XD = int x chi chi'.
    """
    w = config.width
    pieces = [(lo - w, lo + w), (lo + w, hi - w), (hi - w, hi + w)]
    x, wt = [], []
    for a, b in pieces:
        xs, ws = gauss_legendre(a, b, nodes, panels)
        x.append(xs)
        wt.append(ws)
    x, wt = np.concatenate(x), np.concatenate(wt)
    chi = config.factor(x, lo, hi)
    dchi = config.factor_derivative(x, lo, hi)
    return {
        "A": float(np.dot(wt, chi**2)),
        "X2": float(np.dot(wt, x**2 * chi**2)),
        "D": float(np.dot(wt, dchi**2)),
        "XD": float(np.dot(wt, x * chi * dchi)),
    }


def omega_decomposition(config: KnappConfig, n: int, i: int, j: int) -> dict:
    """||Omega_ij u0_hat||^2 split into its three pieces (axes from 1).

    Omega_ij (prod chi_k) = (x_i chi_i chi_j' - x_j chi_i' chi_j) prod_{k != i,j} chi_k,
    so the square integrates to leading + second + cross with
    leading = int x_i^2 chi_i^2 * int chi_j'^2, second = int chi_i'^2 * int x_j^2 chi_j^2,
    cross = -2 int x_i chi_i chi_i' * int x_j chi_j chi_j', all times prod A_k.
    """
    if not config.mollified:
        raise ParameterError("Omega_ij of the sharp block is not square integrable")
    if i == j or not (1 <= i <= n and 1 <= j <= n):
        raise ParameterError("need distinct axes in 1..n")
    mom = [_axis_moments(config, lo, hi) for lo, hi in config.intervals(n)]
    mi, mj = mom[i - 1], mom[j - 1]
    rest = float(np.prod([mom[k]["A"] for k in range(n) if k not in (i - 1, j - 1)]))
    leading = mi["X2"] * mj["D"] * rest
    second = mi["D"] * mj["X2"] * rest
    cross = -2 * mi["XD"] * mj["XD"] * rest
    return {"leading": leading, "second": second, "cross": cross,
            "total": leading + second + cross}


def omega_norm(config: KnappConfig, n: int) -> float:
    """(sum_{j > 1} ||Omega_1j u0_hat||^2)^{1/2}."""
    return math.sqrt(sum(omega_decomposition(config, n, 1, j)["total"] for j in range(2, n + 1)))


def predicted_exponent(quantity: str, n: int, pair=None, alpha=None) -> float:
    if quantity == "mixed":
        q, p = pair
        inv_q = 0.0 if q == math.inf else 1 / float(q)
        inv_p = 0.0 if p == math.inf else 1 / float(p)
        return n - n * inv_p - 2 * inv_q
    if quantity == "angular":
        return n / 2 - alpha
    if quantity == "radial":
        return n - 0.5
    if quantity == "omega":
        return (n - 2) / 2
    raise ParameterError(f"unknown quantity {quantity!r}")


@dataclass
class SweepResult:
    quantity: str
    n: int
    a: float
    epsilons: tuple
    values: tuple
    predicted: float
    fit: PowerLawFit
    pair: tuple | None = None
    alpha: float | None = None
    mollified: bool = True
    details: dict = field(default_factory=dict)

    R2_MIN = 0.98

    @property
    def flagged(self) -> bool:
        """True when the fit is too poor to be accepted silently."""
        return self.fit.r_squared < self.R2_MIN

    @property
    def label(self) -> str:
        if self.quantity == "mixed":
            q, p = self.pair
            return f"mixed(q={_fmt(q)},p={_fmt(p)})"
        if self.quantity == "angular":
            return f"angular(alpha={self.alpha:g})"
        return self.quantity


def _fmt(v):
    return "inf" if v == math.inf else f"{float(v):g}"


def check_pair(pair, n: int, a: float = 2):
    """Raise ClassificationError unless (q, p) is in the admissible extended range."""
    c = classify_schrodinger(pair, n, a)
    if c.region != "extended" or c.excluded_endpoint is not None:
        reason = c.excluded_endpoint or f"region is {c.region}, not extended"
        raise ClassificationError(f"{c.pair}: {reason}")
    return c


def epsilon_sweep(quantity: str, pairs, eps_list, n: int, a: float = 2.0, alpha=1.0, *,
                  mollified: bool = True, jobs: int = 1, n_time: int = 8) -> list:
    """Evaluate ``quantity`` over ``eps_list`` and fit a power law per configuration.

    ``quantity`` is one of "mixed" (one configuration per (q, p) pair),
    "angular" (one per alpha; ``alpha`` may be a list), "radial", "omega".
    Every pair must lie in the admissible extended range.
    """
    if quantity not in QUANTITIES:
        raise ParameterError(f"quantity must be one of {QUANTITIES}, got {quantity!r}")
    eps_list = [float(e) for e in eps_list]
    if len(eps_list) < 4:
        raise FitError(f"an eps sweep needs at least 4 values, got {len(eps_list)}")
    for e in eps_list:
        if not 0 < e <= 0.25 or not math.log2(e).is_integer():
            raise ParameterError(f"eps values must be dyadic and <= 1/4, got {e}")
    pairs = [tuple(p) for p in pairs]
    for pr in pairs:
        check_pair(pr, n, a)
    params = DispersionParams(n, a)

    if quantity == "mixed":
        for e in eps_list:
            knapp_grid(e, n)  # fail on an unaffordable lattice before any work
        configs = [(pr, None) for pr in pairs]
    elif quantity == "angular":
        alphas = alpha if np.iterable(alpha) else [alpha]
        configs = [(None, float(al)) for al in alphas]
    else:
        configs = [(None, None)]

    def job(args):
        """Values of every configuration at one eps (angular: one polar resampling)."""
        eps, keys = args
        cfg = KnappConfig(eps, mollified)
        if quantity == "mixed":
            return [mixed_norm(cfg, pr, params, n_time) for pr, _ in keys]
        if quantity == "angular":
            return [(v, None) for v in angular_norms(cfg, [al for _, al in keys], n)]
        if quantity == "radial":
            return [(radial_norm(cfg, n), None)]
        return [(omega_norm(cfg, n), None)]

    # mixed norms are independent per (pair, eps); angular values share the
    # polar samples of one eps
    if quantity == "mixed":
        tasks = [(e, [c]) for c in configs for e in eps_list]
    else:
        tasks = [(e, configs) for e in eps_list]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outputs = list(pool.map(job, tasks))
    else:
        outputs = [job(t) for t in tasks]
    table = {}
    for (e, keys), out in zip(tasks, outputs):
        for key, val in zip(keys, out):
            table[key, e] = val

    results = []
    for k, (pr, al) in enumerate(configs):
        chunk = [table[(pr, al), e] for e in eps_list]
        values = tuple(float(v) for v, _ in chunk)
        details = {}
        if quantity == "mixed":
            details["time_nodes"] = [nt for _, nt in chunk]
        results.append(SweepResult(
            quantity=quantity, n=n, a=a, epsilons=tuple(eps_list), values=values,
            predicted=predicted_exponent(quantity, n, pr, al),
            fit=fit_power_law(eps_list, values), pair=pr, alpha=al,
            mollified=mollified, details=details,
        ))
    return results


@dataclass(frozen=True)
class Verdict:
    consistent: bool
    lhs_exponent: float
    rhs_exponent: float
    lhs_predicted: float
    rhs_predicted: float
    alpha: float
    alpha_sharp: float
    tolerance: float

    @property
    def label(self) -> str:
        return "consistent" if self.consistent else "estimate would fail"

    def as_dict(self) -> dict:
        return {
            "verdict": self.label,
            "consistent": self.consistent,
            "lhs_exponent": self.lhs_exponent,
            "rhs_exponent": self.rhs_exponent,
            "lhs_predicted": self.lhs_predicted,
            "rhs_predicted": self.rhs_predicted,
            "alpha": self.alpha,
            "alpha_sharp": self.alpha_sharp,
            "tolerance": self.tolerance,
        }


def necessity_verdict(fit_lhs: PowerLawFit, fit_rhs: PowerLawFit, pair, n: int,
                      alpha: float, tolerance: float = 0.15) -> Verdict:
    """Compare ||u|| ~ eps^lhs against ||u0||_{H^{0,alpha}} ~ eps^rhs.

    An estimate ||u|| <= C ||u0|| survives eps -> 0 only if lhs >= rhs; the
    verdict allows ``tolerance`` for fitting error.
    """
    if fit_lhs.epsilons and fit_rhs.epsilons and not np.allclose(fit_lhs.epsilons, fit_rhs.epsilons):
        raise ParameterError("the two fits come from different eps sweeps")
    return Verdict(
        consistent=fit_lhs.exponent >= fit_rhs.exponent - tolerance,
        lhs_exponent=fit_lhs.exponent, rhs_exponent=fit_rhs.exponent,
        lhs_predicted=predicted_exponent("mixed", n, pair),
        rhs_predicted=predicted_exponent("angular", n, alpha=alpha),
        alpha=float(alpha), alpha_sharp=float(alpha_sharp(pair, n)), tolerance=tolerance,
    )


CSV_COLUMNS = ("epsilon", "quantity", "value", "predicted_exponent", "fitted_exponent", "r_squared")


def write_sweep_csv(results, path, header_lines=()) -> None:
    """One row per (configuration, eps); '#' lines carry the effective config."""
    with open(path, "w", newline="") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in results:
            for e, v in zip(r.epsilons, r.values):
                w.writerow([f"{e:.17g}", r.label, f"{v:.17g}", f"{r.predicted:.17g}",
                            f"{r.fit.exponent:.17g}", f"{r.fit.r_squared:.17g}"])
