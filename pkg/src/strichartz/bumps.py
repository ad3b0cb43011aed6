"""Smooth cut-off profiles built from exp(-1/x).

Everything here is C-infinity with compact support (or compactly supported
derivative), and is evaluated in closed form so that integrals against the
profiles can be checked independently by quadrature.
"""
import numpy as np


def _f(y):
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    pos = y > 0
    out[pos] = np.exp(-1.0 / y[pos])
    return out


def smooth_step(y):
    """Monotone C-infinity step: 0 for y <= 0, 1 for y >= 1.

    S(y) = f(y) / (f(y) + f(1 - y)) with f(y) = exp(-1/y) for y > 0.
    It satisfies S(1 - y) = 1 - S(y).
    """
    y = np.asarray(y, dtype=float)
    a = _f(y)
    b = _f(1.0 - y)
    return a / (a + b)


def smooth_step_derivative(y):
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    inside = (y > 0) & (y < 1)
    yi = y[inside]
    a = np.exp(-1.0 / yi)
    b = np.exp(-1.0 / (1.0 - yi))
    da = a / yi**2
    db = b / (1.0 - yi) ** 2
    out[inside] = (da * b + a * db) / (a + b) ** 2
    return out


def bump(x):
    """Symmetric unit-mass bump B supported in (-1, 1).

    B(x) = S'((x + 1) / 2) / 2, so its antiderivative is S((x + 1) / 2).
    """
    x = np.asarray(x, dtype=float)
    return 0.5 * smooth_step_derivative(0.5 * (x + 1.0))


def mollifier(x, width):
    """Approximate identity supported in (-width, width) with unit mass."""
    x = np.asarray(x, dtype=float)
    return bump(x / width) / width


def mollified_indicator(x, lo, hi, width):
    """Indicator of (lo, hi) convolved with ``mollifier(., width)``.

    Equals the sharp indicator exactly outside the transition shells
    |x - lo| < width and |x - hi| < width, and its derivative is
    mollifier(x - lo) - mollifier(x - hi).
    """
    x = np.asarray(x, dtype=float)
    up = smooth_step(0.5 * ((x - lo) / width + 1.0))
    down = smooth_step(0.5 * ((x - hi) / width + 1.0))
    return up - down


# value on the two endpoints of a sharp indicator
ENDPOINT = 2**-0.5


def sharp_indicator(x, lo, hi):
    """Indicator of (lo, hi) taking the value 1/sqrt(2) at the two endpoints.

    With endpoints on the lattice, the lattice sum of the squared indicator
    is then the trapezoidal rule for its integral, so the L^2 norm of a
    sampled block is exact. Linear sums are off by one endpoint term,
    O(h / (hi - lo)).
    """
    x = np.asarray(x, dtype=float)
    out = ((x > lo) & (x < hi)).astype(float)
    out[(x == lo) | (x == hi)] = ENDPOINT
    return out


def dyadic_cutoff(rho):
    """beta(rho): 1 for rho <= 1, 0 for rho >= 2, smooth in log2(rho) between."""
    rho = np.asarray(rho, dtype=float)
    with np.errstate(divide="ignore"):
        lg = np.log2(np.where(rho > 0, rho, 1.0))
    out = 1.0 - smooth_step(lg)
    out[rho <= 0] = 1.0
    return out


def dyadic_bump(rho):
    """Littlewood-Paley profile psi(rho) = beta(rho) - beta(2 rho).

    Supported in [1/2, 2]; sum over N in 2^Z of psi(rho / N) telescopes to 1
    for every rho > 0. psi(1) = 1.
    """
    rho = np.asarray(rho, dtype=float)
    return dyadic_cutoff(rho) - dyadic_cutoff(2.0 * rho)
