"""Exponent bookkeeping for homogeneous Strichartz estimates.

Everything is done on the reciprocals 1/q and 1/p with exact rational
arithmetic, so q = inf and p = inf are simply reciprocal 0. Inputs given as
floats are converted exactly; a boundary comparison that is off by less
than 1e-12 is then treated as equality and reported via ``near_boundary``.

Notation: x = 1/2 - 1/p, y = 1/q.

Schrodinger-like (a > 1)
    classical   y <= (n/2) x,  p != inf
    extended    (n/2) x < y <= ((2n - 1)/2) x
    excluded    (n, q, p) = (2, 2, inf) and (q, p) = (2, (4n - 2)/(2n - 3))
Wave (a = 1)
    classical   y <= ((n - 1)/2) x,  p != inf
    extended    ((n - 1)/2) x < y < (n - 1) x,  p != inf
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from strichartz.errors import ParameterError

CLASSICAL = "classical"
EXTENDED = "extended"
OUTSIDE = "outside"

EXCLUDED_2_2_INF = "(n,q,p) = (2,2,inf)"
EXCLUDED_Q2_LINE = "(q,p) = (2,(4n-2)/(2n-3))"
EXCLUDED_P_INF = "p = inf"

BOUNDARY_TOL = Fraction(1, 10**12)

INF = math.inf


def to_exponent(value):
    """Parse an exponent: int, Fraction, float, or a string like '10/3' or 'inf'.

    Returns (reciprocal as Fraction, exact flag).
    """
    if isinstance(value, str):
        s = value.strip().lower()
        if s in ("inf", "infinity", "oo", "∞"):
            return Fraction(0), True
        try:
            v = Fraction(s)
        except (ValueError, ZeroDivisionError) as err:
            raise ParameterError(f"cannot parse exponent {value!r}") from err
        exact = "." not in s and "e" not in s
        if v <= 0:
            raise ParameterError(f"exponent must be positive, got {value!r}")
        return 1 / v, exact
    if isinstance(value, (int, Fraction)):
        if value <= 0:
            raise ParameterError(f"exponent must be positive, got {value!r}")
        return 1 / Fraction(value), True
    value = float(value)
    if math.isinf(value) and value > 0:
        return Fraction(0), True
    if not value > 0 or math.isnan(value):
        raise ParameterError(f"exponent must be positive, got {value!r}")
    return 1 / Fraction(value), False


@dataclass(frozen=True)
class IntegrabilityPair:
    """(q, p) stored through their reciprocals."""

    inv_q: Fraction
    inv_p: Fraction
    exact: bool = True

    @classmethod
    def of(cls, q, p) -> IntegrabilityPair:
        iq, eq = to_exponent(q)
        ip, ep = to_exponent(p)
        if iq > Fraction(1, 2) or ip > Fraction(1, 2):
            raise ParameterError(f"need q, p >= 2, got q={q}, p={p}")
        return cls(iq, ip, eq and ep)

    @property
    def q(self):
        return INF if self.inv_q == 0 else 1 / self.inv_q

    @property
    def p(self):
        return INF if self.inv_p == 0 else 1 / self.inv_p

    def __str__(self):
        def fmt(v):
            return "inf" if v == INF else str(v)
        return f"(q,p) = ({fmt(self.q)},{fmt(self.p)})"


def _pair(pair) -> IntegrabilityPair:
    if isinstance(pair, IntegrabilityPair):
        return pair
    q, p = pair
    return IntegrabilityPair.of(q, p)


def _cmp(a: Fraction, b: Fraction, exact: bool):
    """Three-way comparison with the float tolerance. Returns (sign, near)."""
    d = a - b
    if exact:
        return (d > 0) - (d < 0), False
    if abs(d) <= BOUNDARY_TOL:
        return 0, True
    return (d > 0) - (d < 0), False


@dataclass(frozen=True)
class Classification:
    """Where (n, q, p) sits, and every regularity threshold attached to it.

    ``alpha_endpoint`` describes the sharp-alpha result for Schrodinger-like
    flows: "attained" (alpha = alpha_sharp suffices), "strict" (only
    alpha > alpha_sharp) or None (not covered).
    """

    n: int
    pair: IntegrabilityPair
    variant: str
    region: str
    excluded_endpoint: str | None
    s: Fraction | float | None
    alpha_sharp: Fraction | None
    alpha_sufficient_cho_lee: Fraction | None
    alpha_sufficient_general: Fraction | None
    alpha_endpoint: str | None
    near_boundary: bool = False
    unverified_endpoint: bool = False

    @property
    def admissible(self) -> bool:
        return self.region != OUTSIDE and self.excluded_endpoint is None

    @property
    def theorem(self) -> str:
        if self.excluded_endpoint is not None:
            return "none (excluded endpoint)"
        if self.variant == "wave":
            if self.region == CLASSICAL:
                return "classical wave range"
            if self.region == EXTENDED:
                return "angular-regularity wave range"
            return "none"
        if self.region == CLASSICAL:
            return "Keel-Tao classical range"
        if self.region == EXTENDED:
            if self.alpha_endpoint == "attained":
                return "sharp alpha attained (n > 2, q != 2)"
            if self.alpha_endpoint == "strict":
                return "sharp alpha up to endpoint (alpha > alpha_sharp)"
            return "Cho-Lee range only (alpha > alpha_cho_lee)"
        return "none"

    def as_dict(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return {"value": float(v), "exact": str(v)}
            return v
        return {
            "n": self.n,
            "q": "inf" if self.pair.q == INF else str(self.pair.q),
            "p": "inf" if self.pair.p == INF else str(self.pair.p),
            "variant": self.variant,
            "region": self.region,
            "excluded_endpoint": self.excluded_endpoint,
            "admissible": self.admissible,
            "theorem": self.theorem,
            "s": enc(self.s),
            "alpha_sharp": enc(self.alpha_sharp),
            "alpha_sufficient_cho_lee": enc(self.alpha_sufficient_cho_lee),
            "alpha_sufficient_general": enc(self.alpha_sufficient_general),
            "alpha_endpoint": self.alpha_endpoint,
            "near_boundary": self.near_boundary,
            "unverified_endpoint": self.unverified_endpoint,
        }


def _exact_a(a):
    if isinstance(a, (int, Fraction)):
        return Fraction(a)
    if isinstance(a, str):
        return Fraction(a)
    fa = float(a)
    return Fraction(fa) if fa.is_integer() else fa


def scaling_exponent(pair, n: int, a=2):
    """s = n(1/2 - 1/p) - a/q, exact when ``a`` is rational."""
    pr = _pair(pair)
    a = _exact_a(a)
    return n * (Fraction(1, 2) - pr.inv_p) - a * pr.inv_q


def alpha_sharp(pair, n: int) -> Fraction:
    """2/q + n/p - n/2, the angular regularity forced by the Knapp block."""
    pr = _pair(pair)
    return 2 * pr.inv_q + n * pr.inv_p - Fraction(n, 2)


def _check_n(n):
    if int(n) != n or n < 2:
        raise ParameterError(f"n must be an integer >= 2, got {n}")
    return int(n)


def classify_schrodinger(pair, n: int, a=2) -> Classification:
    n = _check_n(n)
    pr = _pair(pair)
    x = Fraction(1, 2) - pr.inv_p
    y = pr.inv_q
    lower = Fraction(n, 2) * x
    upper = Fraction(2 * n - 1, 2) * x
    near = False

    c_low, n1 = _cmp(y, lower, pr.exact)
    near |= n1
    excluded = None
    endpoint = None
    if c_low <= 0:
        region = CLASSICAL
        if pr.inv_p == 0:
            excluded = EXCLUDED_2_2_INF if (n == 2 and pr.inv_q == Fraction(1, 2)) else EXCLUDED_P_INF
    else:
        c_up, n2 = _cmp(y, upper, pr.exact)
        near |= n2
        if c_up > 0:
            region = OUTSIDE
        else:
            region = EXTENDED
            q2_line = Fraction(2 * n - 3, 4 * n - 2)
            c_q, n3 = _cmp(pr.inv_q, Fraction(1, 2), pr.exact)
            c_p, n4 = _cmp(pr.inv_p, q2_line, pr.exact)
            near |= n3 or n4
            if n == 2 and pr.inv_q == Fraction(1, 2) and pr.inv_p == 0:
                excluded = EXCLUDED_2_2_INF
            elif c_q == 0 and c_p == 0:
                excluded = EXCLUDED_Q2_LINE
            elif n == 2 and c_up == 0:
                endpoint = None
            elif n > 2 and c_q != 0:
                endpoint = "attained"
            else:
                endpoint = "strict"

    sharp = alpha_sharp(pr, n)
    return Classification(
        n=n, pair=pr, variant="schrodinger", region=region, excluded_endpoint=excluded,
        s=scaling_exponent(pr, n, a), alpha_sharp=sharp,
        alpha_sufficient_cho_lee=Fraction(2 * n - 1, 2 * n - 2) * sharp,
        alpha_sufficient_general=Fraction(5 * n - 1, 5 * n - 5) * sharp,
        alpha_endpoint=endpoint, near_boundary=near,
    )


def classify_wave(pair, n: int) -> Classification:
    """Ranges for the wave equation (a = 1).

    Points on the upper line y = (n - 1) x are reported as outside with
    ``unverified_endpoint`` set, since no endpoint statement is available.
    """
    n = _check_n(n)
    pr = _pair(pair)
    x = Fraction(1, 2) - pr.inv_p
    y = pr.inv_q
    near = False
    unverified = False
    excluded = EXCLUDED_P_INF if pr.inv_p == 0 else None

    c_low, n1 = _cmp(y, Fraction(n - 1, 2) * x, pr.exact)
    near |= n1
    if c_low <= 0:
        region = CLASSICAL
    else:
        c_up, n2 = _cmp(y, (n - 1) * x, pr.exact)
        near |= n2
        region = EXTENDED if c_up < 0 else OUTSIDE
        unverified = c_up == 0
    return Classification(
        n=n, pair=pr, variant="wave", region=region, excluded_endpoint=excluded,
        s=scaling_exponent(pr, n, 1), alpha_sharp=None, alpha_sufficient_cho_lee=None,
        alpha_sufficient_general=None, alpha_endpoint=None, near_boundary=near,
        unverified_endpoint=unverified,
    )


def classify(pair, n: int, a=2) -> Classification:
    """Dispatch on the dispersion exponent: a = 1 is the wave variant."""
    if float(a) == 1:
        return classify_wave(pair, n)
    if float(a) < 1:
        raise ParameterError(f"dispersion exponent must be >= 1, got {a}")
    return classify_schrodinger(pair, n, a)
