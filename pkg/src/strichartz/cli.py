"""Command-line front end.

    strichartz classify -n 3 -a 2 -q 2 -p 4
    strichartz knapp-sweep --config sweep.ini --out-dir out/
    strichartz probe-bound --config probe.ini --seed 7
    strichartz propagate-snapshot --eps 1/16 --tau 0.05 --out-dir out/

Exit codes: 0 ok, 2 parse error, 3 domain error, 4 resolution or fit failure.
"""
from __future__ import annotations

import argparse
import configparser
import json
import logging
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from strichartz import admissibility, knapp
from strichartz.angular import spherical_grid
from strichartz.errors import (
    ClassificationError,
    DomainError,
    FitError,
    ParameterError,
    PreconditionError,
    ResolutionError,
)
from strichartz.grid import SPACE, Field, Grid, evaluate_at_points
from strichartz.norms import TimeSampling, spherically_averaged_norm
from strichartz.propagator import (
    DispersionParams,
    littlewood_paley,
    propagate_comoving,
    rescale_field,
)

log = logging.getLogger("strichartz")

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_RESOLUTION = 0, 2, 3, 4


class ConfigError(Exception):
    pass


def parse_number(text: str):
    """'inf', '10/3', '2', '0.25' -> inf, Fraction or float."""
    s = str(text).strip().lower()
    if s in ("inf", "infinity", "oo"):
        return math.inf
    try:
        if "." in s or "e" in s:
            return float(s)
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as err:
        raise ConfigError(f"cannot parse number {text!r}") from err


def _number_arg(text):
    try:
        return parse_number(text)
    except ConfigError as err:
        raise argparse.ArgumentTypeError(str(err)) from err


def _list(text: str) -> list:
    return [t.strip() for t in text.replace(";", ",").split(",") if t.strip()]


def _pairs(text: str) -> list:
    out = []
    for item in _list(text):
        if ":" not in item:
            raise ConfigError(f"pair {item!r} must look like q:p")
        q, p = item.split(":")
        out.append((parse_number(q), parse_number(p)))
    return out


def _bool(text: str) -> bool:
    s = str(text).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"cannot parse boolean {text!r}")


def _fmt(v) -> str:
    if v == math.inf:
        return "inf"
    if isinstance(v, Fraction):
        return str(v)
    return repr(v) if isinstance(v, float) else str(v)


def _plain(v):
    """JSON-friendly scalar."""
    if isinstance(v, Fraction):
        return float(v)
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, np.generic):
        return v.item()
    return v


SWEEP_DEFAULTS = {
    "n": "2",
    "a": "2",
    "pairs": "2:8",
    "epsilons": "1/8, 1/16, 1/32, 1/64",
    "quantities": "mixed, angular, radial",
    "alpha": "-0.05, 0.25, 0.55",
    "mollified": "true",
    "n_time": "8",
}

PROBE_DEFAULTS = {
    "n": "3",
    "a": "2",
    "q": "2",
    "p": "4",
    "samples": "20",
    "M": "32",
    "L": "12.566370614359172",
    "T": "1",
    "n_time": "4",
    "n_radial": "24",
    "K": "10",
    "r_max": "10",
    "scales": "1, 2, 4",
}


def load_section(path, section: str, defaults: dict) -> dict:
    """Read ``section`` of an INI file over ``defaults``; unknown keys are errors."""
    cfg = dict(defaults)
    if path is None:
        return cfg
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as err:
        raise ConfigError(f"cannot read config {path}: {err}") from err
    if parser.has_section(section):
        for key, value in parser.items(section):
            if key not in defaults:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            cfg[key] = value
    return cfg


def _config_lines(section: str, cfg: dict, extra: dict) -> list:
    lines = [f"[{section}]"] + [f"{k} = {v}" for k, v in cfg.items()]
    lines += [f"{k} = {v}" for k, v in extra.items()]
    return lines


# classify ------------------------------------------------------------------

def cmd_classify(args) -> int:
    c = admissibility.classify((args.q, args.p), args.n, args.a)
    report = c.as_dict()
    report["a"] = _plain(args.a)
    if args.alpha is not None:
        alpha = float(args.alpha)
        report["alpha"] = alpha
        if c.alpha_sharp is not None:
            report["alpha_meets_necessary"] = alpha >= float(c.alpha_sharp)
    if args.json:
        print(json.dumps(report, indent=2))
        return EXIT_OK
    print(f"n = {c.n}, a = {_fmt(args.a)}, {c.pair}  [{c.variant}]")
    print(f"region:            {c.region}")
    print(f"excluded endpoint: {c.excluded_endpoint or 'none'}")
    print(f"theorem:           {c.theorem}")
    print(f"s:                 {_fmt(c.s)}")
    if c.alpha_sharp is not None:
        print(f"alpha_sharp:       {_fmt(c.alpha_sharp)}")
        print(f"alpha (Cho-Lee):   {_fmt(c.alpha_sufficient_cho_lee)}")
        print(f"alpha (general):   {_fmt(c.alpha_sufficient_general)}")
        print(f"endpoint alpha:    {c.alpha_endpoint or 'not covered'}")
    if c.near_boundary:
        print("warning: within 1e-12 of a boundary; treated as on it")
    if c.unverified_endpoint:
        print("warning: boundary point without an endpoint statement (unverified)")
    if args.alpha is not None and c.alpha_sharp is not None:
        ok = report["alpha_meets_necessary"]
        print(f"alpha = {args.alpha}: {'meets' if ok else 'violates'} the necessary bound")
    return EXIT_OK


# knapp-sweep ---------------------------------------------------------------

def cmd_knapp_sweep(args) -> int:
    cfg = load_section(args.config, "knapp", SWEEP_DEFAULTS)
    try:
        n = int(cfg["n"])
        a = float(parse_number(cfg["a"]))
        pairs = _pairs(cfg["pairs"])
        eps_list = [float(parse_number(e)) for e in _list(cfg["epsilons"])]
        quantities = _list(cfg["quantities"])
        alphas = [float(parse_number(al)) for al in _list(cfg["alpha"])]
        mollified = _bool(cfg["mollified"])
        n_time = int(cfg["n_time"])
    except (ValueError, TypeError) as err:
        raise ConfigError(str(err)) from err
    for qty in quantities:
        if qty not in knapp.QUANTITIES:
            raise ConfigError(f"unknown quantity {qty!r}")

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    header = _config_lines("knapp", cfg, {"seed": args.seed, "jobs": args.jobs,
                                          "box_half_length": "20*pi/eps",
                                          "time_window": "0.1/eps^2",
                                          "small_constant": knapp.SMALL})
    summary = {"config": dict(cfg, seed=args.seed), "fits": [], "verdicts": []}
    by_quantity = {}
    for qty in quantities:
        log.info("sweeping %s", qty)
        results = knapp.epsilon_sweep(qty, pairs, eps_list, n, a, alphas,
                                      mollified=mollified, jobs=args.jobs, n_time=n_time)
        by_quantity[qty] = results
        knapp.write_sweep_csv(results, out / f"knapp_{qty}.csv", header)
        for r in results:
            summary["fits"].append({
                "quantity": r.label,
                "epsilons": list(r.epsilons),
                "values": list(r.values),
                "predicted_exponent": r.predicted,
                "fitted_exponent": r.fit.exponent,
                "r_squared": r.fit.r_squared,
                "flagged": r.flagged,
            })
    if "mixed" in by_quantity and "angular" in by_quantity:
        for lhs in by_quantity["mixed"]:
            for rhs in by_quantity["angular"]:
                v = knapp.necessity_verdict(lhs.fit, rhs.fit, lhs.pair, n, rhs.alpha)
                summary["verdicts"].append(dict(v.as_dict(), pair=[_plain(x) for x in lhs.pair]))
    summary["config"] = {k: _plain(v) for k, v in summary["config"].items()}
    with open(out / "knapp_summary.json", "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
    for f in summary["fits"]:
        flag = "  FLAGGED (r^2 < 0.98)" if f["flagged"] else ""
        print(f"{f['quantity']:>24s}: exponent {f['fitted_exponent']:+.4f} "
              f"(predicted {f['predicted_exponent']:+.4f}, r^2 {f['r_squared']:.4f}){flag}")
    for v in summary["verdicts"]:
        print(f"alpha = {v['alpha']:+.3f}: {v['verdict']} "
              f"(lhs {v['lhs_exponent']:.3f}, rhs {v['rhs_exponent']:.3f})")
    return EXIT_OK


# probe-bound ---------------------------------------------------------------

def random_localized_datum(grid: Grid, rng, N: float = 1) -> Field:
    """Complex white noise under a unit Gaussian window, passed through P_N.

    The window keeps the datum (and, for |t| <= 1, the solution) inside the
    radial range of the probe; P_N makes it exactly frequency-localised.
    """
    vals = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    window = np.exp(-sum(x**2 for x in grid.coordinates()) / 2)
    return littlewood_paley(Field(grid, vals * window, SPACE), N)


def probe_bound(cfg: dict, seed: int) -> dict:
    """Empirical ratios ||P_1 e^{-it|D|^a} u0|| / ||u0|| and N-rescaling residuals.

    The norm is L^q_t L^p_r L^2_omega. For each scale N the first draw is
    dilated to frequency ~N and propagated on the correspondingly rescaled
    grid, time window and shells; the residual is
    |LHS_N / (N^s LHS_1) - 1|.
    """
    n, a = int(cfg["n"]), float(parse_number(cfg["a"]))
    q, p = parse_number(cfg["q"]), parse_number(cfg["p"])
    c = knapp.check_pair((q, p), n, a)
    s = float(c.s)
    grid = Grid(n, int(cfg["M"]), float(cfg["L"]))
    params = DispersionParams(n, a)
    sampling = TimeSampling(float(cfg["T"]), int(cfg["n_time"]))
    r_max = float(cfg["r_max"])
    if r_max >= grid.L:
        raise DomainError("r_max must be smaller than the box half-length")
    sg = spherical_grid(n, r_max, int(cfg["n_radial"]), int(cfg["K"]))
    rng = np.random.default_rng(seed)
    qf = float(q)
    pf = float(p)

    ratios = []
    first = None
    for _ in range(int(cfg["samples"])):
        u0 = random_localized_datum(grid, rng)
        lhs = spherically_averaged_norm(u0, params, sampling, sg, qf, pf)
        ratios.append(lhs / u0.l2_norm())
        if first is None:
            first = (u0, lhs)

    residuals = {}
    u0, base = first
    for N in (float(parse_number(x)) for x in _list(cfg["scales"])):
        uN = rescale_field(u0, N)
        sN = TimeSampling(sampling.T / N**a, sampling.n_nodes)
        val = spherically_averaged_norm(uN, params, sN, sg.scaled(1 / N), qf, pf)
        residuals[_fmt(N)] = abs(val / (N**s * base) - 1)
    ratios = np.array(ratios)
    return {
        "config": {k: _plain(v) for k, v in dict(cfg, seed=seed).items()},
        "s": s,
        "ratios": ratios.tolist(),
        "ratio_min": float(ratios.min()),
        "ratio_max": float(ratios.max()),
        "ratio_mean": float(ratios.mean()),
        "rescaling_residuals": residuals,
        "max_rescaling_residual": max(residuals.values()),
    }


def cmd_probe_bound(args) -> int:
    cfg = load_section(args.config, "probe", PROBE_DEFAULTS)
    try:
        report = probe_bound(cfg, args.seed)
    except (ValueError, TypeError, KeyError) as err:
        if isinstance(err, (ParameterError, DomainError)):
            raise
        raise ConfigError(str(err)) from err
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "probe_bound.json", "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
    print(f"s = {report['s']:+.4f}; ratio max {report['ratio_max']:.6g}, "
          f"mean {report['ratio_mean']:.6g} over {len(report['ratios'])} draws")
    print(f"max rescaling residual {report['max_rescaling_residual']:.3g}")
    return EXIT_OK


# propagate-snapshot --------------------------------------------------------

def cmd_propagate_snapshot(args) -> int:
    eps = float(args.eps)
    n, a = args.n, float(args.a)
    config = knapp.KnappConfig(eps, not args.sharp)
    params = DispersionParams(n, a)
    grid = knapp.knapp_grid(eps, n)
    u0 = knapp.knapp_data(config, grid)
    t = float(args.tau) / eps**2
    v = params.group_velocity()
    ut = propagate_comoving(u0, t, params, v)
    half = args.half_width / eps
    if half >= grid.L:
        raise DomainError("half width exceeds the box")
    ax = np.linspace(-half, half, args.n_side)
    mesh = np.meshgrid(ax, ax, indexing="ij")
    pts = np.zeros((ax.size**2, n))
    pts[:, 0] = mesh[0].ravel()
    pts[:, 1] = mesh[1].ravel()
    vals = np.abs(evaluate_at_points(ut, pts))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "snapshot.csv"
    with open(path, "w") as fh:
        for line in _config_lines("snapshot", {
            "n": n, "a": a, "eps": eps, "tau": args.tau, "t": t,
            "mollified": not args.sharp, "half_width": args.half_width, "n_side": args.n_side,
        }, {"frame": "lab coordinates x = x' + v t", "slice": "x_3 = 0" if n == 3 else "full plane"}):
            fh.write(f"# {line}\n")
        fh.write("x1,x2,abs_u\n")
        for (x1, x2), val in zip(pts[:, :2], vals):
            fh.write(f"{x1 + v[0] * t:.17g},{x2:.17g},{val:.17g}\n")
    print(f"wrote {path} ({vals.size} points, max |u| = {vals.max():.6g})")
    return EXIT_OK


# entry point ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="strichartz", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify (n, a, q, p) against the admissible ranges")
    c.add_argument("-n", type=int, required=True)
    c.add_argument("-a", type=_number_arg, default=Fraction(2))
    c.add_argument("-q", type=_number_arg, required=True)
    c.add_argument("-p", type=_number_arg, required=True)
    c.add_argument("--alpha", type=_number_arg)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_classify)

    k = sub.add_parser("knapp-sweep", help="eps sweep of the Knapp example with power-law fits")
    k.add_argument("--config")
    k.add_argument("--out-dir", default=".")
    k.add_argument("--jobs", type=int, default=1)
    k.add_argument("--seed", type=int, default=0)
    k.set_defaults(func=cmd_knapp_sweep)

    b = sub.add_parser("probe-bound", help="statistical probe of the frequency-localised bound")
    b.add_argument("--config")
    b.add_argument("--out-dir", default=".")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--seed", type=int, default=0)
    b.set_defaults(func=cmd_probe_bound)

    s = sub.add_parser("propagate-snapshot", help="dump |u(t, .)| of a Knapp packet on a plane")
    s.add_argument("-n", type=int, default=2)
    s.add_argument("-a", type=_number_arg, default=Fraction(2))
    s.add_argument("--eps", type=_number_arg, default=Fraction(1, 16))
    s.add_argument("--tau", type=float, default=0.05, help="time in units of 1/eps^2")
    s.add_argument("--half-width", type=float, default=2.0, help="window half width in units of 1/eps")
    s.add_argument("--n-side", type=int, default=41)
    s.add_argument("--sharp", action="store_true", help="use the unmollified block")
    s.add_argument("--out-dir", default=".")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_propagate_snapshot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except (ResolutionError, FitError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_RESOLUTION
    except (ClassificationError, DomainError, ParameterError, PreconditionError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
