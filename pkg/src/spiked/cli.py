"""Command-line front end: ``spiked <command> [flags]`` writing CSV or JSON tables.

Exit codes: 0 success, 2 validation error, 3 numerical failure.
"""
import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .errors import DomainError, NumericalFailure

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


# ---------------------------------------------------------------- output

def format_number(v):
    """Shortest round-trip decimal; integral floats lose their trailing '.0'."""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if not math.isfinite(v):
        raise NumericalFailure(f"refusing to write non-finite value {v!r}")
    text = repr(v)
    return text[:-2] if text.endswith(".0") else text


def _json_value(v):
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return int(v)
    v = float(v)
    if not math.isfinite(v):
        raise NumericalFailure(f"refusing to write non-finite value {v!r}")
    return v


def emit_table(columns, rows, fmt="csv", path=None):
    """Write ``rows`` (sequences matching ``columns``) as CSV or JSON to ``path`` (stdout if None)."""
    rows = [tuple(r) for r in rows]
    for r in rows:
        if len(r) != len(columns):
            raise ValueError("rows must match the column list")
    if fmt == "csv":
        lines = [",".join(columns)]
        lines += [",".join(format_number(v) for v in r) for r in rows]
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        objs = [{c: _json_value(v) for c, v in zip(columns, r)} for r in rows]
        text = json.dumps(objs, indent=1) + "\n"
    else:
        raise DomainError(f"unknown format {fmt!r}")
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"{path}: {exc.strerror or exc}") from exc


# ---------------------------------------------------------------- parsing helpers

def parse_grid(text, default_spacing="log10"):
    """``start:stop[:log10|lin][:count]`` -> array.

    log10 without a count gives one point per decade; lin defaults to 11 points.
    """
    parts = text.split(":")
    if len(parts) < 2 or len(parts) > 4:
        raise DomainError(f"bad grid {text!r}; expected start:stop[:log10|lin][:count]")
    try:
        start, stop = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise DomainError(f"bad grid bounds in {text!r}") from exc
    spacing = parts[2] if len(parts) > 2 and parts[2] else default_spacing
    count = int(parts[3]) if len(parts) > 3 else None
    if spacing == "log10":
        if not (start > 0 and stop > 0):
            raise DomainError("log10 grids need positive bounds")
        if count is None:
            count = int(round(abs(math.log10(stop / start)))) + 1
        pts = np.logspace(math.log10(start), math.log10(stop), max(count, 1))
        # strip last-ulp noise so 1e-5 prints as 1e-05, not 9.999999999999999e-06
        return np.array([float(f"{v:.14g}") for v in pts])
    if spacing == "lin":
        return np.linspace(start, stop, 11 if count is None else count)
    raise DomainError(f"unknown grid spacing {spacing!r}")


def parse_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise DomainError(f"bad number list {text!r}") from exc


def read_config(path):
    """Flat ``key = value`` file; '#' starts a comment; keys use flag spelling without dashes."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected key = value")
            key, val = (s.strip() for s in line.split("=", 1))
            out[key.lstrip("-")] = val
    return out


# ---------------------------------------------------------------- workers

def _compare_point(args):
    alpha, lam, state, x_max, n = args
    from .harrell import energy_expansion
    from .oscillator import PotentialSpec, RadialGrid, exact_spectrum

    k = (state + 1) // 2
    spec = PotentialSpec(alpha=alpha, lam=lam)
    exact = exact_spectrum(spec, RadialGrid(x_max, n), k, extrapolate=True).eigenvalues[k - 1]
    _, approx = energy_expansion(state, alpha, lam)
    return lam, float(exact), float(approx), float(exact - approx)


def _ordered_map(fn, items, workers):
    # results always come back in input order
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(it) for it in items]


# ---------------------------------------------------------------- commands

def cmd_spectrum(a):
    from .oscillator import PotentialSpec, RadialGrid, exact_spectrum

    spec = PotentialSpec(alpha=a.alpha, lam=a.lam, kappa=a.kappa, l=a.l)
    grid = RadialGrid(a.x_max, a.n)
    res = exact_spectrum(spec, grid, a.k, extrapolate=not a.raw)
    return ["index", "energy"], [(j + 1, e) for j, e in enumerate(res.eigenvalues)]


def cmd_perturb(a):
    from .harrell import energy_expansion

    res, val = energy_expansion(a.state, a.alpha, a.lam, normalization=a.normalization)
    return (["state", "alpha", "lambda", "e0", "coefficient", "exponent", "energy"],
            [(a.state, a.alpha, a.lam, res.e0, res.coefficient, res.exponent, val)])


def cmd_compare(a):
    from .harrell import energy_expansion
    from .oscillator import PotentialSpec

    PotentialSpec(alpha=a.alpha)
    energy_expansion(a.state, a.alpha, 0.0)  # validates alpha >= 4 and the state index
    lams = parse_grid(a.lambda_grid)
    if np.any(lams <= 0):
        raise DomainError("lambda grid must be positive")
    rows = _ordered_map(_compare_point, [(a.alpha, float(v), a.state, a.x_max, a.n) for v in lams],
                        a.workers)
    return ["lambda", "E_exact", "E_expansion", "difference"], rows


def cmd_kernel(a):
    from .green import continuity_gap, jump_measure, make_pair, wronskian_constant_closed_form

    pair = make_pair(a.alpha, a.lam, a.b)
    rows = []
    for xi in parse_list(a.xi):
        rows.append((xi, pair.c_constant, wronskian_constant_closed_form(pair),
                     jump_measure(pair, xi), continuity_gap(pair, xi)))
    return ["xi", "wronskian_constant", "wronskian_closed_form", "jump", "continuity_gap"], rows


def cmd_fredholm(a):
    from . import fredholm as fr
    from .oscillator import PotentialSpec

    spec = PotentialSpec(alpha=a.alpha, lam=a.lam, kappa=a.kappa)
    if a.mode == "b-limit":
        probes = parse_list(a.probes)
        rows, _ = fr.b_limit_study(spec, parse_list(a.b_values), probes=probes, gamma_coef=a.gamma)
        return ["b", "n"] + [f"W({p:g})" for p in probes], rows
    op = fr.build_nystrom(spec, a.b, a.n)
    if a.mode == "characteristic":
        found = fr.characteristic_values(op, a.kappa_min, a.kappa_max)
        return (["kappa_star", "solvability_defect", "sigma_min"],
                [(c.kappa, fr.solvability_defect(op, c.kappa), c.sigma_min) for c in found])
    w = fr.solve_w(op, a.kappa, a.gamma)
    probes = parse_list(a.probes)
    vals = fr.interpolate_w(op, w, probes, a.kappa, a.gamma)
    return ["x", "W"], list(zip(probes, vals))


def cmd_transform(a):
    from . import transforms as tf

    base = tf.TransformSpec(a=a.a, b_coef=a.b, p=a.p, energy=a.E, epsilon=1.0)
    rows = []
    for eps in parse_grid(a.eps_grid):
        s = base.with_epsilon(eps)
        _, z_t = tf.transformed_coefficients(s, a.rho)
        _, z_f = tf.fuchsian_limit_coefficients(s, a.rho)
        first, z_c = tf.first_correction_coefficients(s, a.rho)
        rows.append((eps, tf.f_epsilon(s, a.rho), tf.f_expansion_remainder(s, a.rho),
                     first, z_t, z_f, z_c))
    return ["epsilon", "F", "remainder", "first_order_coef", "zeroth_transformed",
            "zeroth_fuchsian", "zeroth_correction"], rows


def cmd_factorize(a):
    from . import transforms as tf

    fact = tf.FactorizationSpec(mu=a.mu, k_sq=a.k2, l=a.l, a=a.a, p=a.p, branch=a.branch)
    r, av, _ = tf.march_a(fact, a.r0, a.r1, n_out=a.points)
    b = np.asarray(tf.b_of_r(fact, r))
    phi = av * np.exp(b - 0.5 * fact.mu * r * r)
    rc, res = tf.phi_residual_on_grid(fact, r, phi)
    res_full = np.full_like(r, np.nan)
    res_full[2:-2] = res
    rows = [(ri, ai, bi, pi, ei) for ri, ai, bi, pi, ei in zip(r, av, b, phi, res_full)
            if np.isfinite(ei)]
    return ["r", "A", "B", "phi", "relative_residual"], rows


COMMANDS = {
    "spectrum": cmd_spectrum,
    "perturb": cmd_perturb,
    "compare": cmd_compare,
    "kernel": cmd_kernel,
    "fredholm": cmd_fredholm,
    "transform": cmd_transform,
    "factorize": cmd_factorize,
}


def _common(p):
    p.add_argument("--output", default="-", help="output path ('-' for stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--config", help="key = value file; flags override its values")


def build_parser():
    parser = argparse.ArgumentParser(prog="spiked", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="Dirichlet spectrum by finite differences")
    p.add_argument("--alpha", type=float, default=4.0)
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--x-max", type=float, default=12.0)
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--raw", action="store_true", help="skip Richardson extrapolation")

    p = sub.add_parser("perturb", help="leading small-lambda expansion")
    p.add_argument("--alpha", type=float, default=4.0)
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--state", type=int, default=1)
    p.add_argument("--normalization", choices=("half_line", "full_line"), default="half_line")

    p = sub.add_parser("compare", help="exact spectrum against the expansion on a lambda grid")
    p.add_argument("--alpha", type=float, default=4.0)
    p.add_argument("--lambda-grid", default="1e-6:1e-3:log10")
    p.add_argument("--state", type=int, default=1)
    p.add_argument("--x-max", type=float, default=10.0)
    p.add_argument("--n", type=int, default=100000)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("kernel", help="Green-function diagnostics")
    p.add_argument("--alpha", type=float, default=4.0)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--b", type=float, default=10.0)
    p.add_argument("--xi", default="0.6,1,2,5,8")

    p = sub.add_parser("fredholm", help="Nystrom solve, characteristic values or b-limit study")
    p.add_argument("--mode", choices=("solve", "characteristic", "b-limit"), default="solve")
    p.add_argument("--alpha", type=float, default=4.0)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--kappa", type=float, default=0.1)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--b", type=float, default=10.0)
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--probes", default="0.5,1,2")
    p.add_argument("--kappa-min", type=float, default=-1.0)
    p.add_argument("--kappa-max", type=float, default=-0.001)
    p.add_argument("--b-values", default="10,20,40")

    p = sub.add_parser("transform", help="rho = r^gamma expansion table")
    p.add_argument("--E", type=float, default=1.0)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--p", type=float, default=4.0)
    p.add_argument("--rho", type=float, default=2.0)
    p.add_argument("--eps-grid", default="1e-3:1e-1:log10:9")

    p = sub.add_parser("factorize", help="march the A equation and check the reconstructed phi")
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--p", type=float, default=4.0)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--k2", type=float, default=3.0)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--branch", type=int, choices=(1, -1), default=1)
    p.add_argument("--r0", type=float, default=0.5)
    p.add_argument("--r1", type=float, default=6.0)
    p.add_argument("--points", type=int, default=2001)

    for sp in sub.choices.values():
        _common(sp)
    return parser


def _apply_config(parser, argv):
    pre, _ = parser.parse_known_args(argv)
    if not getattr(pre, "config", None):
        return
    sub = parser._subparsers._group_actions[0].choices[pre.command]
    by_flag = {}
    for act in sub._actions:
        for opt in act.option_strings:
            by_flag[opt.lstrip("-")] = act
    defaults = {}
    for key, val in read_config(pre.config).items():
        act = by_flag.get(key) or by_flag.get(key.replace("_", "-"))
        if act is None or act.dest in ("help", "config"):
            raise DomainError(f"unknown config key {key!r}")
        if act.nargs == 0:
            defaults[act.dest] = val.lower() in ("1", "true", "yes", "on")
        else:
            conv = act.type or str
            try:
                defaults[act.dest] = conv(val)
            except ValueError as exc:
                raise DomainError(f"config key {key!r}: bad value {val!r}") from exc
            if act.choices is not None and defaults[act.dest] not in act.choices:
                raise DomainError(f"config key {key!r}: {val!r} not in {list(act.choices)}")
    sub.set_defaults(**defaults)


def run(argv=None):
    """Entry point; returns the process exit code."""
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code else EXIT_OK
    except (DomainError, OSError) as exc:
        print(f"spiked: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        columns, rows = COMMANDS[args.command](args)
        emit_table(columns, rows, args.format, args.output)
    except DomainError as exc:
        print(f"spiked {args.command}: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NumericalFailure, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"spiked {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
