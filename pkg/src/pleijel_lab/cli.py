"""Command-line entry point ``pleijel-lab``.

Exit status is 0 when every reported check passes, 2 when a bound or verdict
fails and 1 on errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from . import __version__
from .constants import dimensional_constants
from .errors import PleijelLabError
from .harness import (
    REPORT_COLUMNS,
    SweepConfig,
    bound_pipeline,
    bound_table,
    bundled_config,
    classify_all,
    format_table,
    load_config,
    pleijel_sweep,
    report_rows,
    write_table,
    _exclusion,
)
from .nodal import classify, grid_nodal_count, make_partition, separable_function
from .potential import (
    Case,
    a_m_candidates,
    continuous_degree,
    degree_bound,
    effective_min,
    hardy_radius,
    parse_potential,
    turning_radius,
)
from .radial_solver import RadialGrid, eigenfunction, eigenvalues_below
from .spectrum import assemble
from .weyl import singular_ball_fraction, weyl_integral

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _pair(text: str) -> tuple[int, int]:
    a, b = text.split(",")
    return int(a), int(b)


def _grid(args) -> RadialGrid | None:
    if not args.grid:
        return None
    n, r_min, r_max = _floats(args.grid)
    pot = parse_potential(args.potential)
    return RadialGrid(r_min, r_max, int(n), "log" if pot.singular else "uniform")


def _emit(args, columns, rows, meta=None) -> None:
    write_table(format_table(columns, rows, meta, args.format), args.out)


def cmd_constants(args) -> int:
    dc = dimensional_constants(args.dim)
    _emit(args, ("d", "omega_d", "w_d", "lambda_Bd", "gamma_d"),
          [(dc.d, dc.omega_d, dc.w_d, dc.lambda_Bd, dc.gamma_d)])
    return EXIT_OK


def cmd_probe(args) -> int:
    pot = parse_potential(args.potential)
    lam, d = args.lam, args.dim
    p = degree_bound(pot, lam, d)
    printed, inverted = a_m_candidates(pot.c, pot.m)
    meta = {
        "potential": pot.spec(),
        "dim": d,
        "lambda": lam,
        "r_lambda": turning_radius(pot, lam),
        "p_lambda": p,
        "p_continuous": continuous_degree(pot, lam, d),
        "hardy_radius": hardy_radius(pot, lam, d, epsilon=args.epsilon).radius,
        "a_m_printed": printed,
        "a_m_inverted": inverted,
    }
    rows = [(ell, effective_min(pot, ell, d)) for ell in range(1, p + 1)]
    _emit(args, ("ell", "m_ell"), rows, meta)
    return EXIT_OK


def cmd_spectrum_radial(args) -> int:
    pot = parse_potential(args.potential)
    grid = _grid(args)
    lines = eigenvalues_below(pot, args.ell, args.dim, args.cutoff, grid)
    rows = []
    for line in lines:
        f = eigenfunction(pot, args.ell, args.dim, line.n, grid=grid, cutoff=args.cutoff, levels=1)
        rows.append((line.ell, line.n, line.lam, line.multiplicity, f.zero_count))
    _emit(args, ("ell", "n", "lambda", "multiplicity", "zero_count"), rows)
    return EXIT_OK


def cmd_spectrum_table(args) -> int:
    pot = parse_potential(args.potential)
    table = assemble(pot, args.dim, args.cutoff, _grid(args), args.threads)
    if args.json:
        doc = {
            "potential": pot.spec(),
            "dim": args.dim,
            "cutoff": args.cutoff,
            "levels": [
                {
                    "lambda": float(f"{lev.lam:.12g}"),
                    "multiplicity": lev.multiplicity,
                    "N_below": table.counting(lev.lam),
                    "lines": [
                        {"ell": ln.ell, "n": ln.n, "lambda": float(f"{ln.lam:.12g}"),
                         "multiplicity": ln.multiplicity}
                        for ln in lev.lines
                    ],
                }
                for lev in table.levels()
            ],
        }
        write_table(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
        return EXIT_OK
    rows = [(ln.lam, ln.ell, ln.n, ln.multiplicity, table.counting(ln.lam)) for ln in table.lines]
    _emit(args, ("lambda", "ell", "n", "multiplicity", "N_below"), rows,
          {"potential": pot.spec(), "dim": args.dim, "cutoff": args.cutoff, "ell_max": table.ell_max})
    return EXIT_OK


def cmd_weyl(args) -> int:
    pot = parse_potential(args.potential)
    est = weyl_integral(pot, args.dim, args.lam, excluded_ball=args.eps)
    frac = singular_ball_fraction(pot, args.dim, args.lam, args.eps) if args.eps else None
    _emit(args, ("lambda", "W", "method", "ball_fraction"), [(est.lam, est.value, est.method, frac)])
    return EXIT_OK


def _radial_cutoff(pot, ell: int, d: int, n: int) -> float:
    """An energy cutoff with at least n radial eigenvalues below it."""
    cutoff = 4.0 if pot.case is Case.A else -0.25
    for _ in range(40):
        if len(eigenvalues_below(pot, ell, d, cutoff)) >= n:
            return cutoff
        cutoff = 2 * cutoff if pot.case is Case.A else cutoff / 4
    raise PleijelLabError(f"no cutoff found with {n} eigenvalues for ell={ell}")


def cmd_nodal_count(args) -> int:
    pot = parse_potential(args.potential)
    d = args.dim
    cutoff = _radial_cutoff(pot, args.ell, d, args.n)
    table = assemble(pot, d, cutoff, None, args.threads)
    match = [e for e in table.basis() if (e.ell, e.n, e.m) == (args.ell, args.n, args.m)]
    if not match:
        raise PleijelLabError(f"no basis element with ell={args.ell}, n={args.n}, m={args.m}")
    e = match[0]
    radial = eigenfunction(pot, e.ell, d, e.n, cutoff=cutoff, levels=1)
    part = make_partition(pot, d, e.lam, alpha=args.alpha)
    rep = classify(e, part, pot, radial, _exclusion(pot, d, e.lam))
    grid_mu = grid_nodal_count(separable_function(pot, e.ell, e.m, e.n, d, cutoff=cutoff)) \
        if d in (2, 3) else None
    violations = rep.violations()
    if grid_mu is not None and grid_mu != rep.mu_total:
        violations.append(f"grid oracle counted {grid_mu}, closed form {rep.mu_total}")
    joined = lambda xs: ";".join(format(float(x), ".12g") for x in xs)  # noqa: E731
    row = (
        e.lam, e.courant_index, e.ell, e.m, e.n, rep.mu_total, grid_mu, part.nu,
        ";".join(map(str, rep.per_annulus)), ";".join(map(str, rep.crossing)),
        joined(rep.faber_krahn_bound), rep.milnor_bound, rep.riemann_bound, rep.gamma_W,
        " | ".join(violations),
    )
    cols = ("lambda", "courant_index", "ell", "m", "n", "mu", "grid_mu", "nu", "A", "B",
            "faber_krahn", "milnor_bound", "riemann_bound", "gammaW", "violations")
    _emit(args, cols, [row])
    return EXIT_VIOLATION if violations else EXIT_OK


def cmd_nodal_report(args) -> int:
    pot = parse_potential(args.potential)
    reports = classify_all(pot, args.dim, args.cutoff, _grid(args), args.threads, args.alpha)
    rows = report_rows(reports)
    bad = sum(1 for r in reports if r.violations())
    _emit(args, REPORT_COLUMNS, rows,
          {"potential": pot.spec(), "dim": args.dim, "cutoff": args.cutoff, "violating_elements": bad})
    return EXIT_VIOLATION if bad else EXIT_OK


def _sweep_config(args) -> SweepConfig:
    if args.config:
        cfg = load_config(args.config)
    elif args.bundled:
        cfg = bundled_config(args.bundled)
    else:
        kw = {"potential": args.potential, "dim": args.dim, "cutoff": args.cutoff}
        if args.levels:
            kw["level_min"], kw["level_max"] = _pair(args.levels)
        else:
            kw["n_min"], kw["n_max"] = _pair(args.window or "1,100")
        cfg = SweepConfig(**kw)
    over = {}
    if args.seed is not None:
        over["seed"] = args.seed
    if args.oracle_samples is not None:
        over["oracle_samples"] = args.oracle_samples
    if args.threads is not None:
        over["threads"] = args.threads
    if args.grid:
        over["grid"] = tuple(_floats(args.grid))
    return replace(cfg, **over) if over else cfg


def cmd_pleijel(args) -> int:
    cfg = _sweep_config(args)
    res = pleijel_sweep(cfg)
    write_table(res.to_text(args.format if args.format_given else None), args.out or cfg.out)
    ok = res.verdict and not res.oracle_mismatches
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_bounds(args) -> int:
    cfg = SweepConfig(potential=args.potential, dim=args.dim, nu_alpha=args.alpha,
                      threads=args.threads,
                      grid=tuple(_floats(args.grid)) if args.grid else None)
    rows = bound_pipeline(cfg, _floats(args.lam))
    write_table(bound_table(cfg, rows, args.format), args.out)
    return EXIT_VIOLATION if any(r.violated for r in rows) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--potential", default="harmonic",
                        help="harmonic | coulomb | powc:<c>,<m>[,<C>,<s>]")
    common.add_argument("--dim", type=int, default=2)
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--grid", default=None, help="radial grid override n,r_min,r_max")

    parser = _Parser(prog="pleijel-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("constants", parents=[common], help="dimensional constants")
    p.set_defaults(func=cmd_constants)

    pot = sub.add_parser("potential", help="potential diagnostics")
    pot_sub = pot.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = pot_sub.add_parser("probe", parents=[common])
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--epsilon", type=float, default=0.05)
    p.set_defaults(func=cmd_probe)

    spec = sub.add_parser("spectrum", help="radial and assembled spectra")
    spec_sub = spec.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = spec_sub.add_parser("radial", parents=[common])
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--cutoff", type=float, required=True)
    p.set_defaults(func=cmd_spectrum_radial)
    p = spec_sub.add_parser("table", parents=[common])
    p.add_argument("--cutoff", type=float, required=True)
    p.add_argument("--json", action="store_true", help="nest lines under distinct levels")
    p.set_defaults(func=cmd_spectrum_table)

    p = sub.add_parser("weyl", parents=[common], help="phase-space volume W(lambda)")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--eps", type=float, default=None, help="excluded ball radius")
    p.set_defaults(func=cmd_weyl)

    nod = sub.add_parser("nodal", help="nodal counts and classification")
    nod_sub = nod.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = nod_sub.add_parser("count", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--m", type=int, default=None, help="signed azimuthal index (default ell, or 0 in d>=3)")
    p.add_argument("--alpha", type=float, default=None, help="nu(lambda) exponent")
    p.set_defaults(func=cmd_nodal_count)
    p = nod_sub.add_parser("report", parents=[common])
    p.add_argument("--cutoff", type=float, required=True)
    p.add_argument("--alpha", type=float, default=None)
    p.set_defaults(func=cmd_nodal_report)

    p = sub.add_parser("pleijel", parents=[common], help="mu/n sweep and verdict")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--config", default=None, help="JSON sweep configuration")
    src.add_argument("--bundled", choices=("harmonic_d2", "coulomb_d3"), default=None)
    p.add_argument("--cutoff", type=float, default=None)
    p.add_argument("--window", default=None, help="Courant label window n_min,n_max")
    p.add_argument("--levels", default=None, help="distinct level window k_min,k_max")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--oracle-samples", type=int, default=None)
    p.set_defaults(func=cmd_pleijel)

    p = sub.add_parser("bounds", parents=[common], help="bound pipeline over energies")
    p.add_argument("--lambda", dest="lam", required=True, help="comma-separated energies")
    p.add_argument("--alpha", type=float, default=None)
    p.set_defaults(func=cmd_bounds)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    args.format_given = args.format is not None
    if args.format is None:
        args.format = "csv"
    if getattr(args, "m", "absent") is None:
        args.m = args.ell if args.dim == 2 else 0
    try:
        return args.func(args)
    except PleijelLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
