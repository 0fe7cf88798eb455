"""Sweeps, bound reports and deterministic table output.

Tables are written as CSV with ``#`` metadata lines (first one the schema tag)
or as JSON with the same columns. Floats are printed with 12 significant
digits and rows are always emitted in a fixed order, so a given configuration
produces byte-identical files.
"""

from __future__ import annotations

import io
import json
import math
import sys
from dataclasses import asdict, dataclass, fields, replace
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import __version__
from .constants import pleijel_constant
from .errors import ConfigurationError
from .nodal import (
    NodalReport,
    classify,
    grid_nodal_count,
    inner_region_bounds,
    make_partition,
    milnor_sphere_bound,
    riemann_bound,
    separable_count,
    separable_function,
)
from .potential import Case, RadialPotential, degree_bound, hardy_radius, parse_potential
from .radial_solver import RadialEigenfunction, RadialGrid, eigenfunction
from .spectrum import SpectrumTable, assemble
from .weyl import weyl_integral

__all__ = [
    "BoundRow",
    "SweepConfig",
    "SweepResult",
    "SweepRow",
    "bound_pipeline",
    "bound_table",
    "bundled_config",
    "classify_all",
    "format_table",
    "load_config",
    "pleijel_sweep",
    "report_rows",
    "write_table",
]

SCHEMA_LINE = f"# pleijel-lab v{__version__} schema=1"


@dataclass(frozen=True)
class SweepConfig:
    """One sweep: a potential, a dimension, an energy cutoff and an index window.

    The window is either a Courant-label range [n_min, n_max] or a range of
    distinct levels [level_min, level_max] (for hydrogen, level k is shell k).
    ``grid`` overrides the radial mesh as (n_points, r_min, r_max).
    """

    potential: str = "harmonic"
    dim: int = 2
    cutoff: float | None = None
    n_min: int | None = None
    n_max: int | None = None
    level_min: int | None = None
    level_max: int | None = None
    grid: tuple[int, float, float] | None = None
    nu_alpha: float | None = None
    lambdas: tuple[float, ...] = ()
    out: str | None = None
    format: str = "csv"
    seed: int = 0
    oracle_samples: int = 0
    threads: int | None = None

    def __post_init__(self) -> None:
        pot = self.pot()
        if self.format not in ("csv", "json"):
            raise ConfigurationError(f"unknown format {self.format!r}")
        if self.n_min is not None and self.n_min < 1:
            raise ConfigurationError("n_min must be >= 1")
        if self.level_min is not None and self.level_min < 1:
            raise ConfigurationError("level_min must be >= 1")
        if self.cutoff is not None:
            if pot.case is Case.B and not self.cutoff < 0:
                raise ConfigurationError("case B cutoffs must be negative")
            if pot.case is Case.A and not self.cutoff > pot.inf_value:
                raise ConfigurationError("cutoff must exceed inf v")
        if self.grid is not None:
            object.__setattr__(self, "grid", tuple(self.grid))
        object.__setattr__(self, "lambdas", tuple(float(x) for x in self.lambdas))

    def pot(self) -> RadialPotential:
        return parse_potential(self.potential)

    def radial_grid(self) -> RadialGrid | None:
        if self.grid is None:
            return None
        n, r_min, r_max = self.grid
        spacing = "log" if self.pot().singular else "uniform"
        return RadialGrid(float(r_min), float(r_max), int(n), spacing)


def load_config(path: str | Path) -> SweepConfig:
    data = json.loads(Path(path).read_text())
    known = {f.name for f in fields(SweepConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    return SweepConfig(**data)


def bundled_config(name: str) -> SweepConfig:
    """One of the configurations shipped with the package (``harmonic_d2``, ``coulomb_d3``)."""
    ref = resources.files("pleijel_lab") / "configs" / f"{name}.json"
    if not ref.is_file():
        raise ConfigurationError(f"no bundled config named {name!r}")
    with resources.as_file(ref) as p:
        return load_config(p)


# ---------------------------------------------------------------- output


def _fmt(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".12g")
    return str(x)


def _json_value(x: Any) -> Any:
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return float(format(x, ".12g")) if math.isfinite(x) else _fmt(x)
    return x


def format_table(
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    meta: dict[str, Any] | None = None,
    fmt: str = "csv",
) -> str:
    meta = meta or {}
    rows = list(rows)
    if fmt == "json":
        doc = {
            "schema": SCHEMA_LINE[2:],
            "meta": {k: _json_value(v) for k, v in meta.items()},
            "columns": list(columns),
            "rows": [[_json_value(v) for v in row] for row in rows],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write(SCHEMA_LINE + "\n")
    for key, value in meta.items():
        buf.write(f"# {key}={_fmt(value)}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def write_table(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# ---------------------------------------------------------------- sweeps


@dataclass(frozen=True)
class SweepRow:
    n: int
    level: int
    lam: float
    ell: int
    m: int
    radial_n: int
    mu: int
    ratio: float
    oracle: int | None = None


SWEEP_COLUMNS = ("n", "level", "lambda", "ell", "m", "radial_n", "mu", "mu_over_n", "grid_mu")


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    rows: tuple[SweepRow, ...]
    gamma: float

    @property
    def max_ratio(self) -> float:
        return max((r.ratio for r in self.rows), default=math.nan)

    @property
    def argmax(self) -> SweepRow | None:
        return max(self.rows, key=lambda r: (r.ratio, -r.n), default=None)

    @property
    def verdict(self) -> bool:
        return bool(self.rows) and self.max_ratio < self.gamma

    @property
    def oracle_mismatches(self) -> list[SweepRow]:
        return [r for r in self.rows if r.oracle is not None and r.oracle != r.mu]

    def max_ratio_in_levels(self, lo: int, hi: int) -> float:
        return max((r.ratio for r in self.rows if lo <= r.level <= hi), default=math.nan)

    def to_text(self, fmt: str | None = None) -> str:
        best = self.argmax
        meta = {
            "potential": self.config.potential,
            "dim": self.config.dim,
            "cutoff": self.config.cutoff,
            "window": _window_text(self.config),
            "seed": self.config.seed,
            "gamma_d": self.gamma,
            "max_mu_over_n": self.max_ratio,
            "argmax_n": best.n if best else None,
            "verdict": "PASS" if self.verdict else "FAIL",
        }
        rows = [
            (r.n, r.level, r.lam, r.ell, r.m, r.radial_n, r.mu, r.ratio, r.oracle) for r in self.rows
        ]
        return format_table(SWEEP_COLUMNS, rows, meta, fmt or self.config.format)


def _window_text(cfg: SweepConfig) -> str:
    if cfg.level_min is not None:
        return f"level:{cfg.level_min}-{cfg.level_max}"
    return f"n:{cfg.n_min}-{cfg.n_max}"


def _auto_cutoff(pot: RadialPotential, d: int, target: int) -> float:
    """Energy whose Weyl volume is ``target``, used when no cutoff is configured."""
    if pot.case is Case.A:
        lo, hi = max(pot.inf_value, 0.0), 1.0
        while weyl_integral(pot, d, hi).value < target:
            lo, hi = hi, 2 * hi
    else:
        lo, hi = -1.0, -0.5
        while weyl_integral(pot, d, lo).value > target:
            lo *= 2
        while weyl_integral(pot, d, hi).value < target:
            lo, hi = hi, hi / 2
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if weyl_integral(pot, d, mid).value < target:
            lo = mid
        else:
            hi = mid
    return hi


def _sweep_table(cfg: SweepConfig) -> tuple[SpectrumTable, float]:
    pot = cfg.pot()
    grid = cfg.radial_grid()
    if cfg.cutoff is not None:
        return assemble(pot, cfg.dim, cfg.cutoff, grid, cfg.threads), cfg.cutoff
    if cfg.n_max is None:
        raise ConfigurationError("a level window needs an explicit cutoff")
    target = 1.2 * cfg.n_max + 10
    for _ in range(6):
        cutoff = _auto_cutoff(pot, cfg.dim, target)
        table = assemble(pot, cfg.dim, cutoff, grid, cfg.threads)
        if table.counting(cutoff) >= cfg.n_max:
            return table, cutoff
        target *= 1.5
    raise ConfigurationError("could not find a cutoff covering the requested window")


def pleijel_sweep(cfg: SweepConfig) -> SweepResult:
    """mu/n for every separable basis element in the configured window.

    ``n`` is the minimal Courant label N(lam) + 1. When ``oracle_samples`` is
    positive, that many rows (drawn with ``seed``) are recounted on the grid.
    """
    d = cfg.dim
    if d not in (2, 3):
        raise ConfigurationError("closed-form nodal counts need d in {2, 3}")
    if (cfg.n_min is None) == (cfg.level_min is None):
        raise ConfigurationError("give exactly one of an n window or a level window")
    table, cutoff = _sweep_table(cfg)
    if cfg.n_min is not None:
        n_max = cfg.n_max if cfg.n_max is not None else table.counting(cutoff)
        if table.counting(cutoff) < n_max:
            raise ConfigurationError(
                f"cutoff {cutoff} covers only {table.counting(cutoff)} states, window needs {n_max}"
            )
    levels = table.levels()
    if cfg.level_min is not None:
        level_max = cfg.level_max if cfg.level_max is not None else len(levels)
        if len(levels) < level_max:
            raise ConfigurationError(f"cutoff {cutoff} covers only {len(levels)} levels")

    level_of = {}
    for k, lev in enumerate(levels, start=1):
        for line in lev.lines:
            level_of[(line.ell, line.n)] = k

    rows = []
    for e in table.basis():
        level = level_of[(e.ell, e.n)]
        if cfg.n_min is not None and not cfg.n_min <= e.courant_index <= n_max:
            continue
        if cfg.level_min is not None and not cfg.level_min <= level <= level_max:
            continue
        mu = separable_count(e.ell, e.m, e.n, d)
        rows.append(SweepRow(e.courant_index, level, e.lam, e.ell, e.m, e.n, mu, mu / e.courant_index))

    if cfg.oracle_samples > 0 and rows:
        rng = np.random.default_rng(cfg.seed)
        picks = sorted(rng.choice(len(rows), size=min(cfg.oracle_samples, len(rows)), replace=False))
        pot = cfg.pot()
        for i in picks:
            r = rows[i]
            fn = separable_function(pot, r.ell, r.m, r.radial_n, d, cutoff=cutoff, grid=cfg.radial_grid())
            rows[i] = replace(r, oracle=grid_nodal_count(fn))
    return SweepResult(cfg, tuple(rows), pleijel_constant(d))


# ---------------------------------------------------------------- nodal reports


def _exclusion(pot: RadialPotential, d: int, lam: float) -> float | None:
    if pot.case is Case.A and lam < pot.lambda_0:
        return None
    return hardy_radius(pot, lam, d).radius


def classify_all(
    pot: RadialPotential,
    d: int,
    cutoff: float,
    grid: RadialGrid | None = None,
    threads: int | None = None,
    alpha: float | None = None,
) -> list[NodalReport]:
    """Classify every separable basis element below ``cutoff`` at its own energy."""
    table = assemble(pot, d, cutoff, grid, threads)
    radial: dict[tuple[int, int], RadialEigenfunction] = {}
    reports = []
    for e in table.basis():
        key = (e.ell, e.n)
        if key not in radial:
            radial[key] = eigenfunction(pot, e.ell, d, e.n, grid=grid, cutoff=cutoff, levels=1)
        part = make_partition(pot, d, e.lam, alpha=alpha)
        reports.append(classify(e, part, pot, radial[key], _exclusion(pot, d, e.lam)))
    return reports


REPORT_COLUMNS = (
    "lambda", "courant_index", "ell", "m", "n", "mu", "mu_over_n", "nu", "A_inner",
    "A_outer_sum", "crossing_domains", "riemann_bound", "milnor_bound", "gammaW",
    "hardy_ok", "violations",
)


def report_rows(reports: Sequence[NodalReport]) -> list[tuple]:
    rows = []
    for r in reports:
        e = r.element
        rows.append((
            e.lam, e.courant_index, e.ell, e.m, e.n, r.mu_total, r.mu_over_n,
            len(r.per_annulus), r.per_annulus[0], sum(r.per_annulus[1:]), r.crossing_domains,
            r.riemann_bound, r.milnor_bound, r.gamma_W, r.hardy_ok, len(r.violations()),
        ))
    return rows


# ---------------------------------------------------------------- bound pipeline


@dataclass(frozen=True)
class BoundRow:
    lam: float
    nu: int
    p_lambda: int
    W: float
    N: int
    gamma_W: float
    riemann: float
    majorant: float
    envelope_ok: bool
    milnor_sum: int
    inner_active: bool
    mu_10: int
    mu_11: int
    A11: float
    A12: float

    @property
    def ratios(self) -> dict[str, float]:
        """The quantities the asymptotic argument needs to vanish, each over W(lam)."""
        return {
            "N_over_W": self.N / self.W,
            "riemann_over_gammaW": self.riemann / self.gamma_W,
            "majorant_over_gammaW": self.majorant / self.gamma_W,
            "milnor_sum_over_W": self.milnor_sum / self.W,
            "mu10_over_W": self.mu_10 / self.W,
            "mu11_over_W": self.mu_11 / self.W,
            "A11_over_W": self.A11 / self.W,
            "A12_over_W": self.A12 / self.W,
        }

    @property
    def violated(self) -> bool:
        return self.riemann > self.majorant * (1 + 1e-9) or not self.envelope_ok


def bound_pipeline(cfg: SweepConfig, lambdas: Sequence[float] | None = None) -> list[BoundRow]:
    """Consolidated bound report at each energy of the sweep.

    N(lam) comes from one spectrum table assembled at the largest energy.
    """
    pot = cfg.pot()
    d = cfg.dim
    lams = sorted(float(x) for x in (lambdas if lambdas is not None else cfg.lambdas))
    if not lams:
        raise ConfigurationError("bound pipeline needs at least one energy")
    for lam in lams:
        if pot.case is Case.A and lam < pot.lambda_0:
            raise ConfigurationError(f"lambda={lam} is below lambda_0={pot.lambda_0:g}")
        if pot.case is Case.B and not lam < 0:
            raise ConfigurationError("case B energies must be negative")
    table = assemble(pot, d, lams[-1], cfg.radial_grid(), cfg.threads)
    rows = []
    for lam in lams:
        part = make_partition(pot, d, lam, alpha=cfg.nu_alpha)
        rb = riemann_bound(pot, d, lam, part)
        p = degree_bound(pot, lam, d)
        inner = inner_region_bounds(pot, d, lam, partition=part)
        rows.append(BoundRow(
            lam=lam,
            nu=part.nu,
            p_lambda=p,
            W=rb.weyl,
            N=table.counting(lam),
            gamma_W=rb.gamma_W,
            riemann=rb.value,
            majorant=rb.majorant,
            envelope_ok=rb.value <= rb.gamma_W * (1 + 10 / part.nu),
            milnor_sum=part.nu * milnor_sphere_bound(p, d),
            inner_active=inner.active,
            mu_10=inner.mu_10_bound,
            mu_11=inner.mu_11_bound,
            A11=inner.A11_bound,
            A12=inner.A12_bound,
        ))
    return rows


def bound_table(cfg: SweepConfig, rows: Sequence[BoundRow], fmt: str | None = None) -> str:
    base = [f.name for f in fields(BoundRow)]
    ratio_names = list(rows[0].ratios) if rows else []
    columns = ["lambda" if c == "lam" else c for c in base] + ratio_names
    body = []
    for r in rows:
        d = asdict(r)
        body.append([d[c] for c in base] + [r.ratios[k] for k in ratio_names])
    meta = {"potential": cfg.potential, "dim": cfg.dim, "gamma_d": pleijel_constant(cfg.dim)}
    return format_table(columns, body, meta, fmt or cfg.format)
