"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (lines appear in the
"acceptance criteria" summary section) or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import functools
import io
import math
import time
from contextlib import redirect_stdout

import numpy as np

from pleijel_lab.cli import main as cli_main
from pleijel_lab.constants import pleijel_constant, pleijel_constant_via_weyl, weyl_constant
from pleijel_lab.harness import SweepConfig, bundled_config, classify_all, pleijel_sweep
from pleijel_lab.nodal import grid_nodal_count, make_partition, riemann_bound, separable_count, separable_function
from pleijel_lab.potential import coulomb, degree_bound, harmonic
from pleijel_lab.radial_solver import eigenvalues_below
from pleijel_lab.spectrum import assemble
from pleijel_lab.weyl import model_constant, weyl_integral

GAMMA2_REF = 0.6916602


@functools.lru_cache(maxsize=None)
def _harmonic_table(d: int, cutoff: float):
    return assemble(harmonic(), d, cutoff)


@functools.lru_cache(maxsize=None)
def _coulomb_table(cutoff: float):
    return assemble(coulomb(), 3, cutoff)


def _line(k: int, ok: bool, detail: str, elapsed: float) -> str:
    return f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}  [{elapsed:.1f}s]"


def _timed(k: int, limit: float):
    """Run a check returning (ok, detail), enforce its time budget and format the line."""

    def wrap(check):
        @functools.wraps(check)
        def run() -> tuple[bool, str]:
            t0 = time.perf_counter()
            ok, detail = check()
            elapsed = time.perf_counter() - t0
            if elapsed > limit:
                ok, detail = False, f"{detail}; over the {limit:g}s budget"
            return ok, _line(k, ok, detail, elapsed)

        return run

    return wrap


@_timed(1, 1.0)
def criterion_1() -> tuple[bool, str]:
    gammas = [pleijel_constant(d) for d in range(2, 9)]
    worst = max(
        abs(pleijel_constant(d) - pleijel_constant_via_weyl(d)) / pleijel_constant(d) for d in range(2, 9)
    )
    ok_ident = worst <= 1e-10
    ok_ref = abs(gammas[0] - GAMMA2_REF) < 5e-7
    ok_order = all(g < 1 for g in gammas) and all(a > b for a, b in zip(gammas, gammas[1:]))
    detail = f"max rel diff {worst:.2e}, gamma(2)={gammas[0]:.7f}, decreasing={ok_order}"
    return ok_ident and ok_ref and ok_order, detail


@_timed(2, 30.0)
def criterion_2() -> tuple[bool, str]:
    parts, ok = [], True
    for d in (2, 3):
        levels = _harmonic_table(d, 200.0 + d + 1.0).levels()[:100]
        exact = np.array([2 * k + d for k in range(100)], dtype=float)
        got = np.array([lev.lam for lev in levels])
        err = float(np.max(np.abs(got - exact) / exact)) if len(got) == 100 else math.inf
        mult = [lev.multiplicity for lev in levels]
        want = [k + 1 if d == 2 else (k + 1) * (k + 2) // 2 for k in range(100)]
        ok &= err <= 1e-6 and mult == want
        parts.append(f"d={d} rel err {err:.1e} multiplicities {'ok' if mult == want else 'WRONG'}")
    return ok, "; ".join(parts)


@_timed(3, 30.0)
def criterion_3() -> tuple[bool, str]:
    pot, worst, missing = coulomb(), 0.0, 0
    for ell in range(5):
        lines = eigenvalues_below(pot, ell, 3, -0.008)
        for n in range(1, 6 - ell):
            exact = -1.0 / (4 * (n + ell) ** 2)
            if len(lines) < n:
                missing += 1
                continue
            worst = max(worst, abs(lines[n - 1].lam - exact) / abs(exact))
    return worst <= 1e-3 and missing == 0, f"max rel err {worst:.2e} over n+ell<=5, missing {missing}"


@_timed(4, 60.0)
def criterion_4() -> tuple[bool, str]:
    n_h = _harmonic_table(2, 100.0).counting(100.0)
    w_h = weyl_integral(harmonic(), 2, 100.0).value
    ok_h = n_h == 1225 and abs(w_h - 1250) < 1e-6 and 0.9 <= n_h / w_h <= 1.1
    const = weyl_constant(3) * model_constant(3, -1.0)
    ok_c = abs(const * 24 - 1) <= 1e-8
    lam = -1.0 / 144
    n_c = _coulomb_table(lam).counting(lam)
    w_c = weyl_integral(coulomb(), 3, lam).value
    ok_nw = 0.85 <= n_c / w_c <= 1.15
    detail = (
        f"harmonic N(100)={n_h} W={w_h:.6g} N/W={n_h / w_h:.4f}; "
        f"coulomb w_3 e_3={const:.12f} (1/24 {'ok' if ok_c else 'off'}); "
        f"N(-1/144)={n_c} W={w_c:.6g} N/W={n_c / w_c:.4f} (window [0.85, 1.15])"
    )
    return ok_h and ok_c and ok_nw, detail


def _oracle_cases(d: int):
    for ell in range(6):
        ms = [0] if ell == 0 else ([ell, -ell] if d == 2 else list(range(-ell, ell + 1)))
        for m in ms:
            for n in range(1, 6):
                yield ell, m, n


@_timed(5, 300.0)
def criterion_5() -> tuple[bool, str]:
    pot, total, bad = harmonic(), 0, []
    for d in (2, 3):
        for ell, m, n in _oracle_cases(d):
            cutoff = 4 * (n - 1) + 2 * ell + d + 1.0
            fn = separable_function(pot, ell, m, n, d, cutoff=cutoff)
            total += 1
            closed, grid = separable_count(ell, m, n, d), grid_nodal_count(fn)
            if closed != grid:
                bad.append((d, ell, m, n, closed, grid))
    return not bad, f"{total - len(bad)}/{total} cases equal" + (f", mismatches {bad[:5]}" if bad else "")


@_timed(6, 600.0)
def criterion_6() -> tuple[bool, str]:
    parts, ok = [], True
    for label, pot, d, cutoff in (("harmonic d=2", harmonic(), 2, 100.0), ("coulomb d=3", coulomb(), 3, -0.006)):
        reports = classify_all(pot, d, cutoff)
        bad = [r for r in reports if r.violations()]
        ok &= not bad and bool(reports)
        parts.append(f"{label}: {len(reports)} elements, {len(bad)} violating")
    return ok, "; ".join(parts)


@_timed(7, 60.0)
def criterion_7() -> tuple[bool, str]:
    pot, nus, ok, parts = harmonic(), (10, 40, 160), True, []
    gamma = pleijel_constant(2)
    for lam in (100.0, 200.0, 400.0):
        gw = gamma * weyl_integral(pot, 2, lam).value
        bounds = [riemann_bound(pot, 2, lam, make_partition(pot, 2, lam, nu=nu)) for nu in nus]
        ratios = [b.value / gw for b in bounds]
        majorants = [b.majorant / gw for b in bounds]
        envelope = all(r <= 1 + 10 / nu for r, nu in zip(ratios, nus))
        gaps = [abs(r - 1) for r in ratios]
        shrinking = all(a > b for a, b in zip(gaps, gaps[1:])) and all(
            a > b for a, b in zip(majorants, majorants[1:])
        )
        ok &= envelope and shrinking
        parts.append(f"lam={lam:g} ratios {'/'.join(f'{r:.4f}' for r in ratios)}")
    return ok, "; ".join(parts)


@_timed(8, 60.0)
def criterion_8() -> tuple[bool, str]:
    ok, parts = True, []
    for pot, d, table in (
        (harmonic(), 2, _harmonic_table(2, 100.0)),
        (coulomb(), 3, _coulomb_table(-0.006)),
    ):
        over = [ln for ln in table.lines if ln.ell > degree_bound(pot, ln.lam, d)]
        ok &= not over
        parts.append(f"{pot.name}: {len(over)} lines above p_lambda")
    for pot, d, lams in (
        (harmonic(), 2, np.geomspace(50, 500, 40)),
        (coulomb(), 3, -np.geomspace(1 / 16, 1 / 400, 40)),
    ):
        e = (pot.m + 2) / (2 * pot.m)
        scaled = [degree_bound(pot, lam, d) * abs(lam) ** (-e) for lam in lams]
        spread = max(scaled) / min(scaled)
        ok &= spread <= 2.0
        parts.append(f"{pot.name} spread {spread:.3f}")
    return ok, "; ".join(parts)


@_timed(9, 600.0)
def criterion_9() -> tuple[bool, str]:
    h = pleijel_sweep(bundled_config("harmonic_d2"))
    c = pleijel_sweep(bundled_config("coulomb_d3"))
    g2, g3 = pleijel_constant(2), pleijel_constant(3)
    h_max = h.max_ratio
    c_max = c.max_ratio_in_levels(5, 8)
    ok_h = 0.40 <= h_max <= 0.55 and h_max < g2
    ok_c = c_max < g3
    best = h.argmax
    detail = (
        f"harmonic max mu/n={h_max:.6f} at n={best.n} (window [0.40, 0.55], gamma(2)={g2:.4f}); "
        f"coulomb shells 5-8 max={c_max:.6f} (gamma(3)={g3:.4f})"
    )
    return ok_h and ok_c, detail


def _cli_bytes(argv: list[str]) -> bytes:
    buf = io.StringIO()
    with redirect_stdout(buf):
        cli_main(argv)
    return buf.getvalue().encode()


@_timed(10, 60.0)
def criterion_10() -> tuple[bool, str]:
    cfg = SweepConfig(potential="harmonic", dim=2, n_min=1, n_max=80, oracle_samples=4, seed=11)
    a, b = pleijel_sweep(cfg).to_text(), pleijel_sweep(cfg).to_text()
    argv = ["pleijel", "--bundled", "coulomb_d3", "--seed", "3", "--oracle-samples", "2"]
    c1, c2 = _cli_bytes(argv), _cli_bytes(argv)
    ok = a.encode() == b.encode() and c1 == c2 and len(a) > 0 and len(c1) > 0
    return ok, f"api {len(a)} bytes identical={a == b}; cli {len(c1)} bytes identical={c1 == c2}"


CRITERIA = [
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
    criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
]


def _check(criterion, record) -> None:
    ok, line = criterion()
    record(line)
    print(line)
    assert ok, line


def test_constants_identity(record):
    _check(criterion_1, record)


def test_harmonic_spectrum_accuracy(record):
    _check(criterion_2, record)


def test_hydrogen_spectrum_accuracy(record):
    _check(criterion_3, record)


def test_weyl_law(record):
    _check(criterion_4, record)


def test_closed_form_matches_grid_oracle(record):
    _check(criterion_5, record)


def test_bound_suite_has_no_violations(record):
    _check(criterion_6, record)


def test_riemann_sum_convergence(record):
    _check(criterion_7, record)


def test_degree_bound(record):
    _check(criterion_8, record)


def test_pleijel_verdict(record):
    _check(criterion_9, record)


def test_determinism(record):
    _check(criterion_10, record)


if __name__ == "__main__":
    failed = 0
    for criterion in CRITERIA:
        ok, line = criterion()
        print(line, flush=True)
        failed += not ok
    raise SystemExit(1 if failed else 0)
