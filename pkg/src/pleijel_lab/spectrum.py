"""Full spectrum of -Delta + V assembled from the radial problems.

Every eigenvalue of the radial operator for angular momentum ell carries the
multiplicity of the degree-ell spherical harmonics. Levels from different ell
that coincide in theory (oscillator and hydrogen shells) only agree to solver
tolerance, so lines within ``CLUSTER_RTOL * max(1, |lam|)`` of each other are
treated as one level for counting and labelling.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .constants import sh_multiplicity
from .errors import ConfigurationError, RangeError
from .potential import Case, RadialPotential, degree_bound
from .radial_solver import EDGE_RTOL, RadialGrid, SpectralLine, eigenvalues_below

__all__ = [
    "BasisElement",
    "Level",
    "SpectrumTable",
    "angular_index",
    "assemble",
    "counting",
    "courant_label",
]

CLUSTER_RTOL = EDGE_RTOL


def cluster_tol(lam: float) -> float:
    return CLUSTER_RTOL * max(1.0, abs(lam))


@dataclass(frozen=True)
class Level:
    """A distinct eigenvalue with its total multiplicity and contributing lines."""

    lam: float
    multiplicity: int
    lines: tuple[SpectralLine, ...]


@dataclass(frozen=True)
class BasisElement:
    """Separable eigenfunction f_{n,ell}(r) Y_{ell,m}(omega).

    ``m_index`` runs over 1..Lambda_{ell,d}; see :func:`angular_index` for the
    real spherical harmonic it selects.
    """

    ell: int
    m_index: int
    n: int
    lam: float
    courant_index: int
    dim: int

    @property
    def m(self) -> int | None:
        return angular_index(self.ell, self.m_index, self.dim)


def angular_index(ell: int, m_index: int, d: int) -> int | None:
    """Signed azimuthal index of the ``m_index``-th real harmonic of degree ell.

    Positive m selects cos(m phi), negative m selects sin(|m| phi). In d=2 the
    two harmonics of degree ell >= 1 are m = +ell, -ell. In d=3 index 1 is the
    zonal m=0, then 2k -> +k and 2k+1 -> -k. In d >= 4 only the zonal harmonic
    (index 1) is named and None is returned otherwise.
    """
    mult = sh_multiplicity(ell, d)
    if not 1 <= m_index <= mult:
        raise ConfigurationError(f"m_index must lie in [1, {mult}] for ell={ell}, d={d}")
    if m_index == 1 and (ell == 0 or d != 2):
        return 0
    if d == 2:
        return ell if m_index == 1 else -ell
    if d == 3:
        k = m_index // 2
        return k if m_index % 2 == 0 else -k
    return None


@dataclass(frozen=True)
class SpectrumTable:
    lines: tuple[SpectralLine, ...]
    cutoff: float
    ell_max: int
    dim: int

    def counting(self, lam: float) -> int:
        return counting(self, lam)

    def levels(self) -> list[Level]:
        out: list[Level] = []
        group: list[SpectralLine] = []
        for line in self.lines:
            if group and line.lam - group[-1].lam > cluster_tol(line.lam):
                out.append(_level(group))
                group = []
            group.append(line)
        if group:
            out.append(_level(group))
        return out

    def basis(self) -> list[BasisElement]:
        """All separable basis elements below the cutoff, in Courant order."""
        out = []
        for line in self.lines:
            label = counting(self, line.lam) + 1
            for k in range(1, line.multiplicity + 1):
                out.append(BasisElement(line.ell, k, line.n, line.lam, label, self.dim))
        out.sort(key=lambda e: (e.courant_index, e.ell, e.n, e.m_index))
        return out


def _level(group: list[SpectralLine]) -> Level:
    mult = sum(g.multiplicity for g in group)
    lam = sum(g.lam * g.multiplicity for g in group) / mult
    return Level(lam, mult, tuple(group))


def assemble(
    pot: RadialPotential,
    d: int,
    cutoff: float,
    grid: RadialGrid | None = None,
    threads: int | None = None,
) -> SpectrumTable:
    """Merge the radial spectra for ell = 0 .. degree_bound(cutoff) + 2.

    Solves for distinct ell run on a thread pool; the merge is ordered, so the
    table does not depend on scheduling.
    """
    if pot.case is Case.B and not cutoff < 0:
        raise ConfigurationError("case B cutoffs must be negative")
    ell_max = degree_bound(pot, cutoff, d) + 2
    ells = range(ell_max + 1)
    workers = threads or min(8, os.cpu_count() or 1)

    def solve(ell: int) -> list[SpectralLine]:
        return eigenvalues_below(pot, ell, d, cutoff, grid)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_ell = list(pool.map(solve, ells))
    else:
        per_ell = [solve(ell) for ell in ells]
    # a line within the cluster tolerance of the cutoff is equal to it, not below it
    edge = cutoff - cluster_tol(cutoff)
    lines = sorted(
        (ln for group in per_ell for ln in group if ln.lam < edge),
        key=lambda s: (s.lam, s.ell, s.n),
    )
    return SpectrumTable(tuple(lines), float(cutoff), ell_max, d)


def counting(table: SpectrumTable, lam: float) -> int:
    """N(lam): eigenvalues strictly below lam, with multiplicity.

    Lines within the cluster tolerance of ``lam`` count as equal to it.
    """
    if lam > table.cutoff + cluster_tol(table.cutoff):
        raise RangeError(f"lambda={lam} lies above the table cutoff {table.cutoff}")
    edge = lam - cluster_tol(lam)
    return sum(line.multiplicity for line in table.lines if line.lam < edge)


def courant_label(table: SpectrumTable, element: BasisElement) -> int:
    """Smallest admissible Courant label N(lam) + 1 of the element's eigenvalue."""
    return counting(table, element.lam) + 1
