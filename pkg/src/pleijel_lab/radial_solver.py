"""Eigenpairs of the reduced radial operators.

For each angular momentum ell the radial problem

    -(r^{d-1} f')' + (ell(ell+d-2) r^{d-3} + r^{d-1} v) f = lam r^{d-1} f

is discretised by cell-centred finite volumes on a mesh whose first cell is
[0, r_min]. Cell masses are the exact integrals of r^{d-1}, no flux crosses
the origin (regular solution) and f vanishes on the outer face r_max. Scaling
by the square root of the masses gives a symmetric tridiagonal matrix whose
eigenvector is the reduced function u = r^{(d-1)/2} f sampled with the cell
measure, and whose eigenvalues are located by Sturm-count bisection.

The scheme is second order; eigenvalues are Richardson-extrapolated over
successive grid doublings (three grids by default).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import quad
from scipy.linalg import solve_banded

from . import _kernels
from .constants import sh_multiplicity
from .errors import ConfigurationError, InternalError
from .potential import Case, RadialPotential, turning_radius

__all__ = [
    "RadialEigenfunction",
    "RadialGrid",
    "SpectralLine",
    "default_grid",
    "eigenfunction",
    "eigenvalues_below",
    "reduced_coefficient",
]

DEGENERACY_GAP = 1e-9
# eigenvalues within EDGE_RTOL * max(1, |lam|) of each other are numerically equal
EDGE_RTOL = 1e-7
# WKB decay exponent the default case-A grid must cover beyond the turning point
_DECAY_TARGET = 20.0


@dataclass(frozen=True)
class RadialGrid:
    """Finite-volume mesh on [0, r_max].

    Cell faces are 0, then ``n_points`` faces from ``r_min`` to ``r_max``
    spaced uniformly or geometrically, giving ``n_points`` cells.
    """

    r_min: float
    r_max: float
    n_points: int
    spacing: str = "uniform"

    def __post_init__(self) -> None:
        if not 0 < self.r_min < self.r_max:
            raise ConfigurationError(f"need 0 < r_min < r_max, got {self.r_min}, {self.r_max}")
        if self.n_points < 100:
            raise ConfigurationError(f"need at least 100 grid points, got {self.n_points}")
        if self.spacing not in ("uniform", "log"):
            raise ConfigurationError(f"unknown spacing {self.spacing!r}")

    @classmethod
    def uniform(cls, r_max: float, n_points: int) -> RadialGrid:
        return cls(r_max / n_points, r_max, n_points, "uniform")

    def faces(self) -> np.ndarray:
        if self.spacing == "uniform":
            inner = np.linspace(self.r_min, self.r_max, self.n_points)
        else:
            inner = np.geomspace(self.r_min, self.r_max, self.n_points)
        return np.concatenate(([0.0], inner))

    def centers(self) -> np.ndarray:
        f = self.faces()
        c = np.empty(self.n_points)
        c[0] = 0.5 * f[1]
        if self.spacing == "uniform":
            c[1:] = 0.5 * (f[1:-1] + f[2:])
        else:
            c[1:] = np.sqrt(f[1:-1] * f[2:])
        return c

    def refined(self) -> RadialGrid:
        """Grid with twice as many cells and the same outer radius."""
        r_min = self.r_min / 2 if self.spacing == "uniform" else self.r_min
        return replace(self, r_min=r_min, n_points=2 * self.n_points)


@dataclass(frozen=True)
class SpectralLine:
    ell: int
    n: int
    lam: float
    multiplicity: int


@dataclass(frozen=True)
class RadialEigenfunction:
    ell: int
    n: int
    lam: float
    grid: RadialGrid
    r: np.ndarray
    values: np.ndarray
    weights: np.ndarray
    zero_count: int
    dim: int
    degenerate: bool = False

    def zeros(self) -> np.ndarray:
        """Radii of the interior sign changes, linearly interpolated."""
        idx = _sign_change_indices(self.values)
        r, f = self.r, self.values
        return np.array([r[i] - f[i] * (r[j] - r[i]) / (f[j] - f[i]) for i, j in idx])

    def __call__(self, rr) -> np.ndarray:
        return np.interp(rr, self.r, self.values, right=0.0)


def reduced_coefficient(ell: int, d: int) -> float:
    """Centrifugal coefficient (ell + (d-1)/2)(ell + (d-1)/2 - 1) of the reduced operator."""
    a = ell + (d - 1) / 2
    return a * (a - 1)


def default_grid(pot: RadialPotential, cutoff: float, n_points: int | None = None) -> RadialGrid:
    """Grid wide enough that the region beyond r_max is forbidden at ``cutoff``."""
    if pot.case is Case.A:
        r_max = max(
            1.5 * turning_radius(pot, max(2.0 * cutoff, cutoff + 1.0)),
            _decay_radius(pot, cutoff),
        )
        n = n_points or 4000
        if pot.singular:
            return RadialGrid(1e-5 * r_max, r_max, n, "log")
        return RadialGrid.uniform(r_max, n)
    if not cutoff < 0:
        raise ConfigurationError("case B cutoffs must be negative")
    r_t = turning_radius(pot, cutoff)
    r_max = 3.0 * r_t + 15.0 / math.sqrt(-cutoff)
    return RadialGrid(1e-4, r_max, n_points or 6000, "log")


def _decay_radius(pot: RadialPotential, cutoff: float) -> float:
    """Radius where int_{r_t}^{r} sqrt(v - cutoff) dr first reaches the decay target."""
    r_t = turning_radius(pot, cutoff)

    def kappa(r):
        return math.sqrt(max(float(pot(r)) - cutoff, 0.0))

    r, total = r_t, 0.0
    while total < _DECAY_TARGET:
        step = 0.25 * r_t + 0.5
        total += quad(kappa, r, r + step)[0]
        r += step
    return r


def _check_grid(pot: RadialPotential, cutoff: float, grid: RadialGrid) -> None:
    edge = float(pot(grid.r_max))
    need = max(2.0 * cutoff, cutoff + 1.0) if pot.case is Case.A else 0.5 * cutoff
    if edge < need:
        raise ConfigurationError(
            f"r_max={grid.r_max:g} is not deep enough in the forbidden region for cutoff {cutoff}"
        )


def _discretize(pot: RadialPotential, ell: int, d: int, grid: RadialGrid):
    faces = grid.faces()
    r = grid.centers()
    mass = (faces[1:] ** d - faces[:-1] ** d) / d
    flux = faces[1:-1] ** (d - 1) / (r[1:] - r[:-1])
    a = np.zeros_like(r)
    a[:-1] += flux
    a[1:] += flux
    a[-1] += faces[-1] ** (d - 1) / (faces[-1] - r[-1])
    a += (ell * (ell + d - 2) / r**2 + pot(r)) * mass
    s = 1.0 / np.sqrt(mass)
    return a * s * s, -flux * s[:-1] * s[1:], mass, r


def _tolerance(pot: RadialPotential) -> float:
    return 1e-10 if pot.case is Case.A else 1e-12


def _ladder(pot, ell, d, grid, n_eig, levels):
    """Eigenvalues on ``levels`` successively doubled grids, shape (levels, n_eig)."""
    atol = _tolerance(pot)
    out = np.empty((levels, n_eig))
    guesses = np.empty(0)
    g = grid
    for lev in range(levels):
        diag, off, _, _ = _discretize(pot, ell, d, g)
        lo, hi = _kernels.gershgorin(diag, off)
        out[lev] = _kernels.eigenvalues_by_index(
            diag, off * off, n_eig, lo, hi, guesses, 0.02, atol
        )
        guesses = out[lev]
        g = g.refined()
    return out


def _richardson(ladder: np.ndarray) -> np.ndarray:
    # successive elimination of h^2, h^4, ... error terms
    table = ladder.copy()
    for j in range(1, table.shape[0]):
        factor = 4.0**j
        table = (factor * table[1:] - table[:-1]) / (factor - 1)
    return table[-1]


def _count_below(pot, ell, d, grid, cutoff) -> int:
    diag, off, _, _ = _discretize(pot, ell, d, grid)
    return _kernels.sturm_count(diag, off * off, cutoff)


def eigenvalues_below(
    pot: RadialPotential,
    ell: int,
    d: int,
    cutoff: float,
    grid: RadialGrid | None = None,
    levels: int = 3,
) -> list[SpectralLine]:
    """Radial eigenvalues lam_{1,ell} < lam_{2,ell} < ... below ``cutoff``.

    Parameters
    ----------
    pot : RadialPotential
    ell : int
        Angular momentum; each line carries the multiplicity of the degree-ell
        spherical harmonics on S^{d-1}.
    d : int
        Space dimension.
    cutoff : float
        Energy ceiling (negative in case B).
    grid : RadialGrid, optional
        Base mesh; defaults to :func:`default_grid`.
    levels : int
        Number of grids in the Richardson ladder (1 disables extrapolation).

    Raises
    ------
    ConfigurationError
        If r_max is not far enough into the forbidden region at ``cutoff``.
    """
    if pot.case is Case.B and not cutoff < 0:
        raise ConfigurationError("case B cutoffs must be negative")
    grid = grid or default_grid(pot, cutoff)
    _check_grid(pot, cutoff, grid)
    n_eig = _count_below(pot, ell, d, grid, cutoff)
    g = grid
    for _ in range(levels - 1):
        g = g.refined()
    n_eig = max(n_eig, _count_below(pot, ell, d, g, cutoff))
    if n_eig == 0:
        return []
    lams = _richardson(_ladder(pot, ell, d, grid, n_eig, levels))
    mult = sh_multiplicity(ell, d)
    edge = cutoff - EDGE_RTOL * max(1.0, abs(cutoff))
    return [
        SpectralLine(ell, k + 1, float(lam), mult) for k, lam in enumerate(lams) if lam < edge
    ]


def _sign_change_indices(values: np.ndarray, rel_floor: float = 1e-10) -> list[tuple[int, int]]:
    keep = np.nonzero(np.abs(values) > rel_floor * np.max(np.abs(values)))[0]
    s = np.sign(values[keep])
    flips = np.nonzero(s[1:] != s[:-1])[0]
    return [(int(keep[i]), int(keep[i + 1])) for i in flips]


def eigenfunction(
    pot: RadialPotential,
    ell: int,
    d: int,
    n: int,
    grid: RadialGrid | None = None,
    cutoff: float | None = None,
    levels: int = 3,
) -> RadialEigenfunction:
    """n-th radial eigenfunction f_{n,ell}, normalised in L^2(r^{d-1} dr).

    The vector comes from inverse iteration on the base grid; the reported
    eigenvalue is the extrapolated one. Sign is fixed so that f is positive
    next to the origin.
    """
    if n < 1:
        raise ConfigurationError("radial index n starts at 1")
    if grid is None:
        if cutoff is None:
            raise ConfigurationError("eigenfunction needs a grid or a cutoff")
        grid = default_grid(pot, cutoff)
    diag, off, mass, r = _discretize(pot, ell, d, grid)
    ladder = _ladder(pot, ell, d, grid, n + 1, levels)
    lam_grid = ladder[0, n - 1]
    lam = float(_richardson(ladder)[n - 1])
    degenerate = abs(ladder[0, n] - lam_grid) < DEGENERACY_GAP
    if n >= 2:
        degenerate |= abs(ladder[0, n - 2] - lam_grid) < DEGENERACY_GAP

    shift = lam_grid + 1e-12 * max(1.0, abs(lam_grid))
    ab = np.zeros((3, diag.size))
    ab[0, 1:] = off
    ab[1] = diag - shift
    ab[2, :-1] = off
    y = np.ones(diag.size)
    for _ in range(3):
        y = solve_banded((1, 1), ab, y)
        y /= np.linalg.norm(y)

    f = y / np.sqrt(mass)
    lead = np.nonzero(np.abs(y) > 1e-8 * np.max(np.abs(y)))[0][0]
    if f[lead] < 0:
        f = -f
    f /= math.sqrt(float(np.sum(f * f * mass)))

    zero_count = len(_sign_change_indices(f * np.sqrt(mass)))
    if zero_count != n - 1:
        raise InternalError(
            f"oscillation check failed: f_{{{n},{ell}}} has {zero_count} sign changes"
        )
    return RadialEigenfunction(
        ell=ell, n=n, lam=lam, grid=grid, r=r, values=f, weights=mass,
        zero_count=zero_count, dim=d, degenerate=bool(degenerate),
    )
