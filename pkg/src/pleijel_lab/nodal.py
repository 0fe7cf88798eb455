"""Nodal domains of separable eigenfunctions f_{n,ell}(r) Y_{ell,m}(omega).

Two independent counts are provided. The closed form multiplies the n radial
sign intervals of f by the sign cells of the real spherical harmonic. The
grid oracle samples the product on a polar (d=2) or spherical (d=3) cell
grid and labels same-sign components with union-find, joining cells across
the origin or the polar axis only where the function is nonzero there.

The annulus machinery splits the classically allowed ball B(0, r_lam) into nu
shells of equal volume and sorts every nodal domain into "inside shell i" or
"meets sphere j", together with the volume and sphere-trace bounds that cap
each class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre as npleg
from scipy.special import eval_gegenbauer, lpmv

from . import _kernels
from .constants import ball_volume, dimensional_constants, pleijel_constant
from .errors import ClassificationError, ConfigurationError, ResolutionError
from .potential import Case, RadialPotential, degree_bound, hardy_radius, turning_radius
from .radial_solver import RadialEigenfunction, RadialGrid, eigenfunction
from .spectrum import BasisElement
from .weyl import weyl_integral

__all__ = [
    "AnnulusPartition",
    "DomainLabelling",
    "InnerRegionBounds",
    "NodalReport",
    "RiemannBound",
    "SeparableEigenfunction",
    "angular_cell_measures",
    "classify",
    "grid_nodal_count",
    "inner_region_bounds",
    "label_domains",
    "make_partition",
    "milnor_sphere_bound",
    "nu_exponent_window",
    "riemann_bound",
    "separable_count",
    "separable_function",
    "sphere_cell_count",
    "zonal_count",
]

_SIGN_FLOOR = 1e-10


def _check_angular(ell: int, m: int, d: int) -> None:
    if ell < 0 or abs(m) > ell:
        raise ConfigurationError(f"need 0 <= |m| <= ell, got ell={ell}, m={m}")
    if d == 2 and ell > 0 and abs(m) != ell:
        raise ConfigurationError(f"in d=2 the harmonics of degree {ell} have m = +-{ell}")
    if d >= 4 and m != 0:
        raise ConfigurationError("only zonal harmonics (m=0) are supported for d >= 4")


def _legendre_band_edges(ell: int, m: int) -> np.ndarray:
    """Zeros in x = cos(theta) of P_ell^{|m|}, with the endpoints -1 and 1."""
    k = abs(m)
    if ell - k == 0:
        return np.array([-1.0, 1.0])
    coef = npleg.legder(np.eye(ell + 1)[ell], k)
    roots = np.sort(np.real(npleg.legroots(coef)))
    return np.concatenate(([-1.0], roots, [1.0]))


def angular_cell_measures(ell: int, m: int, d: int) -> np.ndarray:
    """Surface measures of the sign cells of the real harmonic Y_{ell,m} on S^{d-1}."""
    _check_angular(ell, m, d)
    if d == 2:
        if ell == 0:
            return np.array([2 * math.pi])
        return np.full(2 * ell, math.pi / ell)
    if d == 3:
        bands = np.diff(_legendre_band_edges(ell, m))
        if m == 0:
            return 2 * math.pi * bands
        return np.tile(bands * math.pi / abs(m), 2 * abs(m))
    raise ConfigurationError("closed-form cell geometry is available for d in {2, 3}")


def sphere_cell_count(ell: int, m: int, d: int) -> int:
    _check_angular(ell, m, d)
    if ell == 0:
        return 1
    if d == 2:
        return 2 * ell
    if d == 3:
        k = abs(m)
        return ell + 1 if k == 0 else 2 * k * (ell - k + 1)
    raise ConfigurationError("closed-form counts are available for d in {2, 3}; use zonal_count")


def separable_count(ell: int, m: int, n: int, d: int) -> int:
    """Nodal domains of f_{n,ell} Y_{ell,m}: n radial intervals times the sphere cells.

    ``m`` is the signed azimuthal index (cos for m > 0, sin for m < 0).
    """
    if n < 1:
        raise ConfigurationError("radial index n starts at 1")
    return n * sphere_cell_count(ell, m, d)


def zonal_count(ell: int, n: int, d: int, samples: int = 20001) -> int:
    """Nodal domains of f_{n,ell} times the zonal harmonic in any d >= 2.

    The latitude factor is the Gegenbauer polynomial C_ell^{(d-2)/2}(cos theta);
    its bands are counted from sign changes on a fine theta grid.
    """
    if d == 2:
        return separable_count(ell, ell, n, 2)
    theta = (np.arange(samples) + 0.5) * math.pi / samples
    y = eval_gegenbauer(ell, (d - 2) / 2, np.cos(theta))
    s = np.sign(y[np.abs(y) > _SIGN_FLOOR * np.max(np.abs(y))])
    return n * (int(np.count_nonzero(s[1:] != s[:-1])) + 1)


def milnor_sphere_bound(k: int, d: int) -> int:
    """Cap 2^{2d-1} k^{d-1} on the nodal domains of a degree-k polynomial on S^{d-1}."""
    if k < 1:
        raise ConfigurationError("polynomial degree must be >= 1")
    return 2 ** (2 * d - 1) * k ** (d - 1)


@dataclass(frozen=True)
class SeparableEigenfunction:
    radial: RadialEigenfunction
    m: int

    def __post_init__(self) -> None:
        _check_angular(self.radial.ell, self.m, self.radial.dim)

    @property
    def ell(self) -> int:
        return self.radial.ell

    @property
    def n(self) -> int:
        return self.radial.n

    @property
    def dim(self) -> int:
        return self.radial.dim

    def azimuthal(self, phi):
        if self.m > 0:
            return np.cos(self.m * phi)
        if self.m < 0:
            return np.sin(-self.m * phi)
        return np.ones_like(phi)

    def latitudinal(self, theta):
        if self.dim == 3:
            return lpmv(abs(self.m), self.ell, np.cos(theta))
        return eval_gegenbauer(self.ell, (self.dim - 2) / 2, np.cos(theta))

    def __call__(self, r, theta, phi=None):
        """Value at polar (d=2) or spherical (d>=3, phi ignored if zonal) coordinates."""
        f = self.radial(r)
        if self.dim == 2:
            return f * self.azimuthal(theta)
        ang = self.latitudinal(theta)
        if phi is not None:
            ang = ang * self.azimuthal(phi)
        return f * ang


def separable_function(
    pot: RadialPotential,
    ell: int,
    m: int,
    n: int,
    d: int,
    cutoff: float | None = None,
    grid: RadialGrid | None = None,
) -> SeparableEigenfunction:
    """Sample f_{n,ell} on the base grid (no extrapolation) and attach Y_{ell,m}."""
    radial = eigenfunction(pot, ell, d, n, grid=grid, cutoff=cutoff, levels=1)
    return SeparableEigenfunction(radial, m)


def _signs(x: np.ndarray) -> np.ndarray:
    floor = _SIGN_FLOOR * np.max(np.abs(x))
    return np.where(np.abs(x) > floor, np.sign(x), 0).astype(np.int8)


@dataclass(frozen=True)
class DomainLabelling:
    count: int
    labels: np.ndarray
    volumes: np.ndarray
    r_samples: np.ndarray
    resolution: tuple[int, ...]


def default_resolution(d: int) -> tuple[int, ...]:
    # the d=3 start is well below 256 x 512-per-pi to keep memory bounded
    return (256, 1024) if d == 2 else (64, 64, 128)


def label_domains(
    fn: SeparableEigenfunction,
    resolution: tuple[int, ...] | None = None,
    exclusion_radius: float | None = None,
) -> DomainLabelling:
    """Label the same-sign components of ``fn`` on one product grid.

    Cells inside ``exclusion_radius`` take the sign of the first cell outside
    it on the same ray, which attaches them to the adjacent domain.
    """
    d = fn.dim
    if d not in (2, 3):
        raise ConfigurationError("grid labelling supports d in {2, 3}")
    res = resolution or default_resolution(d)
    nr = res[0]
    rad = fn.radial
    big = np.nonzero(np.abs(rad.values) > _SIGN_FLOOR * np.max(np.abs(rad.values)))[0]
    idx = np.unique(np.linspace(0, big[-1], nr).round().astype(int))
    r = rad.r[idx]
    sign_r = _signs(rad.values[idx])

    edges = np.empty(r.size + 1)
    edges[0] = 0.0
    edges[1:-1] = 0.5 * (r[1:] + r[:-1])
    edges[-1] = r[-1] + 0.5 * (r[-1] - r[-2])
    shell = np.diff(edges**d) / d

    cut = 0
    if exclusion_radius:
        cut = min(int(np.searchsorted(r, exclusion_radius)), r.size - 1)
        sign_r[:cut] = sign_r[cut]

    if d == 2:
        na = res[1]
        theta = (np.arange(na) + 0.5) * 2 * math.pi / na
        sign_a = _signs(fn.azimuthal(theta) if fn.m else np.ones(na))
        sign = sign_r[:, None] * sign_a[None, :]
        origin = np.zeros(r.size, dtype=np.int8)
        if fn.ell == 0:
            origin[0] = sign_r[0]
        labels, count = _kernels.label_sign_grid(sign, True, origin, origin)
        cell_vol = shell[:, None] * np.full(na, 2 * math.pi / na)[None, :]
    else:
        nt, nphi = res[1], res[2]
        theta_edges = np.linspace(0.0, math.pi, nt + 1)
        theta = 0.5 * (theta_edges[1:] + theta_edges[:-1])
        phi = (np.arange(nphi) + 0.5) * 2 * math.pi / nphi
        sign_t = _signs(fn.latitudinal(theta))
        sign_p = _signs(fn.azimuthal(phi))
        sign = sign_r[:, None, None] * sign_t[None, :, None] * sign_p[None, None, :]
        if fn.m == 0:
            north = sign_r.copy()
            south = (sign_r * (-1) ** fn.ell).astype(np.int8)
        else:
            north = south = np.zeros(r.size, dtype=np.int8)
        labels, count = _kernels.label_sign_grid(sign.astype(np.int8), True, north, south)
        band = -np.diff(np.cos(theta_edges))
        cell_vol = shell[:, None, None] * band[None, :, None] * (2 * math.pi / nphi)
        cell_vol = np.broadcast_to(cell_vol, sign.shape)

    flat = labels.ravel()
    keep = flat >= 0
    volumes = np.bincount(flat[keep], weights=np.asarray(cell_vol).ravel()[keep], minlength=count)
    return DomainLabelling(int(count), labels, volumes, r, tuple(res))


def grid_nodal_count(
    fn: SeparableEigenfunction,
    resolution: tuple[int, ...] | None = None,
    exclusion_radius: float | None = None,
    max_doublings: int = 3,
) -> int:
    """Union-find nodal count, refined until two successive resolutions agree.

    Raises
    ------
    ResolutionError
        If the count still changes after ``max_doublings`` doublings.
    """
    res = tuple(resolution or default_resolution(fn.dim))
    counts = [label_domains(fn, res, exclusion_radius).count]
    for _ in range(max_doublings):
        res = tuple(2 * k for k in res)
        counts.append(label_domains(fn, res, exclusion_radius).count)
        if counts[-1] == counts[-2]:
            return counts[-1]
    raise ResolutionError(f"grid count did not settle: {counts}")


@dataclass(frozen=True)
class AnnulusPartition:
    """Shells D_i = {rho_{i-1} < r < rho_i} of equal volume covering B(0, r_lam)."""

    lam: float
    nu: int
    dim: int
    r_lambda: float
    boundaries: tuple[float, ...]
    alpha: float | None = None

    @property
    def shell_volume(self) -> float:
        return ball_volume(self.dim) * self.r_lambda**self.dim / self.nu

    def volume(self, i: int) -> float:
        """|D_i| from the radii, for 1 <= i <= nu."""
        b = self.boundaries
        return ball_volume(self.dim) * (b[i] ** self.dim - b[i - 1] ** self.dim)


def nu_exponent_window(pot: RadialPotential, d: int) -> tuple[float, float]:
    """Open interval of exponents alpha for which nu = ceil(|lam|^alpha) is admissible.

    Case A needs nu -> inf, nu^{-1/d} r_lam -> inf and nu lam^{-(m+2)/(2m)} -> 0
    as lam -> inf; case B needs the same three limits as lam -> 0-.
    """
    m = pot.m
    e1, e2 = (m + 2) / (2 * m), d / m
    if pot.case is Case.A:
        return 0.0, min(e1, e2)
    return max(e1, e2), 0.0


def _admissibility(pot: RadialPotential, d: int, alpha: float) -> None:
    m = pot.m
    e1, e2 = (m + 2) / (2 * m), d / m
    if pot.case is Case.A:
        checks = [
            (alpha > 0, "nu(lam) -> inf needs alpha > 0"),
            (alpha < e2, f"nu^(-1/d) r_lam -> inf needs alpha < d/m = {e2:g}"),
            (alpha < e1, f"nu lam^(-(m+2)/(2m)) -> 0 needs alpha < (m+2)/(2m) = {e1:g}"),
        ]
    else:
        checks = [
            (alpha < 0, "nu(lam) -> inf as lam -> 0- needs alpha < 0"),
            (alpha > e2, f"nu^(-1/d) r_lam -> inf needs alpha > d/m = {e2:g}"),
            (alpha > e1, f"nu |lam|^(-(m+2)/(2m)) -> 0 needs alpha > (m+2)/(2m) = {e1:g}"),
        ]
    for ok, message in checks:
        if not ok:
            raise ConfigurationError(f"alpha={alpha:g} violates: {message}")


def make_partition(
    pot: RadialPotential,
    d: int,
    lam: float,
    alpha: float | None = None,
    nu: int | None = None,
) -> AnnulusPartition:
    """Equal-volume shells rho_i = (i/nu)^{1/d} r_lam with nu = ceil(|lam|^alpha).

    The default alpha is the midpoint of the admissible window. An explicit
    ``nu`` bypasses the exponent rule (useful at fixed energy).
    """
    r_lam = turning_radius(pot, lam)
    if nu is None:
        if alpha is None:
            lo, hi = nu_exponent_window(pot, d)
            alpha = 0.5 * (lo + hi)
        _admissibility(pot, d, alpha)
        # round away float noise such as 1000**(1/3) = 9.999999999999998
        nu = max(1, math.ceil(round(abs(lam) ** alpha, 9)))
    elif nu < 1:
        raise ConfigurationError("nu must be >= 1")
    bounds = tuple(float((i / nu) ** (1.0 / d) * r_lam) for i in range(nu + 1))
    return AnnulusPartition(float(lam), int(nu), d, float(r_lam), bounds, alpha)


@dataclass(frozen=True)
class RiemannBound:
    lam: float
    nu: int
    value: float
    majorant: float
    gamma_W: float
    weyl: float


def _fk_denominator(d: int) -> float:
    dc = dimensional_constants(d)
    return dc.omega_d * dc.lambda_Bd ** (d / 2)


def riemann_bound(pot: RadialPotential, d: int, lam: float, partition: AnnulusPartition) -> RiemannBound:
    """Sum over i >= 2 of the per-shell Faber-Krahn caps, and its integral majorant.

    The majorant is |D_2| (lam - min(v(rho_1), 0))^{d/2} / (omega_d lambda(B_d)^{d/2})
    + gamma(d) W(lam); when v(rho_1) >= 0 the first term is |D_2| lam^{d/2} / (...).
    """
    return _riemann_cached(pot, d, float(lam), partition)


@lru_cache(maxsize=256)
def _riemann_cached(pot, d, lam, partition) -> RiemannBound:
    denom = _fk_denominator(d)
    rho = partition.boundaries
    total = 0.0
    for i in range(2, partition.nu + 1):
        gap = lam - float(pot(rho[i - 1]))
        total += partition.volume(i) * max(gap, 0.0) ** (d / 2)
    value = total / denom
    W = weyl_integral(pot, d, lam).value
    gamma_W = pleijel_constant(d) * W
    if partition.nu >= 2:
        head = lam - min(float(pot(rho[1])), 0.0)
        majorant = partition.volume(2) * head ** (d / 2) / denom + gamma_W
    else:
        majorant = gamma_W
    return RiemannBound(lam, partition.nu, value, majorant, gamma_W, W)


@dataclass(frozen=True)
class InnerRegionBounds:
    """Caps for the inner ball split into D_11 = (r_in, C) and D_12 = (C, rho_1)."""

    active: bool
    lam: float
    C_split: float
    r_inner: float
    r_outer: float
    mu_10_bound: int
    mu_11_bound: int
    A11_bound: float
    A12_bound: float


def _shell(d: int, a: float, b: float) -> float:
    return ball_volume(d) * max(b**d - a**d, 0.0)


@lru_cache(maxsize=1024)
def _degree_bound_cached(pot, lam, d) -> int:
    return degree_bound(pot, lam, d)


def inner_region_bounds(
    pot: RadialPotential,
    d: int,
    lam: float,
    C_split: float | None = None,
    partition: AnnulusPartition | None = None,
) -> InnerRegionBounds:
    """Bounds on nodal domains near a singular origin.

    Case A: D_11 = (lam^{-1/2}/C, C), where V >= -lam, so every domain there
    has volume at least omega_d lambda(B_d)^{d/2} (2 lam)^{-d/2}. Case B:
    D_11 = (r_d, C) with r_d the exclusion radius, and the shell cap uses
    lam - v(r_d). D_12 = (C, rho_1) uses lam - v(C) in both cases. Crossings
    of the two inner spheres are capped by the sphere bound at degree p_lam.
    Without a singularity the split is reported inactive.
    """
    partition = partition or make_partition(pot, d, lam)
    rho_1 = partition.boundaries[1]
    C = 2.0 * pot.R_0 if C_split is None else C_split
    if C < pot.R_0:
        raise ConfigurationError(f"C_split={C:g} lies below the monotonicity onset R_0={pot.R_0:g}")
    if not pot.singular:
        return InnerRegionBounds(False, lam, C, 0.0, rho_1, 0, 0, 0.0, 0.0)
    denom = _fk_denominator(d)
    milnor = milnor_sphere_bound(_degree_bound_cached(pot, lam, d), d)
    if pot.case is Case.A:
        r_in = lam**-0.5 / C
        a11 = _shell(d, r_in, C) * (2 * lam) ** (d / 2) / denom
    else:
        r_in = float(hardy_radius(pot, lam, d).radius)
        a11 = _shell(d, r_in, C) * max(lam - float(pot(r_in)), 0.0) ** (d / 2) / denom
    a12 = _shell(d, C, rho_1) * max(lam - float(pot(C)), 0.0) ** (d / 2) / denom
    return InnerRegionBounds(True, lam, C, r_in, rho_1, milnor, milnor, a11, a12)


@dataclass(frozen=True)
class NodalReport:
    """Classification of the nodal domains of one basis element.

    ``per_annulus[i-1]`` counts domains strictly inside D_i; ``crossing[j-1]``
    counts domains meeting the sphere r = rho_j; ``sphere_trace[j-1]`` counts
    components of the restriction to that sphere. Shell-indexed bounds carry
    ``inf`` (caps) or 0 (volume floors) for i = 1, where no cap applies.
    """

    element: BasisElement
    mu_total: int
    per_annulus: tuple[int, ...]
    crossing: tuple[int, ...]
    crossing_domains: int
    sphere_trace: tuple[int, ...]
    faber_krahn_bound: tuple[float, ...]
    min_domain_volume: tuple[float, ...]
    volume_floor: tuple[float, ...]
    milnor_bound: int
    milnor_ell: int
    riemann_bound: float
    gamma_W: float
    hardy_ok: bool = True
    notes: tuple[str, ...] = field(default=())

    @property
    def mu_over_n(self) -> float:
        return self.mu_total / self.element.courant_index

    def violations(self) -> list[str]:
        """Every bound the report fails, as readable strings (empty when all hold)."""
        out = []
        n = self.element.courant_index
        if self.mu_total > n:
            out.append(f"courant: mu={self.mu_total} > n={n}")
        for i, (a, cap) in enumerate(zip(self.per_annulus, self.faber_krahn_bound), start=1):
            if i >= 2 and a > cap * (1 + 1e-9):
                out.append(f"faber-krahn: A_{i}={a} > {cap:.6g}")
        for i, (vol, floor) in enumerate(zip(self.min_domain_volume, self.volume_floor), start=1):
            if i >= 2 and not math.isnan(vol) and vol < floor * (1 - 1e-9):
                out.append(f"volume: domain in D_{i} has |Omega|={vol:.6g} < {floor:.6g}")
        for j, t in enumerate(self.sphere_trace, start=1):
            if t > self.milnor_ell:
                out.append(f"milnor: trace on sphere {j} has {t} > {self.milnor_ell} components")
        if self.milnor_ell > self.milnor_bound:
            out.append(f"milnor: degree-ell cap {self.milnor_ell} exceeds degree-p cap {self.milnor_bound}")
        if sum(self.per_annulus[1:]) > self.riemann_bound * (1 + 1e-9):
            out.append(f"riemann: sum A_i={sum(self.per_annulus[1:])} > {self.riemann_bound:.6g}")
        return out


def classify(
    element: BasisElement,
    partition: AnnulusPartition,
    pot: RadialPotential,
    radial: RadialEigenfunction,
    exclusion_radius: float | None = None,
) -> NodalReport:
    """Assign each nodal domain to the shell containing it or to the spheres it meets.

    For a separable element every domain is (radial sign interval) x (sphere
    cell), so membership follows from the radial zeros alone.

    Raises
    ------
    ClassificationError
        If a domain lies wholly outside B(0, r_lam) or the counts do not add up.
    """
    d = element.dim
    m = element.m
    if m is None:
        raise ConfigurationError("classification needs a named angular index (d in {2, 3})")
    if (radial.ell, radial.n) != (element.ell, element.n):
        raise ConfigurationError("radial function does not match the element")
    cells = angular_cell_measures(element.ell, m, d)
    s = cells.size
    nu = partition.nu
    rho = partition.boundaries
    lam = partition.lam

    zeros = radial.zeros()
    a_edges = np.concatenate(([0.0], zeros))
    b_edges = np.concatenate((zeros, [math.inf]))

    per_annulus = [0] * nu
    crossing = [0] * nu
    min_vol = [math.nan] * nu
    crossing_intervals = 0
    for a, b in zip(a_edges, b_edges):
        if a >= partition.r_lambda:
            raise ClassificationError(
                f"domain with r in ({a:.6g}, {b:.6g}) lies outside r_lam={partition.r_lambda:.6g}"
            )
        hits = [j for j in range(1, nu + 1) if a < rho[j] < b]
        if hits:
            crossing_intervals += 1
            for j in hits:
                crossing[j - 1] += s
            continue
        i = next(i for i in range(1, nu + 1) if rho[i - 1] <= a and b <= rho[i])
        per_annulus[i - 1] += s
        vol = (b**d - a**d) / d * float(cells.min())
        min_vol[i - 1] = vol if math.isnan(min_vol[i - 1]) else min(min_vol[i - 1], vol)

    mu_total = element.n * s
    crossing_domains = crossing_intervals * s
    if sum(per_annulus) + crossing_domains != mu_total:
        raise ClassificationError("shell and sphere counts do not add up to the nodal count")

    denom = _fk_denominator(d)
    dc = dimensional_constants(d)
    fk = [math.inf]
    floor = [0.0]
    for i in range(2, nu + 1):
        gap = lam - float(pot(rho[i - 1]))
        fk.append(partition.volume(i) * gap ** (d / 2) / denom)
        floor.append(dc.omega_d * dc.lambda_Bd ** (d / 2) / gap ** (d / 2))

    rb = riemann_bound(pot, d, lam, partition)
    p_lam = _degree_bound_cached(pot, lam, d)
    hardy_ok = True
    if exclusion_radius is not None and zeros.size:
        hardy_ok = bool(zeros[0] > exclusion_radius)
    return NodalReport(
        element=element,
        mu_total=mu_total,
        per_annulus=tuple(per_annulus),
        crossing=tuple(crossing),
        crossing_domains=crossing_domains,
        sphere_trace=tuple([s] * nu),
        faber_krahn_bound=tuple(fk),
        min_domain_volume=tuple(min_vol),
        volume_floor=tuple(floor),
        milnor_bound=milnor_sphere_bound(p_lam, d),
        milnor_ell=milnor_sphere_bound(max(element.ell, 1), d),
        riemann_bound=rb.value,
        gamma_W=rb.gamma_W,
        hardy_ok=hardy_ok,
    )
