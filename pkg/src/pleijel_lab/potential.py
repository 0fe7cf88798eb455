"""Radial potentials, turning radii, effective-potential minima and exclusion radii.

A potential is v(r) = sign * c * r^m - C * r^{-s}, where sign is +1 for a
confining tail (case "A", m > 1) and -1 for a decaying tail (case "B",
-2 < m < 0). The harmonic oscillator is case A with (c, m) = (1, 2) and the
Coulomb potential -1/r is case B with (c, m) = (1, -1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ConsistencyError, DomainError, InternalError

__all__ = [
    "Case",
    "HardyRadius",
    "RadialPotential",
    "a_m_candidates",
    "continuous_degree",
    "coulomb",
    "degree_bound",
    "effective_min",
    "hardy_radius",
    "harmonic",
    "model_effective_min",
    "parse_potential",
    "power_potential",
    "turning_radius",
]

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class Case(str, Enum):
    A = "A"
    B = "B"


@dataclass(frozen=True)
class RadialPotential:
    case: Case
    m: float
    c: float
    sing_C: float = 0.0
    sing_s: float = 1.0
    name: str = "custom"
    R_0: float = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "case", Case(self.case))
        if not self.c > 0:
            raise DomainError(f"tail coefficient c must be positive, got {self.c}")
        if self.case is Case.A and not self.m > 1:
            raise DomainError(f"case A needs m > 1, got m={self.m}")
        if self.case is Case.B and not -2 < self.m < 0:
            raise DomainError(f"case B needs -2 < m < 0, got m={self.m}")
        if self.sing_C < 0:
            raise DomainError("singularity strength must be nonnegative")
        if self.sing_C > 0 and not 0 < self.sing_s < 2:
            raise DomainError(f"singularity exponent must lie in (0, 2), got {self.sing_s}")
        object.__setattr__(self, "R_0", _monotonicity_onset(self))

    @property
    def sign(self) -> float:
        return 1.0 if self.case is Case.A else -1.0

    @property
    def singular(self) -> bool:
        """True when v is unbounded below at the origin."""
        return self.sing_C > 0 or self.case is Case.B

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise DomainError("potential is evaluated only for r > 0")
        out = self.sign * self.c * r**self.m
        if self.sing_C > 0:
            out = out - self.sing_C * r ** (-self.sing_s)
        return out if out.ndim else float(out)

    eval = __call__

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        out = self.sign * self.c * self.m * r ** (self.m - 1)
        if self.sing_C > 0:
            out = out + self.sing_C * self.sing_s * r ** (-self.sing_s - 1)
        return out if out.ndim else float(out)

    @property
    def inf_value(self) -> float:
        """Infimum of v over (0, inf)."""
        if self.singular:
            return -math.inf
        return 0.0

    @property
    def lambda_0(self) -> float:
        """Default threshold above which case-A energies count as large."""
        return float(self(2.0 * self.R_0))

    def spec(self) -> str:
        if self.name in ("harmonic", "coulomb"):
            return self.name
        s = f"powc:{self.c:g},{self.m:g}"
        if self.sing_C > 0:
            s += f",{self.sing_C:g},{self.sing_s:g}"
        return s


def _monotonicity_onset(pot: RadialPotential) -> float:
    # largest zero of v' plus 1%; v' > 0 everywhere falls back to r = 1
    r = np.geomspace(1e-8, 1e8, 4001)
    dv = pot.derivative(r)
    bad = np.nonzero(dv <= 0)[0]
    if bad.size == 0:
        return 1.0
    i = bad[-1]
    if i == r.size - 1:
        raise DomainError("v is not eventually increasing")
    lo, hi = r[i], r[i + 1]
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if pot.derivative(mid) <= 0:
            lo = mid
        else:
            hi = mid
    return 1.01 * hi


def power_potential(c: float, m: float, sing_C: float = 0.0, sing_s: float = 1.0) -> RadialPotential:
    case = Case.A if m > 0 else Case.B
    return RadialPotential(case=case, m=m, c=c, sing_C=sing_C, sing_s=sing_s)


def harmonic() -> RadialPotential:
    return RadialPotential(Case.A, m=2.0, c=1.0, name="harmonic")


def coulomb() -> RadialPotential:
    return RadialPotential(Case.B, m=-1.0, c=1.0, name="coulomb")


def parse_potential(text: str) -> RadialPotential:
    """Parse ``harmonic``, ``coulomb`` or ``powc:<c>,<m>[,<C>,<s>]``."""
    text = text.strip()
    if text == "harmonic":
        return harmonic()
    if text == "coulomb":
        return coulomb()
    if text.startswith("powc:"):
        parts = [float(p) for p in text[5:].split(",")]
        if len(parts) == 2:
            return power_potential(parts[0], parts[1])
        if len(parts) == 4:
            return power_potential(parts[0], parts[1], parts[2], parts[3])
    raise DomainError(f"unrecognised potential spec {text!r}")


def _check_energy(pot: RadialPotential, lam: float) -> None:
    if not lam > pot.inf_value:
        raise DomainError(f"energy {lam} is not above inf v = {pot.inf_value}")
    if pot.case is Case.B and not lam < 0:
        raise DomainError(f"case B energies must be negative, got {lam}")


def turning_radius(pot: RadialPotential, lam: float) -> float:
    """Largest r with v(r) = lam, the edge of the classically allowed region."""
    _check_energy(pot, lam)
    r0 = pot.R_0
    if pot(r0) < lam:
        lo, hi = r0, 2.0 * r0
        while pot(hi) <= lam:
            lo, hi = hi, 2.0 * hi
            if hi > 1e300:
                raise DomainError(f"no turning point for energy {lam}")
    else:
        grid = np.geomspace(1e-12 * r0, r0, 2000)
        below = np.nonzero(pot(grid) < lam)[0]
        if below.size == 0:
            raise DomainError(f"energy {lam} below the sampled potential")
        i = below[-1]
        lo, hi = grid[i], grid[i + 1]
    while hi - lo > 1e-12 * hi:
        mid = 0.5 * (lo + hi)
        if pot(mid) < lam:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _golden_min_log(f, a: float, b: float, rtol: float = 1e-12) -> tuple[float, float]:
    # golden-section in u = log r
    ua, ub = math.log(a), math.log(b)
    u1 = ub - _INV_GOLDEN * (ub - ua)
    u2 = ua + _INV_GOLDEN * (ub - ua)
    f1, f2 = f(math.exp(u1)), f(math.exp(u2))
    while ub - ua > rtol:
        if f1 < f2:
            ub, u2, f2 = u2, u1, f1
            u1 = ub - _INV_GOLDEN * (ub - ua)
            f1 = f(math.exp(u1))
        else:
            ua, u1, f1 = u1, u2, f2
            u2 = ua + _INV_GOLDEN * (ub - ua)
            f2 = f(math.exp(u2))
    r = math.exp(0.5 * (ua + ub))
    return r, f(r)


def _effective_min_L(pot: RadialPotential, L: float) -> float:
    def g(r):
        return pot(r) + L / r**2

    lo_exp, hi_exp = -6.0, 6.0
    for _ in range(6):
        grid = np.logspace(lo_exp, hi_exp, 64)
        vals = g(grid)
        i = int(np.argmin(vals))
        if i == 0:
            lo_exp -= 3.0
        elif i == grid.size - 1:
            hi_exp += 3.0
        else:
            return _golden_min_log(g, grid[i - 1], grid[i + 1])[1]
    raise InternalError(f"could not bracket the effective-potential minimum (L={L})")


def effective_min(pot: RadialPotential, ell: int, d: int) -> float:
    """m_ell = inf_r v(r) + ell(ell+d-2)/r^2."""
    if ell < 1:
        raise DomainError(f"effective_min needs ell >= 1, got {ell}")
    return _effective_min_L(pot, ell * (ell + d - 2))


def model_effective_min(c: float, m: float, L: float) -> float:
    """Closed-form m_ell for a pure tail, sign(m)*c*r^m + L/r^2.

    For c = 1 this reproduces the published displays; for general c the
    factor multiplying the power of L is c(m+2)/2.
    """
    if m > 0:
        return (2.0 / (c * m)) ** (m / (m + 2)) * c * (m + 2) / 2 * L ** (m / (m + 2))
    return -((2.0 / (-c * m)) ** (m / (m + 2))) * c * (m + 2) / 2 * L ** (m / (m + 2))


def degree_bound(pot: RadialPotential, lam: float, d: int, max_ell: int = 1_000_000) -> int:
    """Smallest p >= 1 with m_p >= lam.

    Every angular momentum with an eigenvalue at energy ``lam`` has m_ell < lam
    and hence ell < p. Strict growth of ell -> m_ell is checked while stepping.
    """
    _check_energy(pot, lam)
    prev = effective_min(pot, 1, d)
    if prev >= lam:
        return 1
    for ell in range(2, max_ell + 1):
        cur = effective_min(pot, ell, d)
        if not cur > prev:
            raise ConsistencyError(f"m_ell not strictly increasing at ell={ell}")
        if cur >= lam:
            return ell
        prev = cur
    raise InternalError(f"degree bound exceeds {max_ell}")


def continuous_degree(pot: RadialPotential, lam: float, d: int) -> float:
    """Real solution of m(p) = lam, treating ell as continuous (p >= 1)."""
    _check_energy(pot, lam)

    def m_of(p):
        return _effective_min_L(pot, p * (p + d - 2))

    if m_of(1.0) >= lam:
        return 1.0
    lo, hi = 1.0, 2.0
    while m_of(hi) < lam:
        lo, hi = hi, 2.0 * hi
    while hi - lo > 1e-10 * hi:
        mid = 0.5 * (lo + hi)
        if m_of(mid) < lam:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def a_m_candidates(c: float, m: float) -> tuple[float, float]:
    """Two readings of the constant in p ~ a_m |lam|^{(m+2)/(2m)}.

    Returns (printed, inverted): the printed form raises the (cm+2)/2 factor
    to -2m/(m+2); inverting the model minimum gives -(m+2)/(2m) instead.
    Case B uses -m in place of m and drops c, as in the model displays.
    """
    if m > 0:
        base, fac = 2.0 / (c * m), (c * m + 2) / 2
    else:
        base, fac = 2.0 / (-m), (m + 2) / 2
    printed = base**-0.5 * fac ** (-2 * m / (m + 2))
    inverted = base**-0.5 * fac ** (-(m + 2) / (2 * m))
    return printed, inverted


@dataclass(frozen=True)
class HardyRadius:
    d: int
    lam: float
    radius: float
    epsilon: float = 0.0


def _first_nonpositive(g, r_lo: float, r_hi: float, n: int = 4000) -> float:
    grid = np.geomspace(r_lo, r_hi, n)
    vals = g(grid)
    if vals[0] <= 0:
        raise DomainError("exclusion condition fails arbitrarily close to the origin")
    bad = np.nonzero(vals <= 0)[0]
    if bad.size == 0:
        return r_hi
    i = bad[0]
    lo, hi = grid[i - 1], grid[i]
    while hi - lo > 1e-13 * hi:
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    return float(lo)


def _log_hardy_ok(pot: RadialPotential, R: float) -> bool:
    def g(r):
        return pot(r) + 1.0 / (4 * r**2 * np.log(r / (2 * R)) ** 2)

    r = np.geomspace(1e-12 * R, R * (1 - 1e-9), 2000)
    vals = g(r)
    if np.any(vals <= 0):
        return False
    i = int(np.argmin(vals))
    if 0 < i < r.size - 1:
        return _golden_min_log(g, r[i - 1], r[i + 1])[1] > 0
    return True


def hardy_radius(
    pot: RadialPotential, lam: float, d: int, epsilon: float = 0.05, c_V: float = 1.0
) -> HardyRadius:
    """Radius of a ball around the origin that holds no whole nodal domain.

    Case B, d >= 3: largest r* with v + (d-2)^2/(4r^2) > 0 on (0, r*).
    Case B, d = 2: largest R with v + 1/(4 r^2 ln^2(r/2R)) > 0 on (0, R); the
    condition weakens as R shrinks, so R is found by bisection.
    Case A, d >= 3: largest r* with (d-2)^2/(4r^2) + v - lam > 0 on (0, r*).
    Case A, d = 2: r* = c_V * lam^{-1/2-epsilon}.
    Case-B radii are capped at the turning radius.
    """
    _check_energy(pot, lam)
    if d < 2:
        raise DomainError("dimension must be >= 2")
    cap = turning_radius(pot, lam)
    if pot.case is Case.B:
        if d >= 3:
            k = (d - 2) ** 2 / 4.0

            def g(r):
                return pot(r) + k / r**2

            return HardyRadius(d, lam, _first_nonpositive(g, 1e-12, cap), 0.0)
        if _log_hardy_ok(pot, cap):
            return HardyRadius(d, lam, cap, 0.0)
        lo, hi = 1e-12, cap
        if not _log_hardy_ok(pot, lo):
            raise DomainError("logarithmic Hardy condition fails near the origin")
        while hi / lo > 1 + 1e-12:
            mid = math.sqrt(lo * hi)
            if _log_hardy_ok(pot, mid):
                lo = mid
            else:
                hi = mid
        return HardyRadius(d, lam, float(lo), 0.0)

    if not lam > 0:
        raise DomainError("case A exclusion radii need a positive energy")
    if d == 2:
        return HardyRadius(d, lam, c_V * lam ** (-0.5 - epsilon), epsilon)
    k = (d - 2) ** 2 / 4.0

    def g(r):
        return k / r**2 + pot(r) - lam

    return HardyRadius(d, lam, _first_nonpositive(g, 1e-12, cap), 0.0)
