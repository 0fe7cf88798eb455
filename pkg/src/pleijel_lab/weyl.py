"""Phase-space volume W(lam) = w_d * integral of (lam - V)_+^{d/2} over R^d.

For a radial V this is w_d * |S^{d-1}| * int_0^{r_lam} (lam - v)^{d/2} r^{d-1} dr.
The integrand vanishes like (r_lam - r)^{d/2} at the turning radius and may
blow up like r^{d-1-sd/2} at the origin, which is integrable because s < 2;
the range is split into geometric panels so each piece is smooth for QUADPACK.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .constants import sphere_area, weyl_constant
from .errors import ConfigurationError, DomainError
from .potential import Case, RadialPotential, power_potential, turning_radius

__all__ = [
    "WeylEstimate",
    "inversion_constant",
    "model_constant",
    "singular_ball_fraction",
    "weyl_closed_form",
    "weyl_exponent",
    "weyl_integral",
]

_PANELS = 24


@dataclass(frozen=True)
class WeylEstimate:
    lam: float
    value: float
    method: str
    excluded_ball: float | None = None


def _radial_integral(pot: RadialPotential, d: int, lam: float, a: float, b: float) -> float:
    if b <= a:
        return 0.0

    def f(r):
        gap = lam - pot(r)
        return gap ** (d / 2) * r ** (d - 1) if gap > 0 else 0.0

    lo = max(a, b * 1e-9)
    edges = np.geomspace(lo, b, _PANELS + 1)
    total = 0.0
    if a < lo:
        total += quad(f, a, lo, epsabs=0.0, epsrel=1e-10, limit=200)[0]
    for x0, x1 in zip(edges[:-1], edges[1:]):
        total += quad(f, x0, x1, epsabs=0.0, epsrel=1e-10, limit=200)[0]
    return total


def _empty_region(pot: RadialPotential, lam: float) -> bool:
    return pot.case is Case.A and not pot.singular and lam <= pot.inf_value


def weyl_integral(
    pot: RadialPotential, d: int, lam: float, excluded_ball: float | None = None
) -> WeylEstimate:
    """W(lam) by quadrature, optionally leaving out the ball of radius ``excluded_ball``."""
    if pot.case is Case.B and not lam < 0:
        raise DomainError(f"case B energies must be negative, got {lam}")
    if excluded_ball is not None and excluded_ball < 0:
        raise DomainError("excluded ball radius must be nonnegative")
    if _empty_region(pot, lam):
        return WeylEstimate(lam, 0.0, "quadrature", excluded_ball)
    r_lam = turning_radius(pot, lam)
    eps = excluded_ball or 0.0
    integral = _radial_integral(pot, d, lam, eps, r_lam)
    return WeylEstimate(lam, weyl_constant(d) * sphere_area(d) * integral, "quadrature", excluded_ball)


def weyl_exponent(d: int, m: float) -> float:
    """Exponent d(1/2 + 1/m) of |lam| in the power law for a pure tail."""
    return d * (0.5 + 1.0 / m)


@lru_cache(maxsize=None)
def model_constant(d: int, m: float) -> float:
    """h_{d,m}: W(lam) / (w_d |lam|^{d(1/2+1/m)}) for v = +-r^m, from one quadrature at |lam| = 1."""
    pot = power_potential(1.0, m)
    lam = 1.0 if m > 0 else -1.0
    return weyl_integral(pot, d, lam).value / weyl_constant(d)


def weyl_closed_form(
    model: str, d: int, lam: float, m: float | None = None, c: float = 1.0
) -> WeylEstimate:
    """Power law W(lam) = w_d h_{d,m} c^{-d/m} |lam|^{d(1/2+1/m)} for a pure tail.

    ``model`` is ``harmonic`` (m=2), ``coulomb`` (m=-1) or ``power`` (m required).
    """
    if model == "harmonic":
        m, c = 2.0, 1.0
    elif model == "coulomb":
        m, c = -1.0, 1.0
    elif model != "power" or m is None:
        raise ConfigurationError(f"unknown model {model!r} or missing exponent")
    if (m > 0 and lam < 0) or (m < 0 and not lam < 0):
        raise DomainError(f"energy {lam} has the wrong sign for m={m}")
    value = (
        weyl_constant(d) * model_constant(d, float(m)) * c ** (-d / m)
        * abs(lam) ** weyl_exponent(d, m)
    )
    return WeylEstimate(lam, value, "closed_form")


def singular_ball_fraction(pot: RadialPotential, d: int, lam: float, eps: float) -> float:
    """Share of W(lam) contributed by the ball B(0, eps)."""
    if not eps > 0:
        raise DomainError("ball radius must be positive")
    total = weyl_integral(pot, d, lam).value
    if total == 0.0:
        return 0.0
    r_lam = turning_radius(pot, lam)
    ball = weyl_constant(d) * sphere_area(d) * _radial_integral(pot, d, lam, 0.0, min(eps, r_lam))
    return ball / total


def inversion_constant(d: int, m: float) -> float:
    """Constant k with lam_n ~ k n^{1/e}, e = d(1/2+1/m), from 1 = w_d h_{d,m} k^e."""
    e = weyl_exponent(d, m)
    return (weyl_constant(d) * model_constant(d, m)) ** (-1.0 / e)

