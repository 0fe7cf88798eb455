"""Special functions and the dimensional constants of the nodal-count bounds.

The Bessel kernel sums the ascending series in decimal arithmetic, so the
cancellation between large alternating terms for moderate arguments does not
eat into double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from functools import lru_cache

from .errors import ConsistencyError, DomainError, InternalError

__all__ = [
    "DimensionalConstants",
    "ball_volume",
    "bessel_j",
    "dimensional_constants",
    "first_bessel_zero",
    "gamma_fn",
    "pleijel_constant",
    "pleijel_constant_via_weyl",
    "sh_multiplicity",
    "sphere_area",
    "weyl_constant",
]

_MAX_ORDER = 50.0
_MAX_ARG = 100.0


def gamma_fn(x: float) -> float:
    """Euler's Gamma function on the positive half-line."""
    if not x > 0:
        raise DomainError(f"gamma_fn requires x > 0, got {x!r}")
    return math.gamma(x)


def bessel_j(nu: float, x: float) -> float:
    """Bessel function of the first kind J_nu(x) for nu, x >= 0.

    Evaluated from the ascending series

        J_nu(x) = (x/2)^nu / Gamma(nu+1) * sum_k (-x^2/4)^k / (k! (nu+1)_k)

    with the sum carried in ``Decimal`` at a precision that grows with ``x``.
    """
    if nu < 0 or x < 0:
        raise DomainError(f"bessel_j requires nu >= 0 and x >= 0, got ({nu}, {x})")
    if nu > _MAX_ORDER or x > _MAX_ARG:
        raise DomainError(f"bessel_j supports nu <= {_MAX_ORDER}, x <= {_MAX_ARG}")
    if x == 0.0:
        return 1.0 if nu == 0 else 0.0

    with localcontext() as ctx:
        # largest term is roughly exp(x); keep ~25 digits beyond it
        ctx.prec = 28 + int(0.45 * x)
        q = Decimal(x) * Decimal(x) / 4
        dnu = Decimal(nu)
        term = Decimal(1)
        total = Decimal(1)
        k = 0
        tiny = Decimal(10) ** (-ctx.prec)
        while True:
            k += 1
            term = -term * q / (k * (dnu + k))
            total += term
            if k > q.sqrt() and abs(term) < tiny * abs(total):
                break
            if k > 2000:
                raise InternalError("Bessel series failed to converge")
        series = float(total)

    return series * math.exp(nu * math.log(x / 2.0) - math.lgamma(nu + 1.0))


@lru_cache(maxsize=None)
def first_bessel_zero(nu: float) -> float:
    """Smallest positive zero j_nu of J_nu.

    J_nu is positive on (0, j_nu) and j_nu > nu, so the scan starts at
    max(nu, 0.1) with step 0.1 and the bracket is closed by bisection.
    """
    if nu < 0:
        raise DomainError(f"first_bessel_zero requires nu >= 0, got {nu}")
    if nu > _MAX_ORDER:
        raise DomainError(f"first_bessel_zero supports nu <= {_MAX_ORDER}")

    step = 0.1
    a = max(nu, 0.1)
    fa = bessel_j(nu, a)
    for _ in range(2000):
        b = a + step
        fb = bessel_j(nu, b)
        if fa > 0 >= fb:
            break
        a, fa = b, fb
    else:
        raise InternalError(f"could not bracket the first zero of J_{nu}")

    while b - a > 1e-12:
        mid = 0.5 * (a + b)
        if bessel_j(nu, mid) > 0:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def ball_volume(d: int) -> float:
    """Volume of the unit ball in R^d."""
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    return math.pi ** (d / 2) / gamma_fn(d / 2 + 1)


def sphere_area(d: int) -> float:
    """Surface measure of S^{d-1}, equal to d times the unit-ball volume."""
    return d * ball_volume(d)


def weyl_constant(d: int) -> float:
    return (2 * math.pi) ** (-d) * ball_volume(d)


def _check_dim(d: int) -> None:
    if int(d) != d or d < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {d}")


def pleijel_constant_via_weyl(d: int) -> float:
    """gamma(d) written as 1 / (w_d * omega_d * lambda(B_d)^{d/2})."""
    _check_dim(d)
    j = first_bessel_zero(d / 2 - 1)
    return 1.0 / (weyl_constant(d) * ball_volume(d) * (j * j) ** (d / 2))


def pleijel_constant(d: int) -> float:
    """Pleijel's constant 2^{d-2} d^2 Gamma(d/2)^2 / j_{d/2-1}^d.

    Raises
    ------
    ConsistencyError
        If the Weyl-constant form of the same constant disagrees beyond
        1e-10 relative.
    """
    _check_dim(d)
    j = first_bessel_zero(d / 2 - 1)
    direct = 2.0 ** (d - 2) * d * d * gamma_fn(d / 2) ** 2 / j**d
    other = pleijel_constant_via_weyl(d)
    if abs(direct - other) > 1e-10 * abs(other):
        raise ConsistencyError(
            f"gamma({d}) mismatch: closed form {direct!r} vs Weyl form {other!r}"
        )
    return direct


def _binom(a: int, b: int) -> int:
    if b < 0 or a < 0 or a < b:
        return 0
    return math.comb(a, b)


def sh_multiplicity(ell: int, d: int) -> int:
    """Dimension of the degree-ell spherical harmonics on S^{d-1}."""
    if ell < 0:
        raise DomainError(f"ell must be >= 0, got {ell}")
    _check_dim(d)
    return _binom(ell + d - 1, d - 1) - _binom(ell + d - 3, d - 1)


@dataclass(frozen=True)
class DimensionalConstants:
    d: int
    omega_d: float
    w_d: float
    lambda_Bd: float
    gamma_d: float


def dimensional_constants(d: int) -> DimensionalConstants:
    _check_dim(d)
    j = first_bessel_zero(d / 2 - 1)
    return DimensionalConstants(
        d=d,
        omega_d=ball_volume(d),
        w_d=weyl_constant(d),
        lambda_Bd=j * j,
        gamma_d=pleijel_constant(d),
    )
