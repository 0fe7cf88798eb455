import math

import pytest
import scipy.special as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from pleijel_lab.constants import (
    ball_volume,
    bessel_j,
    dimensional_constants,
    first_bessel_zero,
    pleijel_constant,
    sh_multiplicity,
    sphere_area,
    weyl_constant,
)
from pleijel_lab.errors import DomainError


def test_first_bessel_zeros_match_scipy():
    for nu in range(0, 4):
        assert first_bessel_zero(nu) == pytest.approx(sp.jn_zeros(nu, 1)[0], rel=1e-11)
    assert first_bessel_zero(0.5) == pytest.approx(math.pi, rel=1e-11)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 5.0), st.floats(0.01, 30.0))
def test_bessel_series_matches_scipy(nu, x):
    assert bessel_j(nu, x) == pytest.approx(sp.jv(nu, x), rel=1e-9, abs=1e-12)


def test_gamma_two_dimensions():
    # 4 / j_0^2, with j_0 from a reference table
    assert pleijel_constant(2) == pytest.approx(4 / 2.404825557695773**2, rel=1e-12)


def test_gamma_below_one_and_decreasing():
    gs = [pleijel_constant(d) for d in range(2, 11)]
    assert all(g < 1 for g in gs)
    assert all(a > b for a, b in zip(gs, gs[1:]))


def test_ball_and_sphere():
    assert ball_volume(2) == pytest.approx(math.pi)
    assert ball_volume(3) == pytest.approx(4 * math.pi / 3)
    assert sphere_area(3) == pytest.approx(4 * math.pi)
    assert weyl_constant(2) == pytest.approx(1 / (4 * math.pi))


@pytest.mark.parametrize(
    "d, expected",
    [(2, [1, 2, 2, 2]), (3, [1, 3, 5, 7]), (4, [1, 4, 9, 16]), (5, [1, 5, 14, 30])],
)
def test_harmonic_multiplicities(d, expected):
    assert [sh_multiplicity(ell, d) for ell in range(4)] == expected


@given(st.integers(0, 40), st.integers(2, 8))
def test_multiplicities_sum_to_polynomial_dimension(L, d):
    # harmonics of degree L and L-1 span the restrictions of degree-L polynomials
    total = sum(sh_multiplicity(ell, d) for ell in range(L + 1) if ell % 2 == L % 2)
    assert total == math.comb(L + d - 1, d - 1)


def test_dimensional_constants_record():
    dc = dimensional_constants(3)
    assert dc.lambda_Bd == pytest.approx(math.pi**2, rel=1e-11)
    assert dc.gamma_d == pytest.approx(pleijel_constant(3))


@pytest.mark.parametrize("bad", [1, 0, 2.5])
def test_bad_dimension(bad):
    with pytest.raises(DomainError):
        pleijel_constant(bad)


def test_bessel_rejects_negative_argument():
    with pytest.raises(DomainError):
        bessel_j(0, -1.0)
