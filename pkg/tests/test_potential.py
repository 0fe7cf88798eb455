import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pleijel_lab.errors import DomainError
from pleijel_lab.potential import (
    Case,
    a_m_candidates,
    continuous_degree,
    coulomb,
    degree_bound,
    effective_min,
    hardy_radius,
    harmonic,
    model_effective_min,
    parse_potential,
    power_potential,
    turning_radius,
)


def test_model_cases():
    assert harmonic().case is Case.A and not harmonic().singular
    assert coulomb().case is Case.B and coulomb().singular
    assert harmonic()(3.0) == pytest.approx(9.0)
    assert coulomb()(4.0) == pytest.approx(-0.25)
    assert harmonic().lambda_0 == pytest.approx(4.0)


@pytest.mark.parametrize("text", ["harmonic", "coulomb", "powc:2,3", "powc:1.5,4,0.5,1"])
def test_parse_round_trip(text):
    assert parse_potential(parse_potential(text).spec()) == parse_potential(text)


@pytest.mark.parametrize("text", ["quartic", "powc:1", "powc:1,1", "powc:1,-2", "powc:1,2,1,2"])
def test_parse_rejects(text):
    with pytest.raises(DomainError):
        parse_potential(text)


def test_turning_radius_closed_forms():
    assert turning_radius(harmonic(), 25.0) == pytest.approx(5.0, rel=1e-11)
    assert turning_radius(coulomb(), -0.01) == pytest.approx(100.0, rel=1e-11)
    with pytest.raises(DomainError):
        turning_radius(coulomb(), 0.5)


@pytest.mark.parametrize("ell", [1, 2, 5, 20])
def test_effective_min_closed_forms(ell):
    # r^2 + L/r^2 has minimum 2 sqrt(L); -1/r + L/r^2 has minimum -1/(4L)
    L2, L3 = ell * ell, ell * (ell + 1)
    assert effective_min(harmonic(), ell, 2) == pytest.approx(2 * math.sqrt(L2), rel=1e-10)
    assert effective_min(coulomb(), ell, 3) == pytest.approx(-1 / (4 * L3), rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.2, 5.0), st.floats(1.2, 6.0), st.floats(1.0, 200.0))
def test_effective_min_matches_model_case_a(c, m, L):
    pot = power_potential(c, m)
    from pleijel_lab.potential import _effective_min_L

    assert _effective_min_L(pot, L) == pytest.approx(model_effective_min(c, m, L), rel=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.2, 5.0), st.floats(-1.8, -0.2), st.floats(1.0, 200.0))
def test_effective_min_matches_model_case_b(c, m, L):
    pot = power_potential(c, m)
    from pleijel_lab.potential import _effective_min_L

    assert _effective_min_L(pot, L) == pytest.approx(model_effective_min(c, m, L), rel=1e-8)


@pytest.mark.parametrize("lam", [5.0, 17.0, 100.0, 333.0])
def test_degree_bound_harmonic_plane(lam):
    # m_ell = 2 ell in d = 2, so p is the smallest p >= 1 with 2p >= lam
    assert degree_bound(harmonic(), lam, 2) == max(1, math.ceil(lam / 2))


def test_continuous_degree_brackets_integer_bound():
    for lam in (40.0, 90.0, 250.0):
        p = degree_bound(harmonic(), lam, 3)
        assert p - 1 < continuous_degree(harmonic(), lam, 3) <= p


def test_a_m_candidates_agree_for_harmonic():
    printed, inverted = a_m_candidates(1.0, 2.0)
    assert printed == pytest.approx(0.5) and inverted == pytest.approx(0.5)


def test_inverted_a_m_describes_the_degree_growth():
    pot, lam = power_potential(1.0, 4.0), 1e6
    printed, inverted = a_m_candidates(1.0, 4.0)
    scaled = continuous_degree(pot, lam, 2) * lam ** (-0.75)
    assert scaled == pytest.approx(inverted, rel=1e-3)
    assert abs(scaled - printed) > 0.1


def test_hardy_radius_coulomb_three_dimensions():
    # -1/r + 1/(4 r^2) > 0 exactly for r < 1/4
    assert hardy_radius(coulomb(), -0.01, 3).radius == pytest.approx(0.25, rel=1e-9)


def test_hardy_radius_case_a_plane():
    hr = hardy_radius(harmonic(), 100.0, 2, epsilon=0.05)
    assert hr.radius == pytest.approx(100.0 ** (-0.55))


def test_hardy_radius_coulomb_plane_is_inside_turning_radius():
    hr = hardy_radius(coulomb(), -0.05, 2)
    assert 0 < hr.radius <= turning_radius(coulomb(), -0.05)


def test_potential_rejects_origin():
    with pytest.raises(DomainError):
        harmonic()(0.0)
