import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pleijel_lab.errors import ConfigurationError
from pleijel_lab.potential import coulomb, harmonic, power_potential
from pleijel_lab.radial_solver import RadialGrid, default_grid, eigenfunction, eigenvalues_below


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("ell", [0, 1, 3])
def test_oscillator_radial_levels(d, ell):
    lines = eigenvalues_below(harmonic(), ell, d, 30.0)
    exact = [4 * (n - 1) + 2 * ell + d for n in range(1, 30) if 4 * (n - 1) + 2 * ell + d < 30]
    assert [ln.n for ln in lines] == list(range(1, len(exact) + 1))
    np.testing.assert_allclose([ln.lam for ln in lines], exact, rtol=1e-9)


@pytest.mark.parametrize("ell", [0, 1, 2])
def test_hydrogen_radial_levels(ell):
    lines = eigenvalues_below(coulomb(), ell, 3, -0.01)
    exact = [-1 / (4 * (n + ell) ** 2) for n in range(1, 5 - ell)]
    np.testing.assert_allclose([ln.lam for ln in lines][: len(exact)], exact, rtol=1e-6)


def test_richardson_improves_on_base_grid():
    grid = RadialGrid.uniform(8.0, 400)
    base = eigenvalues_below(harmonic(), 0, 2, 11.0, grid, levels=1)
    extrap = eigenvalues_below(harmonic(), 0, 2, 11.0, grid, levels=3)
    exact = np.array([2.0, 6.0, 10.0])
    err_base = np.abs([ln.lam for ln in base] - exact).max()
    err_extrap = np.abs([ln.lam for ln in extrap] - exact).max()
    assert err_extrap < 1e-3 * err_base


def test_line_multiplicities():
    assert {ln.multiplicity for ln in eigenvalues_below(harmonic(), 0, 3, 20.0)} == {1}
    assert {ln.multiplicity for ln in eigenvalues_below(harmonic(), 2, 3, 20.0)} == {5}


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 4), st.integers(1, 5), st.sampled_from([2, 3]))
def test_sturm_oscillation(ell, n, d):
    cutoff = 4 * n + 2 * ell + d
    f = eigenfunction(harmonic(), ell, d, n, cutoff=cutoff, levels=1)
    assert f.zero_count == n - 1
    assert len(f.zeros()) == n - 1
    assert np.sum(f.values**2 * f.weights) == pytest.approx(1.0, rel=1e-12)


def test_oscillator_ground_state_is_gaussian():
    f = eigenfunction(harmonic(), 0, 2, 1, cutoff=3.0)
    g = np.exp(-f.r**2 / 2)
    g /= np.sqrt(np.sum(g * g * f.weights))
    assert np.max(np.abs(f.values - g)) < 1e-4
    assert f.lam == pytest.approx(2.0, rel=1e-9)


def test_hydrogen_2s_node():
    # (1 - r/4) exp(-r/4) in units where the levels are -1/(4 n^2)
    f = eigenfunction(coulomb(), 0, 3, 2, cutoff=-0.02)
    assert f.zeros() == pytest.approx([4.0], rel=1e-4)


def test_singular_case_a_potential():
    pot = power_potential(1.0, 2.0, 0.5, 1.0)
    lines = eigenvalues_below(pot, 0, 3, 10.0)
    assert lines and lines[0].lam < 3.0
    assert all(a.lam < b.lam for a, b in zip(lines, lines[1:]))


def test_default_grid_reaches_forbidden_region():
    g = default_grid(harmonic(), 50.0)
    assert g.r_max > 1.4 * np.sqrt(50.0)
    assert default_grid(coulomb(), -0.01).spacing == "log"


def test_grid_validation():
    with pytest.raises(ConfigurationError):
        RadialGrid(1.0, 0.5, 200)
    with pytest.raises(ConfigurationError):
        RadialGrid(0.01, 1.0, 50)
    with pytest.raises(ConfigurationError):
        eigenvalues_below(harmonic(), 0, 2, 100.0, RadialGrid.uniform(3.0, 500))
    with pytest.raises(ConfigurationError):
        eigenvalues_below(coulomb(), 0, 3, 0.5)


def test_refined_grid_doubles_cells():
    g = RadialGrid.uniform(5.0, 200)
    r = g.refined()
    assert r.n_points == 400 and r.r_max == g.r_max
    assert r.faces().size == r.n_points + 1
