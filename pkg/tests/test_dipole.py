import math

import numpy as np
import pytest

from gaugeqed import (BoundaryLeak, GridTooCoarse, Grid, PotentialSpec, harmonic_eigensystem, nonlinearity,
                      oscillator_strength, renormalize_potential, solve_dipole, trk_sum)
from oracles import DW_LEVELS, ho_basis_levels

SW = PotentialSpec.square_well()


def test_harmonic_ladder():
    sys = solve_dipole(PotentialSpec.harmonic(1.0), Grid(-10, 10, 2001), 20, check_convergence=False)
    assert np.allclose(sys.energies, np.arange(20) + 0.5, atol=1e-6)
    assert oscillator_strength(sys) == pytest.approx(1.0, abs=1e-9)
    assert trk_sum(sys, 2) == pytest.approx(0.5, abs=1e-12)


def test_square_well_levels_and_scalars():
    sys = solve_dipole(SW, None, 6)
    n = np.arange(1, 7)
    assert np.allclose(sys.energies, math.pi**2 * n**2 / 8, rtol=1e-9)
    assert sys.energies[0] == pytest.approx(1.2337, abs=1e-4)
    assert sys.f == pytest.approx(256 / (27 * math.pi**2), abs=1e-9)
    assert nonlinearity(sys) == pytest.approx(8 / 3, abs=1e-9)
    assert trk_sum(sys, 1) == pytest.approx(sys.f / 2, rel=1e-14)
    assert sys.omega_sq() is None


@pytest.mark.parametrize("beta", [2.4, 3.7])
def test_double_well_against_oscillator_basis(beta):
    sys = solve_dipole(PotentialSpec.double_well(beta), Grid(-6, 6, 2001), 4, check_convergence=False)
    e0, e1 = DW_LEVELS[beta]
    assert sys.energies[0] == pytest.approx(e0, abs=1e-6)
    assert sys.energies[1] - sys.energies[0] == pytest.approx(e1 - e0, abs=1e-6)


def test_frozen_oracle_is_reproducible():
    e = ho_basis_levels(2.4, w=2.5)
    assert e[:2] == pytest.approx(DW_LEVELS[2.4], abs=1e-10)


def test_reference_scalars_double_well():
    dw23 = solve_dipole(PotentialSpec.double_well(2.3), None, 5)
    assert dw23.f == pytest.approx(0.71, abs=0.01)
    dw37 = solve_dipole(PotentialSpec.double_well(3.7), None, 5)
    assert dw37.f == pytest.approx(0.1, abs=0.025)
    assert dw37.delta_nl == pytest.approx(100, rel=0.05)


@pytest.mark.parametrize("pot", [SW, PotentialSpec.double_well(2.4), PotentialSpec.double_well(3.7),
                                 PotentialSpec.flux_cosine(50 / 96, 7 / 96)])
def test_eigensystem_invariants(pot):
    sys = solve_dipole(pot, None, 20)
    h = sys.grid.spacing
    overlap = sys.wavefunctions @ sys.wavefunctions.T * h
    assert np.allclose(overlap, np.eye(20), atol=1e-8)
    assert np.array_equal(sys.x_mat, sys.x_mat.T)
    assert np.array_equal(sys.p_mat, -sys.p_mat.T)
    assert np.all(np.diff(sys.energies) > 0)
    assert sys.x_mat[0, 1] > 0
    n, k = np.indices((20, 20))
    same = (n + k) % 2 == 0
    assert np.abs(sys.x_mat[same]).max() < 1e-8
    # p_nk = i (e_n - e_k) x_nk
    half = 10
    w = sys.energies[:half]
    lhs = sys.p_mat[:half, :half]
    rhs = (w[:, None] - w[None, :]) * sys.x_mat[:half, :half]
    assert np.abs(lhs - rhs).max() < 1e-4 * np.abs(sys.p_mat).max()


def test_matrix_element_structure_double_well():
    # the strongest position element from the ground state is the tunnel-split partner,
    # while the strongest momentum element goes to a higher level
    for beta in (3.0, 3.7):
        sys = solve_dipole(PotentialSpec.double_well(beta), None, 20)
        assert np.argmax(np.abs(sys.x_mat[0])) == 1
        assert np.argmax(np.abs(sys.p_mat[0])) > 1


def test_fd3_agrees_with_dvr_at_fine_grid():
    pot = PotentialSpec.double_well(2.4)
    dvr = solve_dipole(pot, Grid(-6, 6, 401), 5, check_convergence=False)
    fd = solve_dipole(pot, Grid(-6, 6, 4001), 5, method="fd3", check_convergence=False)
    assert np.allclose(fd.energies, dvr.energies, atol=1e-5)
    assert fd.f == pytest.approx(dvr.f, rel=1e-4)


def test_grid_refinement_changes_scalars_little():
    pot = PotentialSpec.double_well(3.7)
    a = solve_dipole(pot, Grid(-7.5, 7.5, 401), 10, check_convergence=False)
    b = solve_dipole(pot, Grid(-7.5, 7.5, 801), 10, check_convergence=False)
    for name in ("f", "delta_nl", "trk_partial"):
        assert getattr(a, name) == pytest.approx(getattr(b, name), rel=1e-4)


def test_grid_too_coarse():
    with pytest.raises(GridTooCoarse):
        solve_dipole(PotentialSpec.double_well(2.4), Grid(-12, 12, 65), 16)


def test_boundary_leak_without_widening():
    with pytest.raises(BoundaryLeak):
        solve_dipole(PotentialSpec.harmonic(0.05), Grid(-3, 3, 201), 5, auto_widen=False, check_convergence=False)


def test_auto_widening_recovers():
    sys = solve_dipole(PotentialSpec.harmonic(0.5), Grid(-4, 4, 201), 5, check_convergence=False)
    assert sys.grid.xi_max > 4
    assert np.allclose(sys.energies, 0.5 * (np.arange(5) + 0.5), atol=1e-8)


def test_n_levels_bound():
    with pytest.raises(ValueError):
        solve_dipole(SW, Grid(-1, 1, 100), 26)


def test_renormalize_potential():
    dw = PotentialSpec.double_well(2.4)
    r = renormalize_potential(dw, math.sqrt(2.4))
    assert r.curvature() == pytest.approx(0.0, abs=1e-12)
    assert renormalize_potential(dw, 0.0) == dw
    with pytest.raises(ValueError):
        renormalize_potential(dw, -1.0)


def test_renormalized_square_well_against_tabulated_oracle():
    grid = Grid(-1, 1, 801)
    direct = solve_dipole(renormalize_potential(SW, 2.0), grid, 6, check_convergence=False)
    # tabulated potentials carry no wall information, so the edge check is switched off
    tab = solve_dipole(PotentialSpec.tabulated(2.0 * grid.points**2), grid, 6, check_convergence=False,
                       leak_tol=np.inf)
    assert np.allclose(direct.energies, tab.energies, atol=1e-12)
    assert direct.energies[0] > math.pi**2 / 8


def test_analytic_harmonic_matches_grid():
    h = harmonic_eigensystem(1.3, 8, gamma=0.7)
    g = solve_dipole(PotentialSpec.harmonic(1.3).with_correction(0.7), None, 8)
    assert np.allclose(h.energies, g.energies, atol=1e-9)
    assert np.allclose(h.x_mat, g.x_mat, atol=1e-9)
    assert np.allclose(h.p_mat, g.p_mat, atol=1e-9)


def test_rescaled_keeps_dimensionless_scalars():
    sys = solve_dipole(PotentialSpec.flux_cosine(50 / 96, 7 / 96), None, 10)
    s = sys.rescaled(96.0)
    assert s.omega10 == pytest.approx(96 * sys.omega10)
    assert s.f == pytest.approx(sys.f, rel=1e-13)
    assert s.trk_partial == pytest.approx(sys.trk_partial, rel=1e-13)


def test_csv_export():
    sys = solve_dipole(SW, None, 4)
    lines = sys.to_csv().splitlines()
    assert lines[0] == "n,energy,x_0n,p_0n"
    assert len(lines) == 5
    assert float(lines[2].split(",")[1]) == sys.energies[1]
